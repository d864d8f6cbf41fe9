"""Built-in instances and seeded realizable oriented matroids.

Random instances come from integer vector configurations.  A sign vector
is a tope iff the strict system ``sign_e * <v_e, x> > 0`` has a solution,
which is decided by Fourier-Motzkin elimination over exact rationals.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from .errors import DimensionTooLarge, RetryBudgetExceeded
from .om import OrientedMatroid, SignVector, reorient, validate

MAX_DIMENSION = 4
MAX_GENERATED_T = 12

# One tope of each opposite pair: the third positive halfspace of the
# six-element example, 14 rows.
PAPER_HALFSPACE_ROWS = (
    "--++++",
    "--+-++",
    "+-+-++",
    "+-+-+-",
    "--+-+-",
    "--+++-",
    "--++-+",
    "-+++-+",
    "-++++-",
    "-++-+-",
    "+++-+-",
    "+++---",
    "-++---",
    "-+++--",
)

TRIANGLE_ROWS = ("+--", "++-", "-+-", "-++", "--+", "+-+")
TRIANGLE_VECTORS = ((1, 0), (-1, 1), (0, -1))


def paper_example() -> OrientedMatroid:
    """The 28-tope oriented matroid on six elements.

    The listed rows come first, followed by their negations in the same
    order.
    """
    rows = [SignVector.from_string(r) for r in PAPER_HALFSPACE_ROWS]
    return OrientedMatroid(6, rows + [-T for T in rows])


def triangle() -> OrientedMatroid:
    """Three vectors at pairwise obtuse angles in the plane: six topes."""
    return OrientedMatroid(3, TRIANGLE_ROWS)


# ---------------------------------------------------------------------------
# exact feasibility
# ---------------------------------------------------------------------------

def _normalise(row):
    lead = next((abs(c) for c in row if c != 0), None)
    if lead is None:
        return tuple(row)
    return tuple(c / lead for c in row)


def strictly_feasible(rows, max_dimension: int = MAX_DIMENSION) -> bool:
    """Is there an ``x`` with ``<row, x> > 0`` for every row?

    Homogeneous strict inequalities only.  Variables are eliminated one at
    a time; adding two strict inequalities gives a strict inequality, and
    the system is infeasible iff a ``0 > 0`` row survives.
    """
    rows = [tuple(Fraction(c) for c in r) for r in rows]
    if not rows:
        return True
    d = len(rows[0])
    if any(len(r) != d for r in rows):
        raise ValueError("rows must share one dimension")
    if d > max_dimension:
        raise DimensionTooLarge(f"dimension {d} exceeds {max_dimension}")
    system = {_normalise(r) for r in rows}
    for j in range(d - 1, -1, -1):
        if any(all(c == 0 for c in r) for r in system):
            return False
        pos = [r for r in system if r[j] > 0]
        neg = [r for r in system if r[j] < 0]
        nxt = {r for r in system if r[j] == 0}
        for p in pos:
            for n in neg:
                a, b = p[j], -n[j]
                nxt.add(_normalise(tuple(b * x + a * y for x, y in zip(p, n))))
        system = {r[:j] for r in nxt}
    return not system


# ---------------------------------------------------------------------------
# random realizable instances
# ---------------------------------------------------------------------------

def _det(m):
    m = [list(map(Fraction, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for cc in range(c, n):
                m[r][cc] -= f * m[c][cc]
    return det


def is_generic(vectors) -> bool:
    """Every ``d`` of the vectors are linearly independent."""
    d = len(vectors[0])
    return all(_det(sub) != 0 for sub in combinations(vectors, d))


def _parallel(u, v) -> bool:
    # 2x2 minors all vanish
    d = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(d) for j in range(i + 1, d))


def topes_of_vectors(vectors) -> list:
    """All realised full-support sign vectors, in lexicographic order of signs."""
    t = len(vectors)
    out = []
    for signs in product((1, -1), repeat=t):
        rows = [tuple(s * c for c in v) for s, v in zip(signs, vectors)]
        if strictly_feasible(rows, max_dimension=len(vectors[0])):
            out.append(SignVector(t, frozenset(i + 1 for i, s in enumerate(signs) if s > 0)))
    return out


def oriented_matroid_of_vectors(vectors) -> OrientedMatroid:
    return OrientedMatroid(len(vectors), topes_of_vectors(vectors))


def expected_generic_tope_count(t: int, d: int) -> int:
    from math import comb
    return 2 * sum(comb(t - 1, i) for i in range(d))


def random_realizable(t: int, d: int, seed, *, coord_range: int = 9,
                      max_tries: int = 200, max_dimension: int = MAX_DIMENSION):
    """A seeded, generic, simple, non-acyclic realizable oriented matroid.

    Integer vectors are drawn until they are pairwise non-parallel and in
    general position.  If the configuration is acyclic, it is reoriented on
    the negative part of a sign vector that is *not* a tope, which removes
    the all-plus tope.  When every sign vector is a tope (``t <= d``) no
    reorientation helps and the draw is rejected.
    """
    if d > max_dimension:
        raise DimensionTooLarge(f"dimension {d} exceeds {max_dimension}")
    if not 2 <= d:
        raise ValueError("dimension must be at least 2")
    if not 3 <= t <= MAX_GENERATED_T:
        raise ValueError(f"t must lie in 3..{MAX_GENERATED_T}")
    rng = random.Random(seed)
    for _ in range(max_tries):
        vecs = [tuple(rng.randint(-coord_range, coord_range) for _ in range(d)) for _ in range(t)]
        if any(all(c == 0 for c in v) for v in vecs):
            continue
        if any(_parallel(u, v) for u, v in combinations(vecs, 2)):
            continue
        if not is_generic(vecs):
            continue
        om = oriented_matroid_of_vectors(vecs)
        if validate(om):
            missing = _missing_sign_vectors(om)
            if not missing:
                continue
            target = min(missing, key=lambda T: (t - len(T.positives), str(T)))
            S = frozenset(range(1, t + 1)) - target.positives
            om = reorient(om, S)
            if validate(om):
                continue
        return om
    raise RetryBudgetExceeded(
        f"no generic non-acyclic configuration for t={t}, d={d} after {max_tries} draws")


def _missing_sign_vectors(om: OrientedMatroid) -> list:
    present = set(om.topes)
    t = om.t
    return [SignVector(t, frozenset(i + 1 for i, s in enumerate(signs) if s))
            for signs in product((1, 0), repeat=t)
            if SignVector(t, frozenset(i + 1 for i, s in enumerate(signs) if s)) not in present]
