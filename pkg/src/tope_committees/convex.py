"""Convex subsets of the ground set, read off the tope set.

An element ``e`` lies in ``conv(A)`` when every tope positive on all of ``A``
is also positive on ``e``, i.e. ``T_A^+ <= T_e^+``.  Element sets are masks
with bit ``e-1`` for element ``e``; tope sets are masks over tope indices.
The public functions also accept iterables of 1-based elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .bits import iter_bits, mask_of, popcount
from .errors import CapExceeded, NotConvex, IndexOutOfRange
from .om import OrientedMatroid, SignVector

MAX_CONVEX_SETS = 1_000_000
MAX_DIRECT_ELEMENTS = 22
MAX_BRUTE_SUBSETS = 5_000_000


def _elements(om: OrientedMatroid, A) -> int:
    if isinstance(A, int):
        if A < 0 or A >> om.t:
            raise IndexOutOfRange("element mask has bits beyond the ground set")
        return A
    A = list(A)
    for e in A:
        if not 1 <= e <= om.t:
            raise IndexOutOfRange(f"element {e} outside 1..{om.t}")
    return mask_of(e - 1 for e in A)


def _topes(om: OrientedMatroid, d) -> int:
    if isinstance(d, int):
        return d
    out = 0
    for x in d:
        out |= 1 << (x if isinstance(x, int) else om.index(x))
    return out


def as_elements(mask: int) -> frozenset:
    return frozenset(e + 1 for e in iter_bits(mask))


def cell(om: OrientedMatroid, A) -> int:
    """``T_A^+``: topes positive on every element of ``A`` (all topes for ``A`` empty)."""
    cur = om.full_mask
    for e in iter_bits(_elements(om, A)):
        cur &= om.positive_masks[e]
    return cur


def _conv_of_cell(om, c: int) -> int:
    return mask_of(e for e, P in enumerate(om.positive_masks) if c & P == c)


def conv_mask(om: OrientedMatroid, A: int) -> int:
    return _conv_of_cell(om, cell(om, A))


def conv(om: OrientedMatroid, A) -> frozenset:
    return as_elements(conv_mask(om, _elements(om, A)))


def is_convex(om: OrientedMatroid, A) -> bool:
    A = _elements(om, A)
    return conv_mask(om, A) == A


def extreme_points(om: OrientedMatroid, A) -> frozenset:
    A = _elements(om, A)
    if conv_mask(om, A) != A:
        raise NotConvex(f"{sorted(as_elements(A))} is not convex")
    return as_elements(mask_of(a for a in iter_bits(A) if not conv_mask(om, A & ~(1 << a)) >> a & 1))


def is_free(om: OrientedMatroid, A) -> bool:
    """Convex with every point extreme; raises :class:`NotConvex` otherwise."""
    A = _elements(om, A)
    return len(extreme_points(om, A)) == popcount(A)


def gamma(om: OrientedMatroid, d) -> frozenset:
    """The largest element set whose positive cell contains the tope set ``d``."""
    d = _topes(om, d)
    if d == 0:
        raise ValueError("gamma needs a nonempty tope set")
    return as_elements(_conv_of_cell(om, d))


@dataclass(frozen=True)
class ConvexSet:
    mask: int
    cell: int
    extreme: int
    free: bool

    @property
    def elements(self) -> frozenset:
        return as_elements(self.mask)

    def __len__(self):
        return popcount(self.mask)


@dataclass(frozen=True)
class ConvexSemilattice:
    """All convex sets, sorted by size then mask; ``sets[0]`` is the empty set."""

    t: int
    sets: tuple

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, A) -> bool:
        m = A if isinstance(A, int) else mask_of(e - 1 for e in A)
        return any(s.mask == m for s in self.sets)

    def free_sets(self) -> list:
        return [s for s in self.sets if s.free]

    def summary(self) -> dict:
        """Counts of convex and free sets per cardinality."""
        out = {}
        for s in self.sets:
            row = out.setdefault(len(s), {"convex": 0, "free": 0})
            row["convex"] += 1
            row["free"] += s.free
        return dict(sorted(out.items()))

    def below(self, A: int) -> list:
        return [s for s in self.sets if s.mask & A == s.mask]


def convex_sets(om: OrientedMatroid, max_sets: int = MAX_CONVEX_SETS) -> ConvexSemilattice:
    """Every fixed point of ``conv``.

    A closed set ``B`` is reached from the empty set by repeatedly closing
    ``A | {b}`` with ``b`` in ``B - A``, and every step stays inside ``B``,
    so growing one element at a time finds them all.
    """
    start = conv_mask(om, 0)
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for A in frontier:
            for e in range(om.t):
                if A >> e & 1:
                    continue
                B = conv_mask(om, A | (1 << e))
                if B not in found:
                    found.add(B)
                    nxt.append(B)
                    if len(found) > max_sets:
                        raise CapExceeded("convex_sets", max_sets)
        frontier = nxt
    out = []
    for A in sorted(found, key=lambda x: (popcount(x), x)):
        ext = mask_of(a for a in iter_bits(A) if not conv_mask(om, A & ~(1 << a)) >> a & 1)
        out.append(ConvexSet(A, cell(om, A), ext, ext == A))
    return ConvexSemilattice(om.t, tuple(out))


def ideal_layer_count(om: OrientedMatroid, j: int, method: str = "FreeSets",
                      lattice: ConvexSemilattice | None = None) -> int:
    """Number of ``j``-sets of topes lying in at least one positive halfspace.

    ``Direct``: inclusion-exclusion over nonempty element sets ``E'``,
    with ``E'`` contributing ``-(-1)**|E'| * C(|T_E'^+|, j)``.
    ``FreeSets``: the same sum with the element sets grouped by their
    convex hull; only free hulls survive.
    ``Brute``: enumerate the ``j``-sets.
    """
    N = om.num_topes
    if not 1 <= j <= N // 2:
        raise ValueError(f"j must lie in 1..{N // 2}")
    if method == "Brute":
        if math.comb(N, j) > MAX_BRUTE_SUBSETS:
            raise CapExceeded("brute_subsets", MAX_BRUTE_SUBSETS, math.comb(N, j))
        pos = om.positive_masks
        return sum(1 for c in combinations(range(N), j)
                   if any(mask_of(c) & P == mask_of(c) for P in pos))
    if method == "Direct":
        if om.t > MAX_DIRECT_ELEMENTS:
            raise CapExceeded("direct_elements", MAX_DIRECT_ELEMENTS, om.t)
        total = 0
        # cells[S] built from cells[S minus lowest bit]
        cells = [om.full_mask] * (1 << om.t)
        for S in range(1, 1 << om.t):
            low = S & -S
            cells[S] = cells[S ^ low] & om.positive_masks[low.bit_length() - 1]
            total += (1 if popcount(S) % 2 else -1) * math.comb(popcount(cells[S]), j)
        return total
    if method == "FreeSets":
        lattice = lattice or convex_sets(om)
        return -sum((-1) ** len(s) * math.comb(popcount(s.cell), j)
                    for s in lattice.free_sets() if s.mask)
    raise ValueError(f"unknown method {method!r}")


def hull_sign_sum(om: OrientedMatroid, A: int) -> int:
    """``sum((-1)**|E'|)`` over the element sets ``E'`` whose hull is ``A``."""
    return sum(-1 if popcount(E) % 2 else 1
               for E in _submasks_incl(A) if conv_mask(om, E) == A)


def _submasks_incl(A: int):
    s = A
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & A


__all__ = [
    "ConvexSet", "ConvexSemilattice", "cell", "conv", "conv_mask", "convex_sets",
    "extreme_points", "gamma", "hull_sign_sum", "ideal_layer_count", "is_convex", "is_free",
    "as_elements", "SignVector",
]
