"""Relative r-blocking in the face semilattice of the crosspolytope boundary.

Faces are opposite-free subsets of ``{-m..-1, 1..m}``.  Element ``i`` is bit
``i-1`` and ``-i`` is bit ``m+i-1``, so a set is opposite-free iff no pair
``(i-1, m+i-1)`` is fully present.  A union that picks up an opposite pair
is the adjoined top of the face lattice; such unions are never kept.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .bits import iter_bits, popcount
from .blocking import nu_of
from .errors import CapExceeded, ConstraintViolation, EmptyMember, RetryBudgetExceeded
from .families import (
    DEFAULT_BUDGET,
    Budget,
    GeneratorSpec,
    PairFilter,
    SupportWeight,
    binom,
    blocking_weight,
    direct_sum,
    double_mobius_sum,
    grouped_sum,
)

METHODS = ("DoubleMobius", "DoubleIE")
CLI_METHODS = {"double-mobius": "DoubleMobius", "double-ie": "DoubleIE"}
MAX_BRUTE = 5_000_000


def encode(m: int, signed) -> int:
    x = 0
    for e in signed:
        if e == 0 or abs(e) > m:
            raise ValueError(f"element {e} outside -{m}..-1, 1..{m}")
        x |= 1 << (e - 1 if e > 0 else m - e - 1)
    return x


def decode(m: int, x: int) -> list:
    return sorted((b + 1 if b < m else -(b - m + 1) for b in iter_bits(x)), key=lambda e: (abs(e), e < 0))


def opposite_free(m: int) -> PairFilter:
    return PairFilter(tuple((i, m + i) for i in range(m)))


def layer_size(m: int, k: int) -> int:
    """Number of opposite-free ``k``-sets: pick the support, then the signs."""
    return (1 << k) * math.comb(m, k)


def layer(m: int, k: int):
    """Yield every opposite-free ``k``-set as a mask."""
    for support in combinations(range(m), k):
        for signs in product((0, 1), repeat=k):
            x = 0
            for i, s in zip(support, signs):
                x |= 1 << (i + s * m)
            yield x


@dataclass(frozen=True)
class CrossInstance:
    m: int
    antichain: tuple  # masks in the signed encoding
    r: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "antichain", tuple(self.antichain))
        keep = opposite_free(self.m)
        if self.m < 1:
            raise ValueError("m must be positive")
        if not self.antichain:
            raise ValueError("antichain must be nonempty")
        for lam in self.antichain:
            if lam == 0:
                raise EmptyMember("antichain member is empty")
            if lam >> (2 * self.m):
                raise ValueError("member leaves the signed ground set")
            if not keep(lam):
                raise ValueError(f"member {decode(self.m, lam)} contains an opposite pair")
        for a, b in combinations(self.antichain, 2):
            if a & b == a or a & b == b:
                raise ValueError("members are not pairwise incomparable")
        if not 0 <= self.r < 1:
            raise ValueError("r must satisfy 0 <= r < 1")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"k must lie in 1..{self.m}")

    @classmethod
    def from_sets(cls, m: int, sets, r, k: int) -> "CrossInstance":
        return cls(m, tuple(encode(m, s) for s in sets), Fraction(r), k)

    @property
    def nu(self) -> int:
        return nu_of(self.r, self.k)

    def sets(self) -> list:
        return [decode(self.m, lam) for lam in self.antichain]

    def is_blocking(self, b: int) -> bool:
        p, q = self.r.numerator, self.r.denominator
        return all(q * popcount(b & lam) > p * self.k for lam in self.antichain)


def brute_blockers_cross(inst: CrossInstance, limit: int = MAX_BRUTE) -> int:
    size = layer_size(inst.m, inst.k)
    if size > limit:
        raise CapExceeded("brute_subsets", limit, size)
    return sum(1 for b in layer(inst.m, inst.k) if inst.is_blocking(b))


def _spec(inst: CrossInstance) -> GeneratorSpec:
    return GeneratorSpec(2 * inst.m, tuple(inst.antichain), (inst.nu,) * len(inst.antichain),
                         keep=opposite_free(inst.m))


def count_blockers_cross(inst: CrossInstance, method: str = "DoubleMobius",
                         evaluation: str = "auto", truncate: bool = True,
                         backend: str = "auto", budget: Budget = DEFAULT_BUDGET) -> int:
    """Count via the double Möbius sum or the double inclusion-exclusion sum.

    Each union ``z`` of layer elements lies below ``2**(k-|z|) * C(m-|z|, m-k)``
    opposite-free ``k``-sets.
    """
    if inst.nu > min(popcount(lam) for lam in inst.antichain):
        raise ConstraintViolation(f"members need at least {inst.nu} elements")
    m, k = inst.m, inst.k

    def term(u):
        return (1 << (k - u)) * binom(m - u, m - k) if u <= k else 0

    spec = _spec(inst)
    cap = k if truncate else None
    if method == "DoubleMobius":
        return double_mobius_sum(spec, term, cap, evaluation=evaluation, backend=backend,
                                 budget=budget).value
    if method == "DoubleIE":
        weight = SupportWeight(blocking_weight(len(inst.antichain)))
        if evaluation == "direct":
            return direct_sum(spec, weight, term, cap, budget=budget).value
        return grouped_sum(spec, weight, term, cap, backend=backend, budget=budget).value
    raise ValueError(f"unknown method {method!r}")


def random_cross_antichain(m: int, count: int, sizes, seed, max_tries: int = 1000) -> tuple:
    """``count`` pairwise incomparable random opposite-free sets (masks)."""
    rng = random.Random(seed)
    lo, hi = (sizes, sizes) if isinstance(sizes, int) else sizes
    lo, hi = max(lo, 1), min(hi, m)
    if lo > hi:
        raise ValueError("no admissible member size")
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        s = rng.randint(lo, hi)
        x = 0
        for i in rng.sample(range(m), s):
            x |= 1 << (i + rng.randrange(2) * m)
        if all(not (x & y == x or x & y == y) for y in out):
            out.append(x)
    if len(out) < count:
        raise RetryBudgetExceeded(f"could not draw {count} incomparable faces of size {sizes}")
    return tuple(out)
