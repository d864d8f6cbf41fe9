"""Relatively r-blocking sets in the Boolean lattice.

A ``k``-subset ``b`` of ``{1..n}`` is relatively ``r``-blocking for an
antichain ``L`` when ``|b & lam| > r*k`` for every member ``lam``.  With
``nu = floor(r*k) + 1`` this means ``|b & lam| >= nu``.

Counting methods (all exact, all checked against :func:`brute_blockers`):

``ComplementIdeal``
    ``b`` fails iff it contains a ``(k - floor(r*k))``-subset of some
    complement; inclusion-exclusion over those subsets.
``Ideal``
    ``b`` succeeds iff it meets every ``(|lam| - floor(r*k))``-subset of
    every member; inclusion-exclusion over the minimal such subsets.
``Vandermonde``
    the ``Ideal`` sum with each binomial expanded by Vandermonde's
    convolution.
``DoubleIE``
    inclusion-exclusion over ``nu``-subsets of members, each family
    weighted by an alternating sum over subfamilies of the antichain.
``DoubleMobius``, and Möbius refinements of the first three
    the same sums with the alternating family sums replaced by Möbius
    functions of union semilattices.
``nerve``
    ``DoubleIE`` regrouped through the nerve of the antichain: the
    weight becomes the Möbius number of the union lattice of minimal
    supports, and only families whose supports cover every index count.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .bits import iter_bits, mask_of, popcount
from .errors import CapExceeded, ConstraintViolation, EmptyMember, RetryBudgetExceeded
from .families import (
    DEFAULT_BUDGET,
    Budget,
    GeneratorSpec,
    Plain,
    SupportWeight,
    binom,
    blocking_weight,
    direct_sum,
    double_mobius_sum,
    grouped_sum,
    mobius_cover_weight,
    mobius_sum,
)

IE_METHODS = ("ComplementIdeal", "Ideal", "Vandermonde", "DoubleIE")
MOBIUS_METHODS = ("ComplementIdeal", "Ideal", "Vandermonde", "DoubleMobius")
MAX_BRUTE = 5_000_000


def nu_of(r: Fraction, k: int) -> int:
    """``floor(r*k) + 1`` in exact arithmetic."""
    r = Fraction(r)
    return (r.numerator * k) // r.denominator + 1


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class BlockingInstance:
    """``n``, an antichain over ``{1..n}`` (masks, bit ``i-1`` for ``i``), ``r`` and ``k``."""

    n: int
    antichain: tuple
    r: Fraction
    k: int

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "antichain", tuple(self.antichain))
        full = (1 << self.n) - 1
        if not self.antichain:
            raise ValueError("antichain must be nonempty")
        for lam in self.antichain:
            if lam == 0:
                raise EmptyMember("antichain member is empty")
            if lam & ~full:
                raise ValueError(f"member {sorted(i + 1 for i in iter_bits(lam))} leaves 1..{self.n}")
            if lam == full:
                raise ValueError("antichain member equals the whole ground set")
        for a, b in combinations(self.antichain, 2):
            if a & b == a or a & b == b:
                raise ValueError("members are not pairwise incomparable")
        if not 0 <= self.r < 1:
            raise ValueError("r must satisfy 0 <= r < 1")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k must lie in 1..{self.n}")

    @classmethod
    def from_sets(cls, n: int, sets, r, k: int) -> "BlockingInstance":
        return cls(n, tuple(mask_of(i - 1 for i in s) for s in sets), Fraction(r), k)

    @property
    def nu(self) -> int:
        return nu_of(self.r, self.k)

    @property
    def floor_rk(self) -> int:
        return self.nu - 1

    def sets(self) -> list:
        return [sorted(i + 1 for i in iter_bits(lam)) for lam in self.antichain]

    def is_blocking(self, b: int) -> bool:
        p, q = self.r.numerator, self.r.denominator
        return all(q * popcount(b & lam) > p * self.k for lam in self.antichain)


@dataclass(frozen=True)
class ConstraintStatus:
    """``rank_window``: every member has at least ``nu`` elements and at most
    ``n + floor(r*k) - k``.  ``rank_floor``: only the lower bound."""

    rank_window: bool
    rank_floor: bool


def check_constraints(inst: BlockingInstance) -> ConstraintStatus:
    sizes = [popcount(lam) for lam in inst.antichain]
    low = inst.nu <= min(sizes)
    high = max(sizes) <= inst.n + inst.floor_rk - inst.k
    return ConstraintStatus(low and high, low)


def _require(inst, window: bool):
    st = check_constraints(inst)
    if window and not st.rank_window:
        raise ConstraintViolation(
            f"members need between {inst.nu} and {inst.n + inst.floor_rk - inst.k} elements")
    if not st.rank_floor:
        raise ConstraintViolation(f"members need at least {inst.nu} elements")


def brute_blockers(inst: BlockingInstance, listing: bool = False, limit: int = MAX_BRUTE):
    """Count (or list) the relatively r-blocking k-subsets by enumeration."""
    total = math.comb(inst.n, inst.k)
    if total > limit:
        raise CapExceeded("brute_subsets", limit, total)
    found = []
    count = 0
    for combo in combinations(range(inst.n), inst.k):
        b = mask_of(combo)
        if inst.is_blocking(b):
            count += 1
            if listing:
                found.append(b)
    return (count, found) if listing else count


def ideal_layer(inst_or_antichain, j: int, n: int | None = None) -> list:
    """The ``j``-subsets lying inside some member (listed)."""
    antichain = getattr(inst_or_antichain, "antichain", inst_or_antichain)
    seen = set()
    for lam in antichain:
        for combo in combinations(list(iter_bits(lam)), j):
            seen.add(mask_of(combo))
    return sorted(seen)


def ideal_layer_size(antichain, j: int) -> int:
    """``|{j-subsets inside some member}|`` by inclusion-exclusion over members."""
    antichain = list(antichain)
    total = 0
    for r in range(1, len(antichain) + 1):
        for sub in combinations(antichain, r):
            inter = -1
            for lam in sub:
                inter &= lam
            total += (1 if r % 2 else -1) * binom(popcount(inter), j)
    return total


# ---------------------------------------------------------------------------
# generator families for each method
# ---------------------------------------------------------------------------

def _complement_spec(inst):
    full = (1 << inst.n) - 1
    m = inst.k - inst.floor_rk
    return GeneratorSpec(inst.n, tuple(full & ~lam for lam in inst.antichain),
                         (m,) * len(inst.antichain))


def _ideal_spec(inst):
    return GeneratorSpec(inst.n, tuple(inst.antichain),
                         tuple(popcount(lam) - inst.floor_rk for lam in inst.antichain),
                         minimal=True)


def _layer_spec(inst):
    return GeneratorSpec(inst.n, tuple(inst.antichain), (inst.nu,) * len(inst.antichain))


def _vandermonde_term(n, k):
    return lambda u: sum(binom(u, h) * binom(n - u, k - h) for h in range(1, k + 1))


def _evaluate(spec, weighting, term, cap, tail, evaluation, backend, budget, mobius=False):
    if evaluation == "direct":
        return direct_sum(spec, weighting, term, cap, tail, budget=budget)
    if mobius:
        return mobius_sum(spec, term, cap, tail, backend=backend, budget=budget)
    return grouped_sum(spec, weighting, term, cap, tail, backend=backend, budget=budget)


def count_blockers_ie(inst: BlockingInstance, method: str = "ComplementIdeal",
                      evaluation: str = "grouped", truncate: bool = True,
                      backend: str = "auto", budget: Budget = DEFAULT_BUDGET) -> int:
    """Inclusion-exclusion counts; see the module docstring for the methods."""
    n, k = inst.n, inst.k
    if method == "ComplementIdeal":
        _require(inst, window=True)
        res = _evaluate(_complement_spec(inst), Plain(), lambda u: binom(n - u, n - k),
                        k if truncate else None, None, evaluation, backend, budget)
        return binom(n, k) + res.value
    if method == "Ideal":
        _require(inst, window=True)
        res = _evaluate(_ideal_spec(inst), Plain(), lambda u: binom(n - u, k),
                        n - k if truncate else None, None, evaluation, backend, budget)
        return binom(n, k) + res.value
    if method == "Vandermonde":
        _require(inst, window=True)
        cap, tail = (n - k, binom(n, k)) if truncate else (None, None)
        res = _evaluate(_ideal_spec(inst), Plain(), _vandermonde_term(n, k),
                        cap, tail, evaluation, backend, budget)
        return -res.value
    if method == "DoubleIE":
        _require(inst, window=False)
        weight = SupportWeight(blocking_weight(len(inst.antichain)))
        res = _evaluate(_layer_spec(inst), weight, lambda u: binom(n - u, n - k),
                        k if truncate else None, None, evaluation, backend, budget)
        return res.value
    raise ValueError(f"unknown method {method!r}")


def count_blockers_mobius(inst: BlockingInstance, method: str = "ComplementIdeal",
                          evaluation: str = "auto", truncate: bool = True,
                          backend: str = "auto", budget: Budget = DEFAULT_BUDGET) -> int:
    """Möbius-function counts over generated union semilattices."""
    n, k = inst.n, inst.k
    if method == "ComplementIdeal":
        _require(inst, window=True)
        res = mobius_sum(_complement_spec(inst), lambda u: binom(n - u, n - k),
                         k if truncate else None, backend=backend, budget=budget)
        return binom(n, k) + res.value
    if method == "Ideal":
        _require(inst, window=True)
        res = mobius_sum(_ideal_spec(inst), lambda u: binom(n - u, k),
                         n - k if truncate else None, backend=backend, budget=budget)
        return binom(n, k) + res.value
    if method == "Vandermonde":
        _require(inst, window=True)
        cap, tail = (n - k, binom(n, k)) if truncate else (None, None)
        res = mobius_sum(_ideal_spec(inst), _vandermonde_term(n, k), cap, tail,
                         backend=backend, budget=budget)
        return -res.value
    if method == "DoubleMobius":
        _require(inst, window=False)
        res = double_mobius_sum(_layer_spec(inst), lambda u: binom(n - u, n - k),
                                k if truncate else None, evaluation=evaluation,
                                backend=backend, budget=budget)
        return res.value
    raise ValueError(f"unknown method {method!r}")


def support_map(inst: BlockingInstance, d: int) -> int:
    """Indices of the members containing ``d``: the largest nerve face below which ``d`` lies."""
    return mask_of(i for i, lam in enumerate(inst.antichain) if d & lam == d)


def count_blockers_nerve(inst: BlockingInstance, evaluation: str = "grouped",
                         truncate: bool = True, backend: str = "auto",
                         budget: Budget = DEFAULT_BUDGET) -> int:
    """Sum over families of ``nu``-subsets whose minimal supports cover all indices."""
    _require(inst, window=False)
    n, k = inst.n, inst.k
    weight = SupportWeight(mobius_cover_weight(len(inst.antichain)))
    res = _evaluate(_layer_spec(inst), weight, lambda u: binom(n - u, k - u),
                    k if truncate else None, None, evaluation, backend, budget)
    return res.value


# every counting method under one name, for the CLI and the tests
ALL_METHODS = {
    "ie-complement": (count_blockers_ie, "ComplementIdeal", True),
    "ie-ideal": (count_blockers_ie, "Ideal", True),
    "ie-vandermonde": (count_blockers_ie, "Vandermonde", True),
    "double-ie": (count_blockers_ie, "DoubleIE", False),
    "mobius-complement": (count_blockers_mobius, "ComplementIdeal", True),
    "mobius-ideal": (count_blockers_mobius, "Ideal", True),
    "mobius-vandermonde": (count_blockers_mobius, "Vandermonde", True),
    "double-mobius": (count_blockers_mobius, "DoubleMobius", False),
    "nerve": (count_blockers_nerve, None, False),
}


def applicable_methods(inst: BlockingInstance) -> list:
    st = check_constraints(inst)
    return [name for name, (_, _, window) in ALL_METHODS.items()
            if (st.rank_window if window else st.rank_floor)]


def run_method(inst: BlockingInstance, name: str, **kw) -> int:
    if name == "brute":
        return brute_blockers(inst)
    fn, method, _ = ALL_METHODS[name]
    return fn(inst, **kw) if method is None else fn(inst, method, **kw)


def random_antichain(n: int, count: int, sizes, seed, max_tries: int = 1000) -> tuple:
    """``count`` pairwise incomparable random subsets of ``{1..n}`` (as masks).

    ``sizes`` is one size or a ``(lo, hi)`` range; members never equal the
    empty or the full set.
    """
    rng = random.Random(seed)
    lo, hi = (sizes, sizes) if isinstance(sizes, int) else sizes
    lo, hi = max(lo, 1), min(hi, n - 1)
    if lo > hi:
        raise ValueError("no admissible member size")
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        s = rng.randint(lo, hi)
        x = mask_of(rng.sample(range(n), s))
        if all(not (x & y == x or x & y == y) for y in out):
            out.append(x)
    if len(out) < count:
        raise RetryBudgetExceeded(f"could not draw {count} incomparable sets of size {sizes} over {n}")
    return tuple(out)
