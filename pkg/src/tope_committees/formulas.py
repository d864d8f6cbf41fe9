"""Committee counts from the halfspace antichain, one function per formula.

The halfspace antichain is the family of positive halfspaces viewed as tope
subsets.  Every method below feeds it to :mod:`tope_committees.families`
with its own generator size, weight and binomial term:

================== ================= =============================== ==========
method             generator size    term                            union cap
================== ================= =============================== ==========
HalfspaceIE        floor((l+1)/2)    C(N-u, N-l), plus C(N, N-l)     l
Vandermonde        floor((N-l+1)/2)  -sum_h C(u,h) C(N-u,l-h)        N-l
MobiusUnion        as HalfspaceIE    Möbius values instead of IE
MobiusVandermonde  as Vandermonde    Möbius values instead of IE
DoubleMobius       ceil((l+1)/2)     C(N-u, l-u), two Möbius layers  l
ConvexEuler        ceil((l+1)/2)     C(N-u, l-u), weight mu_S        l
UniqueFacet        ceil((l+1)/2)     C(N-u, l-u), weight (-1)**t     l
================== ================= =============================== ==========

Here ``N`` is the number of topes and ``l`` is either ``k`` or ``N - k``;
both give the same count because committees of size ``k`` and ``N - k``
are equinumerous.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .bits import iter_bits, popcount
from .errors import CapExceeded, HypothesisFailed, OutOfRangeK, TopeError
from .families import (
    DEFAULT_BUDGET,
    Budget,
    GeneratorSpec,
    PairFilter,
    Plain,
    SupportWeight,
    binom,
    direct_sum,
    double_mobius_sum,
    grouped_sum,
    lattice_elements,
    mobius_cover_weight,
    mobius_sum,
    unique_facet_weight,
)
from .om import OrientedMatroid
from .poset import complex_from_family, min_sets, reduced_euler_characteristic

METHODS = ("HalfspaceIE", "Vandermonde", "MobiusUnion", "MobiusVandermonde",
           "DoubleMobius", "ConvexEuler", "UniqueFacet")
FREE_METHODS = ("DoubleMobius", "ConvexEuler", "UniqueFacet")

CLI_NAMES = {
    "hs-ie": "HalfspaceIE",
    "vandermonde": "Vandermonde",
    "mobius-union": "MobiusUnion",
    "mobius-vandermonde": "MobiusVandermonde",
    "double-mobius": "DoubleMobius",
    "convex-euler": "ConvexEuler",
    "unique-facet": "UniqueFacet",
}

# methods whose union cap grows with l prefer the smaller l
_LARGE_ELL = {"Vandermonde", "MobiusVandermonde"}


@dataclass(frozen=True)
class EllChoice:
    """Which of ``k`` and ``N - k`` plays the role of ``l``.

    ``selector`` is ``"small"``, ``"large"``, ``"auto"`` (whichever keeps
    the unions small for the method) or ``"explicit"`` with ``value``.
    """

    selector: str = "auto"
    value: int | None = None

    @classmethod
    def parse(cls, x) -> "EllChoice":
        if isinstance(x, EllChoice):
            return x
        if x is None:
            return cls()
        if isinstance(x, int):
            return cls("explicit", x)
        x = str(x).lower()
        if x.isdigit():
            return cls("explicit", int(x))
        if x not in ("small", "large", "auto"):
            raise ValueError(f"ell must be small, large, auto or an integer, not {x!r}")
        return cls(x)

    def resolve(self, N: int, k: int, method: str) -> int:
        small, large = min(k, N - k), max(k, N - k)
        sel = self.selector
        if sel == "auto":
            sel = "large" if method in _LARGE_ELL else "small"
        if sel == "small":
            return small
        if sel == "large":
            return large
        if self.value not in (k, N - k):
            raise ValueError(f"explicit ell must be {k} or {N - k}, not {self.value}")
        return self.value


@dataclass
class FormulaResult:
    value: int
    method: str
    k: int
    ell: int
    unions: int
    evaluation: str
    elapsed: float = 0.0


def _check_k(om: OrientedMatroid, k: int, free: bool):
    N = om.num_topes
    hi = N // 2 if free else N - 3
    if not 3 <= k <= hi:
        raise OutOfRangeK(f"k={k} outside 3..{hi}")


def _spec(om: OrientedMatroid, m: int, keep=None) -> GeneratorSpec:
    return GeneratorSpec(om.num_topes, tuple(om.positive_masks), (m,) * om.t, keep=keep)


def opposite_filter(om: OrientedMatroid) -> PairFilter:
    return PairFilter.from_partner(om.negation)


def unique_facet_violation(spec: GeneratorSpec, cap: int | None, budget: Budget = DEFAULT_BUDGET):
    """A union witnessing a covering family with a generator in two facets.

    Such a family exists inside ``U`` iff the maximal supports of the
    generators inside ``U`` cover every class and one of them has two or
    more classes.  Returns the offending union or ``None``.
    """
    full = (1 << spec.num_classes) - 1
    for U in lattice_elements(spec, cap, budget=budget):
        if spec.class_key(U) != full:
            continue
        if any(popcount(s) > 1 for s in spec.present_supports(U)):
            return U
    return None


def euler_weight(num_classes: int):
    """Reduced Euler characteristic of the complex whose facets are the
    complements of the minimal supports; zero unless they cover."""
    full = (1 << num_classes) - 1

    def fn(sups):
        mins = min_sets(sups)
        u = 0
        for s in mins:
            u |= s
        if u != full:
            return 0
        return reduced_euler_characteristic(complex_from_family(mins, full), "faces")
    return fn


def _convex_weight(t: int, chi: str):
    if chi == "mobius":
        return SupportWeight(mobius_cover_weight(t))
    if chi == "complex":
        return SupportWeight(euler_weight(t))
    raise ValueError(f"chi must be 'mobius' or 'complex', not {chi!r}")


def _term_ie(N, ell):
    return lambda u: binom(N - u, N - ell)


def _term_vandermonde(N, ell):
    def term(u):
        lo, hi = max(1, ell - N + u), min(ell, u)
        return sum(binom(u, h) * binom(N - u, ell - h) for h in range(lo, hi + 1))
    return term


def _term_layer(N, ell):
    return lambda u: binom(N - u, ell - u)


def _term_free(half, k):
    return lambda u: (1 << (k - u)) * binom(half - u, k - u) if u <= k else 0


def committee_sum(om: OrientedMatroid, k: int, method: str = "HalfspaceIE", ell="auto",
                  evaluation: str = "auto", truncate: bool = True,
                  budget: Budget = DEFAULT_BUDGET, backend: str = "auto",
                  chi: str = "mobius") -> FormulaResult:
    """Evaluate one committee formula; see the module table.

    ``chi`` picks how ConvexEuler weights a family: by the Möbius number of
    the union lattice of minimal supports, or by the reduced Euler
    characteristic of the complex built from them.  The two agree.
    """
    method = CLI_NAMES.get(method, method)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    _check_k(om, k, free=False)
    N = om.num_topes
    ell_v = EllChoice.parse(ell).resolve(N, k, method)
    start = time.perf_counter()
    lead = 0
    sign = 1
    tail = None
    if method in ("HalfspaceIE", "MobiusUnion"):
        m, cap, term = (ell_v + 1) // 2, ell_v, _term_ie(N, ell_v)
        lead = binom(N, N - ell_v)
    elif method in ("Vandermonde", "MobiusVandermonde"):
        m, cap, term = (N - ell_v + 1) // 2, N - ell_v, _term_vandermonde(N, ell_v)
        sign, tail = -1, binom(N, ell_v)
    else:
        m, cap, term = ell_v // 2 + 1, ell_v, _term_layer(N, ell_v)
    if not truncate:
        cap, tail = None, None
    spec = _spec(om, m)

    if method == "DoubleMobius":
        res = double_mobius_sum(spec, term, cap, evaluation=evaluation, backend=backend, budget=budget)
    elif method in ("ConvexEuler", "UniqueFacet"):
        if method == "UniqueFacet":
            bad = unique_facet_violation(spec, cap, budget)
            if bad is not None:
                raise HypothesisFailed(
                    f"k={k}, l={ell_v}: topes {sorted(iter_bits(bad))} carry a covering family "
                    "with a generator in more than one positive halfspace")
            weight = SupportWeight(unique_facet_weight(om.t))
        else:
            weight = _convex_weight(om.t, chi)
        if evaluation == "direct":
            res = direct_sum(spec, weight, term, cap, budget=budget)
        else:
            res = grouped_sum(spec, weight, term, cap, backend=backend, budget=budget)
    else:
        mobius = method.startswith("Mobius")
        if evaluation == "direct":
            res = direct_sum(spec, Plain(), term, cap, tail, budget=budget)
        elif mobius:
            res = mobius_sum(spec, term, cap, tail, backend=backend, budget=budget)
        else:
            res = grouped_sum(spec, Plain(), term, cap, tail, backend=backend, budget=budget)
    value = lead + sign * res.value
    return FormulaResult(value, method, k, ell_v, res.unions, res.evaluation,
                         time.perf_counter() - start)


def count_committees(om: OrientedMatroid, k: int, method: str = "HalfspaceIE", ell="auto",
                     **kw) -> int:
    """Number of committees with ``k`` topes by the chosen formula."""
    return committee_sum(om, k, method, ell, **kw).value


def free_committee_sum(om: OrientedMatroid, k: int, method: str = "DoubleMobius",
                       evaluation: str = "auto", truncate: bool = True,
                       budget: Budget = DEFAULT_BUDGET, backend: str = "auto",
                       chi: str = "mobius") -> FormulaResult:
    """Committees of size ``k`` with no pair of opposite topes.

    The inner semilattices keep only opposite-free unions, and a union
    ``U`` extends to ``2**(k-|U|) * C(N/2 - |U|, k - |U|)`` opposite-free
    ``k``-sets.
    """
    method = CLI_NAMES.get(method, method)
    if method not in FREE_METHODS:
        raise ValueError(f"unknown method {method!r} for opposite-free committees")
    _check_k(om, k, free=True)
    N = om.num_topes
    start = time.perf_counter()
    m = k // 2 + 1
    cap = k if truncate else None
    spec = _spec(om, m, keep=opposite_filter(om))
    term = _term_free(N // 2, k)
    if method == "DoubleMobius":
        res = double_mobius_sum(spec, term, cap, evaluation=evaluation, backend=backend, budget=budget)
    else:
        if method == "UniqueFacet":
            bad = unique_facet_violation(spec, cap, budget)
            if bad is not None:
                raise HypothesisFailed(
                    f"k={k}: topes {sorted(iter_bits(bad))} carry a covering opposite-free family "
                    "with a generator in more than one positive halfspace")
            weight = SupportWeight(unique_facet_weight(om.t))
        else:
            weight = _convex_weight(om.t, chi)
        if evaluation == "direct":
            res = direct_sum(spec, weight, term, cap, budget=budget)
        else:
            res = grouped_sum(spec, weight, term, cap, backend=backend, budget=budget)
    return FormulaResult(res.value, method, k, k, res.unions, res.evaluation,
                         time.perf_counter() - start)


def count_free_committees(om: OrientedMatroid, k: int, method: str = "DoubleMobius", **kw) -> int:
    return free_committee_sum(om, k, method, **kw).value


# ---------------------------------------------------------------------------
# cross-checking
# ---------------------------------------------------------------------------

@dataclass
class Cell:
    k: int
    method: str
    variant: str          # "kappa" or "kappa_free"
    value: int | None
    oracle: int
    agrees: bool | None   # None when the method did not run
    unions: int = 0
    ell: int | None = None
    elapsed: float = 0.0
    error: str | None = None


@dataclass
class CrosscheckReport:
    t: int
    num_topes: int
    k_range: list
    cells: list = field(default_factory=list)
    oracle_elapsed: float = 0.0

    @property
    def disagreements(self) -> list:
        return [c for c in self.cells if c.agrees is False]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {"instance": {"t": self.t, "num_topes": self.num_topes},
                "results": [asdict(c) for c in self.cells],
                "totals": {"cells": len(self.cells),
                           "agree": sum(1 for c in self.cells if c.agrees),
                           "disagree": len(self.disagreements),
                           "skipped": sum(1 for c in self.cells if c.agrees is None)}}

    def to_tsv(self) -> str:
        """Agreement matrix: one row per (variant, k), one column per method."""
        methods = []
        for c in self.cells:
            if c.method not in methods:
                methods.append(c.method)
        rows = {}
        for c in self.cells:
            row = rows.setdefault((c.variant, c.k), {"oracle": c.oracle})
            if c.error:
                row[c.method] = c.error
            else:
                row[c.method] = f"{c.value}" + ("" if c.agrees else "!")
        lines = ["\t".join(["variant", "k", "oracle"] + methods)]
        for (variant, k), row in sorted(rows.items()):
            lines.append("\t".join([variant, str(k), str(row["oracle"])] +
                                   [row.get(m, "") for m in methods]))
        return "\n".join(lines) + "\n"


def _run_cell(args):
    om, k, method, variant, oracle, ell, budget = args
    start = time.perf_counter()
    try:
        if variant == "kappa":
            res = committee_sum(om, k, method, ell, budget=budget)
        else:
            res = free_committee_sum(om, k, method, budget=budget)
    except (HypothesisFailed, CapExceeded, OutOfRangeK) as exc:
        return Cell(k, method, variant, None, oracle, None,
                    elapsed=time.perf_counter() - start,
                    error=f"{type(exc).__name__}: {exc}")
    except TopeError as exc:  # pragma: no cover - reported, never fatal
        return Cell(k, method, variant, None, oracle, False,
                    elapsed=time.perf_counter() - start,
                    error=f"{type(exc).__name__}: {exc}")
    return Cell(k, method, variant, res.value, oracle, res.value == oracle,
                res.unions, res.ell, res.elapsed)


def crosscheck(om: OrientedMatroid, k_range=None, methods=None, free_methods=None,
               ell="auto", budget: Budget = DEFAULT_BUDGET, workers: int = 1,
               oracle=None) -> CrosscheckReport:
    """Run the oracle and every requested method for each ``k``.

    Method errors (unmet hypotheses, exhausted budgets) are recorded in
    their cell; they never abort the matrix.
    """
    from .oracle import kappa_sweep

    N = om.num_topes
    ks = list(range(3, N - 2)) if k_range is None else sorted(set(k_range))
    methods = METHODS if methods is None else tuple(CLI_NAMES.get(m, m) for m in methods)
    if free_methods is None:
        free_methods = tuple(m for m in methods if m in FREE_METHODS)
    else:
        free_methods = tuple(CLI_NAMES.get(m, m) for m in free_methods)
    start = time.perf_counter()
    if oracle is None:
        oracle = kappa_sweep(om, [k for k in ks if 1 <= k <= N - 1],
                             variants=("free",) if free_methods else ())
    report = CrosscheckReport(om.t, N, ks, oracle_elapsed=time.perf_counter() - start)
    jobs = []
    for k in ks:
        for m in methods:
            jobs.append((om, k, m, "kappa", oracle.kappa[k], ell, budget))
        if 3 <= k <= N // 2:
            for m in free_methods:
                jobs.append((om, k, m, "kappa_free", oracle.kappa_free[k], ell, budget))
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            report.cells = list(ex.map(_run_cell, jobs))
    else:
        report.cells = [_run_cell(j) for j in jobs]
    return report
