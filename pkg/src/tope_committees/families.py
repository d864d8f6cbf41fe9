"""Alternating sums over families of generators, grouped by their union.

Every counting formula in this package has the shape

    sum over nonempty families D of generators:
        (-1)**|D| * w(D) * term(|union of D|)

The generators are the ``m_j``-subsets of a few "class" sets ``C_j``
(positive halfspaces, antichain members, their complements).  The support
of a generator ``g`` is the set of classes containing it; the weight ``w``
depends only on the supports of the members of ``D``.

Three evaluation paths are provided and cross-checked in the tests.

``direct``
    enumerates the families literally (tiny inputs only).
``grouped``
    collects families by their union ``U``.  Writing ``cls(V)`` for the
    supports of the generators inside ``V``, the families with union
    exactly ``U`` contribute ``c(U) = sum over V <= U of
    (-1)**|U - V| * phi(cls(V))`` with ``phi(P) = sum over S <= P of
    (-1)**|S| * w(S)``.  This costs ``2**|U|`` per union instead of
    ``2**#generators``.
``mobius``
    for unweighted sums ``c(U)`` is the Möbius value ``mu(0^, U)`` of the
    union semilattice, computed by its defining recursion.

Unions are restricted to at most ``cap`` elements (the binomial factor
vanishes beyond it) and, optionally, to a down-closed ``keep`` filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bits import iter_bits, mask_of, popcount, submasks
from .errors import CapExceeded
from .poset import max_sets, min_sets, mobius_below, union_mobius_number, union_semilattice

NUMPY_MAX_BITS = 62


def binom(n: int, k: int) -> int:
    """``C(n, k)``, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class Budget:
    max_subsets: int = 12_000_000      # candidate unions scanned per layer sweep
    max_lattice: int = 3_000_000       # retained unions
    max_direct_generators: int = 22    # 2**n families in direct mode
    max_lattice_work: int = 150_000_000  # per-X lattices in double Möbius


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# opposite-free filter
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairFilter:
    """Accept masks containing no listed pair (a down-closed predicate)."""

    pairs: tuple

    @classmethod
    def from_partner(cls, partner) -> "PairFilter":
        """``partner[i]`` is the index paired with ``i`` (or negative)."""
        return cls(tuple(sorted({(min(i, j), max(i, j)) for i, j in enumerate(partner) if j >= 0 and j != i})))

    def __call__(self, x: int) -> bool:
        for i, j in self.pairs:
            if x >> i & 1 and x >> j & 1:
                return False
        return True

    def vector(self, xs: np.ndarray) -> np.ndarray:
        ok = np.ones(len(xs), dtype=bool)
        for i, j in self.pairs:
            ok &= ((xs >> i) & (xs >> j) & 1) == 0
        return ok


# ---------------------------------------------------------------------------
# generator families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Generators: every ``sizes[j]``-subset of ``classes[j]``.

    With ``minimal`` only the inclusion-minimal generators are used (this
    matters only when the sizes differ).
    """

    n: int
    classes: tuple
    sizes: tuple
    minimal: bool = False
    keep: PairFilter | None = None

    def __post_init__(self):
        if len(self.classes) != len(self.sizes):
            raise ValueError("one generator size per class")

    @property
    def uniform(self) -> bool:
        return len(set(self.sizes)) <= 1

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def generators(self) -> list:
        seen = {}
        for C, m in zip(self.classes, self.sizes):
            if m <= 0 or popcount(C) < m:
                continue
            for combo in combinations(list(iter_bits(C)), m):
                seen.setdefault(mask_of(combo), None)
        gens = list(seen)
        if self.minimal and not self.uniform:
            keep = set(min_sets(gens))
            gens = [g for g in gens if g in keep]
        if self.keep is not None:
            gens = [g for g in gens if self.keep(g)]
        return gens

    def generator_count(self) -> int:
        if self.minimal and not self.uniform:
            return len(self.generators())
        # distinct m-subsets of a union of classes: count directly only when small
        return len(self.generators())

    def support(self, g: int) -> int:
        """Classes ``j`` with ``g`` inside ``C_j`` (as a class mask)."""
        return mask_of(j for j, (C, m) in enumerate(zip(self.classes, self.sizes))
                       if g & C == g and popcount(g) == m)

    def contains_generator(self, V: int) -> bool:
        return any(popcount(V & C) >= m for C, m in zip(self.classes, self.sizes) if m > 0)

    def class_key(self, V: int) -> int:
        return mask_of(j for j, (C, m) in enumerate(zip(self.classes, self.sizes))
                       if m > 0 and popcount(V & C) >= m)

    def present_supports(self, V: int) -> tuple:
        """Maximal supports of the generators inside ``V`` (uniform sizes)."""
        m = self.sizes[0]
        ground = 0
        for C in self.classes:
            ground |= C
        sups = set()
        for combo in combinations(list(iter_bits(V & ground)), m):
            s = self.support(mask_of(combo))
            if s:
                sups.add(s)
        return tuple(sorted(max_sets(sups)))


# ---------------------------------------------------------------------------
# weightings
# ---------------------------------------------------------------------------

class Plain:
    """``w = 1``: the sum over the empty family of supports is 1."""

    kind = "plain"

    def family_weight(self, spec, family) -> int:
        return 1

    def phi(self, key) -> int:
        return 0 if key else 1


@dataclass
class ClassTable:
    """``phi`` tabulated over class masks (double Möbius sums)."""

    table: list
    literal: object = None  # family -> weight, for direct evaluation
    kind: str = "classes"

    def family_weight(self, spec, family) -> int:
        return self.literal(family)

    def phi(self, key) -> int:
        return self.table[key]


@dataclass
class SupportWeight:
    """``w`` is a function of the set of generator supports.

    ``fn`` receives a list of class masks and must depend only on its
    inclusion-minimal members.  ``phi`` of a support family equals the sum
    over nonempty subfamilies of its maximal members (the non-maximal
    supports cancel in pairs), which is what keeps the grouped path small.
    """

    fn: object
    kind: str = "supports"
    _w: dict = field(default_factory=dict, repr=False)
    _phi: dict = field(default_factory=dict, repr=False)

    def weight(self, sups) -> int:
        key = tuple(sorted(min_sets(sups)))
        v = self._w.get(key)
        if v is None:
            v = self._w[key] = self.fn(list(key))
        return v

    def family_weight(self, spec, family) -> int:
        return self.weight({spec.support(g) for g in family})

    def phi(self, maxima: tuple) -> int:
        v = self._phi.get(maxima)
        if v is None:
            v = 0
            for r in range(1, len(maxima) + 1):
                sign = -1 if r % 2 else 1
                for M in combinations(maxima, r):
                    v += sign * self.weight(M)
            self._phi[maxima] = v
        return v


def blocking_weight(num_classes: int):
    """``sum((-1)**|C|)`` over class sets ``C`` meeting every support."""
    def fn(sups):
        total = 0
        for C in range(1 << num_classes):
            if all(C & s for s in sups):
                total += -1 if popcount(C) % 2 else 1
        return total
    return fn


def mobius_cover_weight(num_classes: int):
    """Möbius number of the union lattice of the minimal supports, if they cover."""
    full = (1 << num_classes) - 1

    def fn(sups):
        mins = min_sets(sups)
        u = 0
        for s in mins:
            u |= s
        if u != full or not mins:
            return 0
        return union_mobius_number(mins, full)
    return fn


def unique_facet_weight(num_classes: int):
    full = (1 << num_classes) - 1
    sign = -1 if num_classes % 2 else 1

    def fn(sups):
        u = 0
        for s in min_sets(sups):
            u |= s
        return sign if u == full else 0
    return fn


# ---------------------------------------------------------------------------
# union lattices
# ---------------------------------------------------------------------------

def _use_numpy(spec: GeneratorSpec, backend: str) -> bool:
    ok = spec.n <= NUMPY_MAX_BITS and (spec.uniform or not spec.minimal)
    if backend == "numpy":
        if not ok:
            raise ValueError("numpy backend needs at most 62 items and uniform or non-minimal generators")
        return True
    if backend == "python":
        return False
    return ok


def _subsets_of_size(n: int, s: int) -> np.ndarray:
    if s == 0:
        return np.zeros(1, dtype=np.int64)
    idx = np.fromiter((i for combo in combinations(range(n), s) for i in combo),
                      dtype=np.int64, count=math.comb(n, s) * s).reshape(-1, s)
    return (np.int64(1) << idx).sum(axis=1)


def lattice_layers(spec: GeneratorSpec, cap: int | None, budget: Budget = DEFAULT_BUDGET) -> dict:
    """Unions of generators grouped by size (numpy path).

    ``U`` is a union of generators iff every element of ``U`` lies in some
    generator inside ``U``; for full layers of classes that happens iff
    ``U`` equals the union of the sets ``U & C_j`` with ``|U & C_j| >= m_j``.
    """
    sizes = [m for C, m in zip(spec.classes, spec.sizes) if m > 0 and popcount(C) >= m]
    if not sizes:
        return {}
    top = spec.n if cap is None else min(cap, spec.n)
    lo = min(sizes)
    need = sum(math.comb(spec.n, s) for s in range(lo, top + 1))
    if need > budget.max_subsets:
        raise CapExceeded("candidate_unions", budget.max_subsets, need)
    layers = {}
    total = 0
    for s in range(lo, top + 1):
        xs = _subsets_of_size(spec.n, s)
        if spec.keep is not None:
            xs = xs[spec.keep.vector(xs)]
        cover = np.zeros(len(xs), dtype=np.int64)
        for C, m in zip(spec.classes, spec.sizes):
            if m <= 0:
                continue
            inter = xs & np.int64(C)
            cover |= np.where(np.bitwise_count(inter) >= m, inter, 0)
        got = xs[cover == xs]
        if len(got):
            layers[s] = np.sort(got)
            total += len(got)
            if total > budget.max_lattice:
                raise CapExceeded("lattice_elements", budget.max_lattice, total)
    return layers


def lattice_elements(spec: GeneratorSpec, cap: int | None, backend: str = "auto",
                     budget: Budget = DEFAULT_BUDGET) -> list:
    """Sorted list of all retained unions (the least element excluded)."""
    if _use_numpy(spec, backend):
        out = []
        for s, arr in sorted(lattice_layers(spec, cap, budget).items()):
            out.extend(int(x) for x in arr)
        return out
    lat = union_semilattice(spec.generators(), size_cap=cap, keep=spec.keep,
                            max_elements=budget.max_lattice)
    return lat.elements[1:]


# ---------------------------------------------------------------------------
# numpy helpers
# ---------------------------------------------------------------------------

_CHUNK = 1 << 21  # rows * patterns per block


def _positions(Z: np.ndarray, s: int) -> np.ndarray:
    bits = np.unpackbits(Z.view(np.uint8).reshape(-1, 8), axis=1, bitorder="little")
    return np.nonzero(bits)[1].reshape(-1, s)


def _local_masks(pos: np.ndarray, C: int) -> np.ndarray:
    """For each row, which of its positions lie in ``C`` (as an s-bit mask)."""
    inside = (np.int64(C) >> pos) & 1
    weights = np.int64(1) << np.arange(pos.shape[1], dtype=np.int64)
    return (inside * weights).sum(axis=1)


def _pattern_matrix(s: int) -> np.ndarray:
    b = np.arange(1 << s, dtype=np.int64)
    return ((b[None, :] >> np.arange(s, dtype=np.int64)[:, None]) & 1)


def _pattern_signs(s: int) -> np.ndarray:
    b = np.arange(1 << s, dtype=np.int64)
    return np.where((s - np.bitwise_count(b)) % 2 == 0, 1, -1).astype(np.int64)


def _chunks(n_rows: int, width: int):
    step = max(1, _CHUNK // max(1, width))
    for a in range(0, n_rows, step):
        yield a, min(n_rows, a + step)


# ---------------------------------------------------------------------------
# grouped evaluation
# ---------------------------------------------------------------------------

def _relevant_intersections(spec: GeneratorSpec):
    """Class sets ``S`` whose common part can hold a generator."""
    m = spec.sizes[0]
    out = []
    c = spec.num_classes
    for S in range(1, 1 << c):
        inter = -1
        for j in iter_bits(S):
            inter &= spec.classes[j]
        if popcount(inter) >= m:
            out.append((S, inter))
    return out


def _grouped_layer_numpy(spec, weighting, Z, s, inters):
    """``c(U)`` for every ``U`` in one layer."""
    pos = _positions(Z, s)
    pat = np.arange(1 << s, dtype=np.int64)
    signs = _pattern_signs(s)
    out = np.zeros(len(Z), dtype=object if weighting.kind == "supports" else np.int64)
    if weighting.kind in ("plain", "classes"):
        locs = [(_local_masks(pos, C), m) for C, m in zip(spec.classes, spec.sizes)]
        table = None
        if weighting.kind == "classes":
            table = np.array(weighting.table, dtype=np.int64)
        for a, b in _chunks(len(Z), 1 << s):
            key = np.zeros((b - a, 1 << s), dtype=np.int64)
            for j, (loc, m) in enumerate(locs):
                if m <= 0:
                    continue
                hit = np.bitwise_count(loc[a:b, None] & pat[None, :]) >= m
                if table is None:
                    key |= hit
                else:
                    key |= hit.astype(np.int64) << j
            phi = (key == 0).astype(np.int64) if table is None else table[key]
            out[a:b] = phi @ signs
        return out
    # supports: key bit i set iff |V & C_S_i| >= m
    m = spec.sizes[0]
    locs = [_local_masks(pos, inter) for _, inter in inters]
    for a, b in _chunks(len(Z), 1 << s):
        key = np.zeros((b - a, 1 << s), dtype=np.int64)
        for i, loc in enumerate(locs):
            key |= (np.bitwise_count(loc[a:b, None] & pat[None, :]) >= m).astype(np.int64) << i
        uniq, inv = np.unique(key, return_inverse=True)
        phis = np.array([_phi_of_bits(weighting, int(u), inters) for u in uniq], dtype=object)
        vals = phis[inv.reshape(key.shape)]
        out[a:b] = (vals * signs[None, :]).sum(axis=1)
    return out


def _phi_of_bits(weighting, bits_key: int, inters) -> int:
    present = [inters[i][0] for i in iter_bits(bits_key)]
    return weighting.phi(tuple(sorted(max_sets(present))))


def _key_python(spec, weighting, V):
    if weighting.kind == "plain":
        return spec.contains_generator(V)
    if weighting.kind == "classes":
        return spec.class_key(V)
    return spec.present_supports(V)


def _grouped_python(spec, weighting, elements):
    memo = {}
    out = []
    for U in elements:
        su = popcount(U)
        c = 0
        for V in submasks(U):
            f = memo.get(V)
            if f is None:
                f = memo[V] = weighting.phi(_key_python(spec, weighting, V))
            if f:
                c += f if (su - popcount(V)) % 2 == 0 else -f
        out.append(c)
    return out


@dataclass
class SumResult:
    value: int
    unions: int            # retained unions (terms of the grouped sum)
    evaluation: str
    families: int | None = None


def _finish(pairs, term, cap, tail, evaluation, unions, total_c=None):
    """Sum ``c(U) * term(|U|)``; close the constant tail if requested."""
    value = 0
    partial = 0
    for size, c in pairs:
        value += c * term(size)
        partial += c
    if tail is not None:
        # sum of c(U) over all U is sum over nonempty families of (-1)**|D| = -1
        value += tail * (-1 - partial)
    return SumResult(value, unions, evaluation)


def _layer_pairs_numpy(spec, weighting, layers):
    inters = _relevant_intersections(spec) if weighting.kind == "supports" else None
    if inters is not None and len(inters) > 62:
        return None
    pairs = []
    for s, Z in sorted(layers.items()):
        cs = _grouped_layer_numpy(spec, weighting, Z, s, inters)
        total = sum(int(x) for x in cs) if cs.dtype == object else int(cs.sum())
        pairs.append((s, total))
    return pairs


def grouped_sum(spec, weighting, term, cap=None, tail=None, backend="auto",
                budget: Budget = DEFAULT_BUDGET) -> SumResult:
    if tail is not None and (weighting.kind != "plain" or spec.keep is not None):
        raise ValueError("tail closure needs the unweighted, unfiltered sum")
    if weighting.kind == "supports" and not spec.uniform:
        raise ValueError("support weights need generators of one size")
    if _use_numpy(spec, backend):
        layers = lattice_layers(spec, cap, budget)
        pairs = _layer_pairs_numpy(spec, weighting, layers)
        if pairs is not None:
            return _finish(pairs, term, cap, tail, "grouped",
                           sum(len(z) for z in layers.values()))
        elements = [int(x) for _, z in sorted(layers.items()) for x in z]
    else:
        elements = lattice_elements(spec, cap, "python", budget)
    cs = _grouped_python(spec, weighting, elements)
    return _finish(((popcount(U), c) for U, c in zip(elements, cs)), term, cap, tail,
                   "grouped", len(elements))


# ---------------------------------------------------------------------------
# Möbius evaluation
# ---------------------------------------------------------------------------

def mobius_layers(layers: dict) -> dict:
    """``mu(0^, z)`` for a size-layered union semilattice with complete down-sets."""
    known = np.zeros(1, dtype=np.int64)
    known_mu = np.ones(1, dtype=np.int64)
    out = {}
    for s, Z in sorted(layers.items()):
        pos = _positions(Z, s)
        P = _pattern_matrix(s)[:, :-1]  # proper submasks only
        mu = np.empty(len(Z), dtype=np.int64)
        for a, b in _chunks(len(Z), P.shape[1]):
            single = np.int64(1) << pos[a:b]
            V = single @ P
            idx = np.searchsorted(known, V)
            idx[idx >= len(known)] = 0
            hit = known[idx] == V
            mu[a:b] = -np.where(hit, known_mu[idx], 0).sum(axis=1)
        out[s] = mu
        merged = np.concatenate([known, Z])
        order = np.argsort(merged, kind="stable")
        known = merged[order]
        known_mu = np.concatenate([known_mu, mu])[order]
    return out


def mobius_sum(spec, term, cap=None, tail=None, backend="auto",
               budget: Budget = DEFAULT_BUDGET) -> SumResult:
    """``sum over z > 0^ of mu(0^, z) * term(|z|)`` over the union semilattice."""
    if tail is not None and spec.keep is not None:
        raise ValueError("tail closure needs the unfiltered sum")
    if _use_numpy(spec, backend):
        layers = lattice_layers(spec, cap, budget)
        mus = mobius_layers(layers)
        pairs = [(s, int(mus[s].sum())) for s in sorted(layers)]
        return _finish(pairs, term, cap, tail, "mobius", sum(len(z) for z in layers.values()))
    lat = union_semilattice(spec.generators(), size_cap=cap, keep=spec.keep,
                            max_elements=budget.max_lattice)
    mu = mobius_below(lat)
    pairs = [(popcount(z), mu[z]) for z in lat.elements[1:]]
    return _finish(pairs, term, cap, tail, "mobius", len(lat) - 1)


# ---------------------------------------------------------------------------
# direct evaluation
# ---------------------------------------------------------------------------

def direct_sum(spec, weighting, term, cap=None, tail=None,
               budget: Budget = DEFAULT_BUDGET) -> SumResult:
    """Enumerate every nonempty family of generators.

    Families whose union exceeds ``cap`` (or fails ``keep``) are dropped,
    or contribute ``tail`` when a constant tail is given.
    """
    gens = spec.generators()
    if len(gens) > budget.max_direct_generators:
        raise CapExceeded("direct_generators", budget.max_direct_generators, len(gens))
    value = 0
    count = 0
    n = len(gens)
    unions = set()
    for r in range(1, n + 1):
        sign = -1 if r % 2 else 1
        for fam in combinations(gens, r):
            u = 0
            for g in fam:
                u |= g
            if spec.keep is not None and not spec.keep(u):
                continue
            size = popcount(u)
            if cap is not None and size > cap:
                if tail is not None:
                    value += sign * weighting.family_weight(spec, fam) * tail
                continue
            w = weighting.family_weight(spec, fam)
            if w:
                value += sign * w * term(size)
            count += 1
            unions.add(u)
    res = SumResult(value, len(unions), "direct")
    res.families = count
    return res


# ---------------------------------------------------------------------------
# double Möbius sums
# ---------------------------------------------------------------------------

@dataclass
class OuterLattice:
    """The lattice of generator sets ``X_E = union of X_j for j in E``."""

    atoms: list          # X_j as masks over generator indices (0 if empty)
    elements: list       # distinct nonempty X, sorted
    mu: dict
    classes_of: dict     # X -> mask of classes j with X_j inside X


def outer_lattice(spec: GeneratorSpec) -> OuterLattice:
    gens = spec.generators()
    index = {g: i for i, g in enumerate(gens)}
    atoms = []
    for C, m in zip(spec.classes, spec.sizes):
        x = 0
        if m > 0 and popcount(C) >= m:
            for combo in combinations(list(iter_bits(C)), m):
                g = mask_of(combo)
                if g in index:
                    x |= 1 << index[g]
        atoms.append(x)
    nonzero = [a for a in atoms if a]
    if not nonzero:
        return OuterLattice(atoms, [], {0: 1}, {})
    lat = union_semilattice(nonzero)
    mu = mobius_below(lat)
    classes_of = {}
    for X in lat.elements[1:]:
        classes_of[X] = mask_of(j for j, a in enumerate(atoms) if a and a & X == a)
    return OuterLattice(atoms, lat.elements[1:], mu, classes_of)


def double_mobius_table(spec: GeneratorSpec, outer: OuterLattice | None = None) -> ClassTable:
    """``phi(P) = sum over X of mu(0^, X) * [no class of X lies in P]``."""
    outer = outer or outer_lattice(spec)
    c = spec.num_classes
    table = [0] * (1 << c)
    for P in range(1 << c):
        table[P] = sum(outer.mu[X] for X in outer.elements if not outer.classes_of[X] & P)

    def literal(family):
        # sum of mu(X) over X containing every member of the family
        total = 0
        for X in outer.elements:
            E = outer.classes_of[X]
            if all(spec.support(g) & E for g in family):
                total += outer.mu[X]
        return total
    return ClassTable(table, literal)


def double_mobius_sum(spec, term, cap=None, evaluation="auto", backend="auto",
                      budget: Budget = DEFAULT_BUDGET) -> SumResult:
    """``sum over X in C of mu_C(X) * sum over z in E(X) of mu_E(z) * term(|z|)``.

    ``lattice`` builds each inner semilattice ``E(X)`` and its Möbius
    function; ``grouped`` swaps the two sums and evaluates the inner Möbius
    values through the union-grouped identity.
    """
    outer = outer_lattice(spec)
    if not outer.elements:
        return SumResult(0, 0, "lattice")
    use_np = _use_numpy(spec, backend)
    if evaluation == "auto":
        evaluation = "lattice"
        if use_np:
            layers = lattice_layers(spec, cap, budget)
            work = sum(len(z) << s for s, z in layers.items()) * len(outer.elements)
            if work > budget.max_lattice_work:
                evaluation = "grouped"
    if evaluation == "grouped":
        return grouped_sum(spec, double_mobius_table(spec, outer), term, cap,
                           backend=backend, budget=budget)
    if evaluation == "direct":
        return direct_sum(spec, double_mobius_table(spec, outer), term, cap, budget=budget)
    if evaluation != "lattice":
        raise ValueError(f"unknown evaluation {evaluation!r}")
    value = 0
    unions = 0
    if use_np:
        layers = lattice_layers(spec, cap, budget)
        covers = {}
        for s, Z in layers.items():
            covers[s] = [np.where(np.bitwise_count(Z & np.int64(C)) >= m, Z & np.int64(C), 0)
                         if m > 0 else np.zeros_like(Z)
                         for C, m in zip(spec.classes, spec.sizes)]
        for X in outer.elements:
            E = outer.classes_of[X]
            sub = {}
            for s, Z in layers.items():
                cov = np.zeros_like(Z)
                for j in iter_bits(E):
                    cov |= covers[s][j]
                keep = Z[cov == Z]
                if len(keep):
                    sub[s] = keep
            mus = mobius_layers(sub)
            inner = sum(int(mus[s].sum()) * term(s) for s in sub)
            unions += sum(len(z) for z in sub.values())
            value += outer.mu[X] * inner
        return SumResult(value, unions, "lattice")
    gens = spec.generators()
    for X in outer.elements:
        gx = [g for i, g in enumerate(gens) if X >> i & 1]
        lat = union_semilattice(gx, size_cap=cap, keep=spec.keep, max_elements=budget.max_lattice)
        mu = mobius_below(lat)
        unions += len(lat) - 1
        value += outer.mu[X] * sum(mu[z] * term(popcount(z)) for z in lat.elements[1:])
    return SumResult(value, unions, "lattice")
