"""Finite set systems: union semilattices, Möbius values, blockers, complexes.

Sets are integer masks over a universe ``{0..n-1}``.  In a generated union
semilattice the adjoined least element is represented by the mask ``0``;
the empty set is never a union of nonempty generators, so there is no
clash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .bits import iter_bits, mask_of, popcount, proper_submasks
from .errors import CapExceeded, DoesNotCover, EmptyMember

ZERO_HAT = 0
MAX_LATTICE_ELEMENTS = 3_000_000
MAX_FACE_ENUM_VERTICES = 24


# ---------------------------------------------------------------------------
# Sperner families
# ---------------------------------------------------------------------------

def min_sets(family) -> list:
    """Inclusion-minimal members of ``family`` (masks), deduplicated."""
    out = []
    for s in sorted(set(family), key=popcount):
        if not any(m & s == m for m in out):
            out.append(s)
    return out


def max_sets(family) -> list:
    out = []
    for s in sorted(set(family), key=popcount, reverse=True):
        if not any(m & s == s for m in out):
            out.append(s)
    return out


def blocker(family) -> list:
    """Minimal transversals of a Sperner family of masks (Berge's method)."""
    family = list(family)
    if any(f == 0 for f in family):
        raise EmptyMember("the blocker is undefined for a family containing the empty set")
    if not family:
        raise EmptyMember("the blocker of the empty family is not a family of nonempty sets")
    current = [0]
    for f in min_sets(family):
        nxt = set()
        for b in current:
            if b & f:
                nxt.add(b)
            else:
                for x in iter_bits(f):
                    nxt.add(b | (1 << x))
        current = min_sets(nxt)
    return sorted(current)


def is_transversal(family, c: int) -> bool:
    return all(c & f for f in family)


# ---------------------------------------------------------------------------
# generated union semilattices
# ---------------------------------------------------------------------------

@dataclass
class GeneratedJoinSemilattice:
    """Unions of nonempty generator subfamilies, plus a least element.

    ``elements[0]`` is the least element (mask 0); the others are sorted by
    cardinality.  With a ``size_cap`` only unions of at most that size are
    kept; with ``keep`` only unions satisfying that down-closed predicate.
    Both restrictions are order ideals of the full semilattice, so every
    retained element sees its complete down-set.
    """

    universe: int | None
    generators: list
    elements: list
    size_cap: int | None = None
    _index: set = field(default_factory=set, repr=False)
    _mobius: dict | None = field(default=None, repr=False)

    def __contains__(self, x: int) -> bool:
        return x in self._index

    def __len__(self):
        return len(self.elements)

    @property
    def top(self) -> int | None:
        """The union of all generators if it was retained."""
        u = 0
        for g in self.generators:
            u |= g
        return u if u in self._index and u != 0 else None

    def below(self, z: int):
        """Retained elements strictly below ``z`` (0 included)."""
        if z == 0:
            return []
        if (1 << popcount(z)) <= 4 * len(self.elements):
            return [y for y in proper_submasks(z) if y in self._index]
        return [y for y in self.elements if y != z and y & z == y]


def _candidate_generators(x: int, room: int, by_size: dict, index: dict):
    """Generators ``g`` with ``0 < |g - x| <= room``."""
    out = set()
    for m, gens in by_size.items():
        if m <= room:
            out.update(gens)
            continue
        q = m - room  # g must share at least q elements with x
        if q > popcount(x):
            continue
        idx = index.get((m, q))
        if idx is None:
            idx = {}
            for g in gens:
                for combo in combinations(list(iter_bits(g)), q):
                    idx.setdefault(mask_of(combo), []).append(g)
            index[(m, q)] = idx
        for combo in combinations(list(iter_bits(x)), q):
            out.update(idx.get(mask_of(combo), ()))
    return out


def union_semilattice(generators, size_cap: int | None = None, keep=None,
                      max_elements: int = MAX_LATTICE_ELEMENTS,
                      universe: int | None = None) -> GeneratedJoinSemilattice:
    """Close a family of nonempty masks under union.

    Every union of a subfamily can be built one generator at a time with
    all intermediate unions inside it, so a breadth-first closure that
    discards unions over the cap (or failing ``keep``) still reaches every
    retained union.
    """
    gens = []
    seen = set()
    for g in generators:
        if g == 0:
            raise EmptyMember("generators must be nonempty")
        if g not in seen:
            seen.add(g)
            gens.append(g)

    def ok(x):
        return (size_cap is None or popcount(x) <= size_cap) and (keep is None or keep(x))

    start = [g for g in gens if ok(g)]
    elements = set(start)
    by_size = {}
    for g in start:
        by_size.setdefault(popcount(g), []).append(g)
    index = {}
    frontier = list(elements)
    while frontier:
        nxt = []
        for x in frontier:
            if size_cap is None:
                cands = start
            else:
                room = size_cap - popcount(x)
                if room <= 0:
                    continue
                cands = _candidate_generators(x, room, by_size, index)
            for g in cands:
                y = x | g
                if y != x and y not in elements and ok(y):
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > max_elements:
                        raise CapExceeded("lattice_elements", max_elements)
        frontier = nxt
    ordered = [ZERO_HAT] + sorted(elements, key=lambda x: (popcount(x), x))
    return GeneratedJoinSemilattice(universe, gens, ordered, size_cap,
                                    _index=set(ordered))


def mobius_below(lat: GeneratedJoinSemilattice) -> dict:
    """``mu(0^, z)`` for every element, by the defining recursion.

    ``mu(0^, 0^) = 1`` and ``mu(0^, z) = -sum(mu(0^, y) for 0^ <= y < z)``.
    Memoised on the lattice instance.
    """
    if lat._mobius is not None:
        return lat._mobius
    mu = {ZERO_HAT: 1}
    for z in lat.elements[1:]:
        mu[z] = -sum(mu[y] for y in lat.below(z))
    lat._mobius = mu
    return mu


# ---------------------------------------------------------------------------
# simplicial complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialComplex:
    """A complex given by its facets (masks), on an explicit vertex set."""

    vertices: int
    facets: tuple

    @classmethod
    def from_facets(cls, facets, vertices: int | None = None) -> "SimplicialComplex":
        facets = tuple(sorted(max_sets(facets)))
        if vertices is None:
            vertices = 0
            for f in facets:
                vertices |= f
        return cls(vertices, facets)

    def faces(self) -> set:
        out = set()
        for f in self.facets:
            s = f
            while True:
                out.add(s)
                if s == 0:
                    break
                s = (s - 1) & f
        return out

    @property
    def is_void(self) -> bool:
        return not self.facets


def reduced_euler_characteristic(cx: SimplicialComplex, method: str = "auto") -> int:
    """Sum of ``(-1)**(|F| - 1)`` over all faces, the empty face included.

    ``faces`` enumerates the faces; ``cover`` uses the fact that the
    non-faces inside the vertex set are exactly the sets meeting every
    facet complement, which turns the sum into the Möbius number of the
    union lattice of those complements.
    """
    if cx.is_void:
        return 0
    support = 0
    for f in cx.facets:
        support |= f
    if method == "auto":
        method = "faces" if popcount(support) <= MAX_FACE_ENUM_VERTICES else "cover"
    if method == "faces":
        return sum(-1 if popcount(s) % 2 == 0 else 1 for s in cx.faces())
    if method != "cover":
        raise ValueError(f"unknown method {method!r}")
    if support == 0:
        return -1
    complements = [support & ~f for f in cx.facets]
    if any(c == 0 for c in complements):
        return 0  # a full simplex
    cover = 0
    for c in complements:
        cover |= c
    if cover != support:
        return 0  # a vertex in every facet: a cone
    return union_mobius_number(min_sets(complements), support)


def covering_sum(family, universe: int) -> int:
    """``sum((-1)**len(F))`` over subfamilies ``F`` whose union is ``universe``."""
    family = list(family)
    total = 0
    for r in range(1, len(family) + 1):
        for combo in combinations(family, r):
            u = 0
            for s in combo:
                u |= s
            if u == universe:
                total += -1 if r % 2 else 1
    return total


def union_mobius_number(family, universe: int | None = None) -> int:
    """``mu(0^, 1^)`` of the union lattice of ``family``.

    ``universe`` defaults to the union of the family; the family must cover
    it.
    """
    family = [f for f in family]
    if not family:
        raise DoesNotCover("empty family covers nothing")
    u = 0
    for f in family:
        u |= f
    if universe is None:
        universe = u
    if u != universe:
        raise DoesNotCover("family does not cover the universe")
    lat = union_semilattice(family)
    return mobius_below(lat)[universe]


def complex_from_family(family, universe: int) -> SimplicialComplex:
    """The complex whose facets are the complements of the family members."""
    return SimplicialComplex.from_facets([universe & ~f for f in family], universe)


def dual_complex(family, universe: int) -> SimplicialComplex:
    """Facets are complements of the members of the blocker of ``family``."""
    return SimplicialComplex.from_facets([universe & ~b for b in blocker(family)], universe)


def nerve(family) -> SimplicialComplex:
    """Index sets with a nonempty common intersection, given by facets."""
    family = list(family)
    if not family or any(f == 0 for f in family):
        raise EmptyMember("nerve needs a nonempty family of nonempty sets")
    ground = 0
    for f in family:
        ground |= f
    carriers = []
    for x in iter_bits(ground):
        carriers.append(mask_of(i for i, f in enumerate(family) if f >> x & 1))
    return SimplicialComplex.from_facets(carriers, (1 << len(family)) - 1)
