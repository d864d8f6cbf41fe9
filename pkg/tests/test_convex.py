import random

import pytest

from tope_committees import random_realizable
from tope_committees.bits import iter_bits, mask_of, popcount
from tope_committees.convex import (
    as_elements, cell, conv, conv_mask, convex_sets, extreme_points, gamma, hull_sign_sum,
    ideal_layer_count, is_convex, is_free,
)
from tope_committees.errors import NotConvex
from tope_committees.families import GeneratorSpec


def test_c3_closure(c3):
    assert conv(c3, []) == frozenset()
    assert conv(c3, [1, 2]) == {1, 2}
    assert conv(c3, [1, 2, 3]) == {1, 2, 3}
    assert cell(c3, [1, 2, 3]) == 0
    assert cell(c3, []) == c3.full_mask
    lat = convex_sets(c3)
    assert sorted(sorted(s.elements) for s in lat) == sorted(
        [[], [1], [2], [3], [1, 2], [2, 3], [1, 3], [1, 2, 3]])


def test_extreme_points(c3):
    assert extreme_points(c3, [1, 2]) == {1, 2} and is_free(c3, [1, 2])
    assert extreme_points(c3, [1, 2, 3]) == {1, 2, 3}
    for e in (1, 2, 3):
        assert is_free(c3, [e])


def test_not_convex(paper):
    lat = convex_sets(paper)
    masks = {s.mask for s in lat}
    A = next(A for A in range(1, 1 << paper.t) if A not in masks)
    with pytest.raises(NotConvex):
        extreme_points(paper, A)
    with pytest.raises(NotConvex):
        is_free(paper, A)


def test_gamma(c3):
    assert gamma(c3, ["++-", "-++"]) == {2}
    assert gamma(c3, ["+--", "-+-"]) == frozenset()


def _instances():
    yield random_realizable(3, 2, 0)
    for (t, d) in [(4, 2), (5, 2), (6, 2), (4, 3), (5, 3), (6, 3)]:
        for seed in range(3):
            yield random_realizable(t, d, seed)


def test_closure_laws(c3, paper):
    for om in [c3, paper, *_instances()]:
        rng = random.Random(om.num_topes)
        assert conv_mask(om, 0) == 0
        for _ in range(60):
            A = rng.randrange(1 << om.t)
            B = A | rng.randrange(1 << om.t)
            cA = conv_mask(om, A)
            assert A & cA == A                       # extensive
            assert cA & conv_mask(om, B) == cA       # monotone
            assert conv_mask(om, cA) == cA           # idempotent
        lat = convex_sets(om)
        masks = {s.mask for s in lat}
        assert all(1 << e in masks for e in range(om.t))
        for a in masks:
            for b in masks:
                assert a & b in masks
        assert masks == {A for A in range(1 << om.t) if is_convex(om, A)}


def test_layer_counts_agree(c3, paper):
    assert ideal_layer_count(c3, 2, "Direct") == 9
    assert ideal_layer_count(c3, 1, "FreeSets") == 6
    assert ideal_layer_count(paper, 1, "Direct") == ideal_layer_count(paper, 1, "FreeSets") == 28
    for om in [c3, *_instances()]:
        lat = convex_sets(om)
        for j in range(1, om.num_topes // 2 + 1):
            direct = ideal_layer_count(om, j, "Direct")
            assert direct == ideal_layer_count(om, j, "FreeSets", lat)
            if om.num_topes <= 14:
                assert direct == ideal_layer_count(om, j, "Brute")


def test_grouping_identity_on_nonempty_cells():
    for om in _instances():
        for s in convex_sets(om):
            if s.mask and s.cell:
                assert hull_sign_sum(om, s.mask) == ((-1) ** len(s) if s.free else 0)


def test_gamma_matches_support_map(paper):
    rng = random.Random(3)
    spec = GeneratorSpec(paper.num_topes, tuple(paper.positive_masks), (3,) * paper.t)
    for _ in range(200):
        d = mask_of(rng.sample(range(paper.num_topes), 3))
        g = gamma(paper, d)
        assert g == as_elements(spec.support(d))
        assert is_convex(paper, g)
        assert (g != frozenset()) == any(d & P == d for P in paper.positive_masks)


def test_summary(paper):
    lat = convex_sets(paper)
    summary = lat.summary()
    assert sum(row["convex"] for row in summary.values()) == len(lat)
    assert sum(row["free"] for row in summary.values()) == len(lat.free_sets())


def test_grouping_identity_can_fail_on_empty_cells():
    # four lines at roughly 0, 100, 200 and 300 degrees: any three of the
    # vectors positively span the plane, so the whole ground set is the hull
    # of many sets while no point of it is extreme
    from tope_committees.generate import oriented_matroid_of_vectors
    om = oriented_matroid_of_vectors([(10, 0), (-2, 11), (-9, -3), (5, -9)])
    full = (1 << om.t) - 1
    assert cell(om, full) == 0 and not is_free(om, full)
    assert hull_sign_sum(om, full) == -1
    # the empty cell contributes C(0, j) = 0, so the layer counts still agree
    for j in range(1, om.num_topes // 2 + 1):
        assert ideal_layer_count(om, j, "Direct") == ideal_layer_count(om, j, "FreeSets")
