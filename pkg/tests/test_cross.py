import math
import random
from fractions import Fraction as F

import pytest

from tope_committees.cross import (
    CrossInstance, brute_blockers_cross, count_blockers_cross, decode, encode, layer,
    layer_size, random_cross_antichain,
)
from tope_committees.errors import ConstraintViolation, RetryBudgetExceeded


def test_encoding_roundtrip():
    assert decode(3, encode(3, [1, -2, 3])) == [1, -2, 3]
    with pytest.raises(ValueError):
        encode(2, [3])


@pytest.mark.parametrize("m", range(1, 7))
def test_layer_size(m):
    for k in range(0, m + 1):
        els = list(layer(m, k))
        assert len(els) == len(set(els)) == layer_size(m, k) == 2 ** k * math.comb(m, k)


def test_examples():
    assert brute_blockers_cross(CrossInstance.from_sets(2, [[1]], 0, 1)) == 1
    assert brute_blockers_cross(CrossInstance.from_sets(2, [[1], [-1]], 0, 1)) == 0
    i = CrossInstance.from_sets(2, [[1]], 0, 1)
    assert count_blockers_cross(i, "DoubleMobius") == count_blockers_cross(i, "DoubleIE") == 1
    i = CrossInstance.from_sets(3, [[1, 2], [2, 3]], F(1, 2), 2)
    want = brute_blockers_cross(i)
    assert count_blockers_cross(i, "DoubleMobius") == count_blockers_cross(i, "DoubleIE") == want


def test_validation():
    with pytest.raises(ValueError):
        CrossInstance.from_sets(2, [[1, -1]], 0, 1)
    with pytest.raises(ValueError):
        CrossInstance.from_sets(2, [[1], [1, 2]], 0, 1)
    with pytest.raises(ConstraintViolation):
        count_blockers_cross(CrossInstance.from_sets(3, [[1]], F(1, 2), 2))


def test_random_m4():
    for seed in range(10):
        A = random_cross_antichain(4, 3, (2, 4), seed)
        i = CrossInstance(4, A, F(1, 3), 3)
        if i.nu > min(bin(a).count("1") for a in A):
            continue
        want = brute_blockers_cross(i)
        for method in ("DoubleMobius", "DoubleIE"):
            for ev in ("lattice", "grouped", "direct") if method == "DoubleMobius" else ("grouped", "direct"):
                assert count_blockers_cross(i, method, evaluation=ev) == want
            assert count_blockers_cross(i, method, truncate=False) == want


def test_random_antichain_shape():
    A = random_cross_antichain(5, 4, (1, 3), 1)
    assert A == random_cross_antichain(5, 4, (1, 3), 1)
    with pytest.raises(RetryBudgetExceeded):
        random_cross_antichain(1, 3, 1, 0)
