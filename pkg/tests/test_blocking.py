import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from tope_committees.bits import mask_of, popcount
from tope_committees.blocking import (
    ALL_METHODS, BlockingInstance, applicable_methods, brute_blockers, check_constraints,
    count_blockers_ie, count_blockers_mobius, count_blockers_nerve, ideal_layer,
    ideal_layer_size, nu_of, random_antichain, run_method,
)
from tope_committees.errors import ConstraintViolation, EmptyMember, RetryBudgetExceeded
from tope_committees.families import Budget

SMALL = Budget(max_direct_generators=14)


def inst(n, sets, r, k):
    return BlockingInstance.from_sets(n, sets, r, k)


def test_nu_is_exact():
    assert nu_of(F(1, 2), 2) == 2
    assert nu_of(F(1, 3), 3) == 2
    assert nu_of(F(2, 3), 3) == 3
    assert nu_of(F(0), 5) == 1


def test_brute_examples():
    assert brute_blockers(inst(4, [[1, 2]], F(1, 2), 2)) == 1
    count, found = brute_blockers(inst(4, [[1, 2]], F(1, 2), 2), listing=True)
    assert found == [mask_of([0, 1])]
    assert brute_blockers(inst(4, [[1, 2], [3, 4]], F(1, 2), 2)) == 0
    assert brute_blockers(inst(5, [[1, 3], [2, 4, 5]], F(0), 5)) == 1


def test_instance_validation():
    with pytest.raises(EmptyMember):
        BlockingInstance(4, (0,), F(0), 1)
    with pytest.raises(ValueError):
        inst(3, [[1, 2, 3]], F(0), 1)
    with pytest.raises(ValueError):
        inst(4, [[1], [1, 2]], F(0), 1)
    with pytest.raises(ValueError):
        inst(4, [[1]], F(1), 1)
    with pytest.raises(ValueError):
        inst(4, [[1]], F(0), 5)


def test_constraints():
    st_ = check_constraints(inst(4, [[1, 2]], F(1, 2), 2))
    assert st_.rank_window and st_.rank_floor
    st_ = check_constraints(inst(4, [[1]], F(1, 2), 2))
    assert not st_.rank_window and not st_.rank_floor
    with pytest.raises(ConstraintViolation):
        count_blockers_ie(inst(4, [[1]], F(1, 2), 2), "DoubleIE")
    with pytest.raises(ConstraintViolation):
        count_blockers_nerve(inst(4, [[1]], F(1, 2), 2))
    # lower bound holds, upper bound fails: only the layer methods run
    i = inst(5, [[1, 2, 3, 4]], F(0), 3)
    s = check_constraints(i)
    assert s.rank_floor and not s.rank_window
    with pytest.raises(ConstraintViolation):
        count_blockers_ie(i, "ComplementIdeal")
    assert count_blockers_ie(i, "DoubleIE") == brute_blockers(i)


@given(st.integers(3, 8), st.integers(0, 10 ** 6), st.sampled_from([F(0), F(1, 3), F(1, 2), F(2, 3)]))
def test_window_implies_floor(n, seed, r):
    try:
        A = random_antichain(n, 3, (1, n - 1), seed)
    except RetryBudgetExceeded:
        return
    for k in range(1, n + 1):
        s = check_constraints(BlockingInstance(n, A, r, k))
        assert not s.rank_window or s.rank_floor


@pytest.mark.parametrize("sets,n,r,k,want", [
    ([[1, 2]], 4, F(1, 2), 2, 1),
    ([[1, 2], [3, 4]], 4, F(1, 2), 2, 0),
])
def test_every_method_on_examples(sets, n, r, k, want):
    i = inst(n, sets, r, k)
    assert set(applicable_methods(i)) == set(ALL_METHODS)
    for name in ALL_METHODS:
        assert run_method(i, name) == want


def test_three_pairs_nerve():
    i = inst(5, [[1, 2], [2, 3], [1, 3]], F(1, 2), 3)
    assert count_blockers_nerve(i) == brute_blockers(i)
    assert count_blockers_nerve(i, evaluation="direct", budget=SMALL) == brute_blockers(i)


def test_empty_ideal_layer_gives_zero():
    i = inst(6, [[1, 2], [3, 4]], F(2, 3), 3)  # nu = 3 exceeds every member
    assert ideal_layer(i, i.nu) == []
    assert brute_blockers(i) == 0


def test_random_three_sets_of_three():
    for seed in range(10):
        A = random_antichain(6, 3, 3, seed)
        i = BlockingInstance(6, A, F(1, 3), 3)
        want = brute_blockers(i)
        for name in applicable_methods(i):
            assert run_method(i, name) == want


def _instances(seeds, max_n=8):
    rng = random.Random(seeds)
    for _ in range(25):
        n = rng.randint(3, max_n)
        try:
            A = random_antichain(n, rng.randint(1, 4), (1, n - 1), rng.random())
        except RetryBudgetExceeded:
            continue
        yield n, A


def test_truncation_and_direct_evaluation():
    for n, A in _instances(3, max_n=6):
        for r in (F(0), F(1, 2)):
            for k in range(1, n + 1):
                i = BlockingInstance(n, A, r, k)
                want = brute_blockers(i)
                st_ = check_constraints(i)
                if st_.rank_window:
                    for m in ("ComplementIdeal", "Ideal", "Vandermonde"):
                        assert count_blockers_ie(i, m, truncate=False) == want
                        assert count_blockers_mobius(i, m, truncate=False) == want
                        try:
                            assert count_blockers_ie(i, m, evaluation="direct", budget=SMALL) == want
                        except Exception as exc:
                            assert "direct_generators" in str(exc)
                if st_.rank_floor:
                    assert count_blockers_ie(i, "DoubleIE", truncate=False) == want
                    assert count_blockers_mobius(i, "DoubleMobius", truncate=False) == want
                    assert count_blockers_nerve(i, truncate=False) == want


def test_layer_sizes():
    for n, A in _instances(4):
        for j in range(1, n + 1):
            assert ideal_layer_size(A, j) == len(ideal_layer(A, j))
            direct = sum(1 for c in combinations(range(n), j)
                         if any(mask_of(c) & lam == mask_of(c) for lam in A))
            assert direct == len(ideal_layer(A, j))


def test_random_antichain_is_antichain():
    A = random_antichain(8, 4, (2, 5), 9)
    assert len(A) == 4
    for a, b in combinations(A, 2):
        assert a & b not in (a, b)
    assert all(2 <= popcount(a) <= 5 for a in A)
    assert A == random_antichain(8, 4, (2, 5), 9)
    with pytest.raises(RetryBudgetExceeded):
        random_antichain(3, 5, 1, 0)
