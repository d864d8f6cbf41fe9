import pytest

from tope_committees import halfspace, kappa_sweep, random_realizable, validate
from tope_committees.errors import DimensionTooLarge
from tope_committees.generate import (
    PAPER_HALFSPACE_ROWS, TRIANGLE_VECTORS, expected_generic_tope_count, oriented_matroid_of_vectors,
    strictly_feasible,
)


def test_paper_example(paper):
    assert paper.t == 6 and paper.num_topes == 28
    assert validate(paper) == []
    assert {str(paper.topes[i]) for i in halfspace(paper, 3).members} == set(PAPER_HALFSPACE_ROWS)


def test_triangle(c3):
    assert c3.t == 3 and c3.num_topes == 6 and validate(c3) == []
    assert kappa_sweep(c3, [3]).kappa[3] == 1
    assert oriented_matroid_of_vectors(TRIANGLE_VECTORS).indices(c3.topes) == frozenset(range(6))


def test_strictly_feasible():
    assert not strictly_feasible([(1,), (-1,)])
    assert strictly_feasible([(1,)])
    assert not strictly_feasible(list(TRIANGLE_VECTORS))
    assert strictly_feasible([(1, 0), (0, 1), (1, 1)])
    with pytest.raises(DimensionTooLarge):
        strictly_feasible([(1, 0, 0, 0, 0)])


@pytest.mark.parametrize("t,d", [(3, 2), (4, 2), (5, 2), (4, 3), (5, 3), (6, 3)])
def test_generic_counts(t, d):
    om = random_realizable(t, d, seed=11)
    assert validate(om) == []
    assert om.num_topes == expected_generic_tope_count(t, d)


def test_known_small_counts():
    assert random_realizable(3, 2, 0).num_topes == 6
    assert random_realizable(4, 2, 0).num_topes == 8


def test_deterministic_per_seed():
    assert random_realizable(5, 3, 42) == random_realizable(5, 3, 42)


def test_dimension_bound():
    with pytest.raises(DimensionTooLarge):
        random_realizable(6, 5, 0)
