import json

import pytest

from tope_committees import (
    EllChoice, committee_sum, count_committees, count_free_committees, crosscheck,
    free_committee_sum, kappa_sweep, random_realizable,
)
from tope_committees.errors import HypothesisFailed, OutOfRangeK
from tope_committees.families import Budget
from tope_committees.formulas import CLI_NAMES, FREE_METHODS, METHODS

SMALL = Budget(max_direct_generators=16)


def test_c3_every_method(c3):
    for m in METHODS:
        assert count_committees(c3, 3, m) == 1
    for m in FREE_METHODS:
        assert count_free_committees(c3, 3, m) == 1


def test_cli_names_resolve(c3):
    for name in CLI_NAMES:
        assert count_committees(c3, 3, name) == 1


def test_ell_choice():
    assert EllChoice.parse("small").resolve(28, 23, "HalfspaceIE") == 5
    assert EllChoice.parse("large").resolve(28, 5, "HalfspaceIE") == 23
    assert EllChoice.parse("auto").resolve(28, 5, "Vandermonde") == 23
    assert EllChoice.parse(5).resolve(28, 23, "HalfspaceIE") == 5
    with pytest.raises(ValueError):
        EllChoice.parse(4).resolve(28, 23, "HalfspaceIE")
    with pytest.raises(ValueError):
        EllChoice.parse("medium")


def test_out_of_range(c3, paper):
    with pytest.raises(OutOfRangeK):
        count_committees(paper, 2)
    with pytest.raises(OutOfRangeK):
        count_committees(paper, 26)
    with pytest.raises(OutOfRangeK):
        count_free_committees(paper, 15)


@pytest.fixture(scope="module")
def small_instances():
    out = []
    for (t, d, seed) in [(4, 2, 1), (5, 2, 2), (4, 3, 3)]:
        om = random_realizable(t, d, seed)
        out.append((om, kappa_sweep(om, variants=("free",))))
    return out


def test_ell_invariance_and_direct_evaluation(small_instances):
    for om, rep in small_instances:
        N = om.num_topes
        for k in range(3, N - 2):
            for m in ("HalfspaceIE", "Vandermonde", "MobiusUnion", "MobiusVandermonde",
                      "DoubleMobius", "ConvexEuler"):
                for ell in ("small", "large"):
                    assert count_committees(om, k, m, ell) == rep.kappa[k]


def test_truncation_is_sound(small_instances):
    # untruncated sums visit every union, so stay with the smaller instances
    for om, rep in small_instances[:2]:
        N = om.num_topes
        for k in range(3, N - 2):
            for m in ("HalfspaceIE", "Vandermonde", "MobiusUnion", "DoubleMobius", "ConvexEuler"):
                a = committee_sum(om, k, m, truncate=True).value
                b = committee_sum(om, k, m, truncate=False).value
                assert a == b == rep.kappa[k]
        for k in range(3, N // 2 + 1):
            for m in ("DoubleMobius", "ConvexEuler"):
                assert (free_committee_sum(om, k, m, truncate=False).value
                        == rep.kappa_free[k])


def test_direct_evaluation_matches(c3, small_instances):
    for om, rep in [(c3, kappa_sweep(c3, variants=("free",)))] + small_instances[:2]:
        N = om.num_topes
        for k in range(3, N - 2):
            for m in ("HalfspaceIE", "MobiusUnion", "ConvexEuler", "DoubleMobius"):
                try:
                    v = committee_sum(om, k, m, evaluation="direct", budget=SMALL).value
                except Exception as exc:  # budget on the larger families
                    assert "direct_generators" in str(exc)
                    continue
                assert v == rep.kappa[k]


def test_euler_and_mobius_weights_coincide(small_instances):
    for om, rep in small_instances:
        N = om.num_topes
        for k in range(3, N - 2):
            assert (committee_sum(om, k, "ConvexEuler", chi="complex").value
                    == committee_sum(om, k, "ConvexEuler", chi="mobius").value)
        for k in range(3, N // 2 + 1):
            assert (free_committee_sum(om, k, "ConvexEuler", chi="complex").value
                    == rep.kappa_free[k])


def test_unique_facet_consistency(small_instances):
    ran = 0
    for om, rep in small_instances:
        for k in range(3, om.num_topes - 2):
            try:
                v = count_committees(om, k, "UniqueFacet")
            except HypothesisFailed:
                continue
            ran += 1
            assert v == count_committees(om, k, "ConvexEuler") == rep.kappa[k]
    assert ran


def test_paper_small_k(paper, paper_report):
    for k, want in ((3, 3), (5, 144), (6, 1)):
        for m in ("HalfspaceIE", "Vandermonde", "MobiusUnion", "MobiusVandermonde",
                  "DoubleMobius", "ConvexEuler"):
            assert count_committees(paper, k, m) == want == paper_report.kappa[k]
    assert count_committees(paper, 23, "HalfspaceIE", ell="small") == 144
    assert count_committees(paper, 6, "UniqueFacet") == 1
    with pytest.raises(HypothesisFailed):
        count_committees(paper, 3, "UniqueFacet")
    for k, want in ((3, 3), (5, 111)):
        assert count_free_committees(paper, k, "ConvexEuler") == want


def test_crosscheck_report(c3):
    rep = crosscheck(c3, [3])
    assert rep.ok and all(c.agrees for c in rep.cells)
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) == {"instance", "results", "totals"}
    assert d["instance"] == {"t": 3, "num_topes": 6}
    assert d["totals"]["disagree"] == 0
    header = rep.to_tsv().splitlines()[0].split("\t")
    assert header[:3] == ["variant", "k", "oracle"]


def test_crosscheck_records_refusals(paper, paper_report):
    rep = crosscheck(paper, [3, 6], methods=["HalfspaceIE", "UniqueFacet"], free_methods=[],
                     oracle=paper_report)
    cells = {(c.k, c.method): c for c in rep.cells}
    assert cells[(3, "UniqueFacet")].agrees is None
    assert "HypothesisFailed" in cells[(3, "UniqueFacet")].error
    assert cells[(6, "UniqueFacet")].agrees and cells[(3, "HalfspaceIE")].value == 3
    assert rep.ok
