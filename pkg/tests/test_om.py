import pytest

from tope_committees import (
    OrientedMatroid, SignVector, format_topes, halfspace, max_positive_topes, parse_topes,
    reorient, validate,
)
from tope_committees.errors import (
    DuplicateTope, ElementOutOfRange, MalformedLine, SymmetryViolation, ValidationFailure,
)
from tope_committees.generate import PAPER_HALFSPACE_ROWS


def test_sign_vector_roundtrip():
    T = SignVector.from_string("+-+")
    assert T.positives == frozenset({1, 3})
    assert str(T) == "+-+"
    assert str(-T) == "-+-"
    assert T[1] == "+" and T[2] == "-"
    assert T.reoriented({1, 2}) == SignVector.from_string("-++")


def test_sign_vector_rejects_bad_characters():
    with pytest.raises(MalformedLine):
        SignVector.from_string("+0-")


def test_parse_half_listing_gives_paper_instance():
    text = "# third positive halfspace\nt 6\nsymmetry half\n" + "\n".join(PAPER_HALFSPACE_ROWS)
    om = parse_topes(text)
    assert om.t == 6 and om.num_topes == 28
    assert not validate(om)


def test_parse_full_c3(c3):
    om = parse_topes("t 3\nsymmetry full\n+--\n++-\n-+-\n-++\n--+\n+-+\n")
    assert om == c3


def test_parse_errors():
    with pytest.raises(DuplicateTope):
        parse_topes("t 3\nsymmetry full\n++-\n++-\n--+\n")
    with pytest.raises(MalformedLine):
        parse_topes("t 3\nsymmetry full\n++\n")
    with pytest.raises(MalformedLine):
        parse_topes("++-\n")
    with pytest.raises(SymmetryViolation):
        parse_topes("t 3\nsymmetry full\n++-\n--+\n+--\n")
    with pytest.raises(SymmetryViolation):
        parse_topes("t 3\nsymmetry half\n++-\n--+\n")
    with pytest.raises(ValidationFailure):
        parse_topes("t 2\nsymmetry full\n++\n--\n")


def test_format_roundtrip(paper):
    assert parse_topes(format_topes(paper, "x")) == paper


def test_validate_clean(c3, paper):
    assert validate(c3) == [] and validate(paper) == []


def test_validate_reports_broken_symmetry(c3):
    om = OrientedMatroid(3, [T for T in c3.topes if str(T) != "-++"])
    kinds = {(v.kind, v.topes) for v in validate(om)}
    assert ("symmetry", ("+--",)) in kinds


def test_validate_degenerate_pair():
    kinds = sorted(v.kind for v in validate(OrientedMatroid(2, ["++", "--"])))
    assert kinds == ["acyclic", "simplicity"]


def test_single_sign_flips_are_detected(paper):
    for i in range(paper.num_topes):
        T = paper.topes[i]
        for e in range(1, paper.t + 1):
            flipped = T.reoriented({e})
            if flipped in paper.topes:
                continue
            rows = list(paper.topes)
            rows[i] = flipped
            assert validate(OrientedMatroid(paper.t, rows))


def test_halfspaces(c3, paper):
    h = halfspace(c3, 1, "+")
    assert {str(c3.topes[i]) for i in h.members} == {"+--", "++-", "+-+"}
    assert {str(paper.topes[i]) for i in halfspace(paper, 3).members} == set(PAPER_HALFSPACE_ROWS)
    for om in (c3, paper):
        for e in range(1, om.t + 1):
            plus, minus = halfspace(om, e, "+"), halfspace(om, e, "-")
            assert len(plus) == len(minus) == om.num_topes // 2
            assert plus.members | minus.members == set(range(om.num_topes))
            assert not plus.members & minus.members
    with pytest.raises(ElementOutOfRange):
        halfspace(c3, 4)


def test_negation_is_fixed_point_free_involution(paper):
    neg = paper.negation
    assert all(neg[neg[i]] == i and neg[i] != i for i in range(paper.num_topes))


def test_reorient(c3):
    assert reorient(c3, set()) == c3
    assert reorient(reorient(c3, {1}), {1}) == c3
    r = reorient(c3, {1})
    old_minus = {str(c3.topes[i].reoriented({1})) for i in halfspace(c3, 1, "-").members}
    assert {str(r.topes[i]) for i in halfspace(r, 1, "+").members} == old_minus
    # flipping element 1 turns -++ into +++, so only acyclicity can break
    assert {v.kind for v in validate(r)} == {"acyclic"}
    assert validate(reorient(c3, {1, 2, 3})) == []
    with pytest.raises(ElementOutOfRange):
        reorient(c3, {5})


def test_max_positive_topes(c3, paper):
    assert {str(c3.topes[i]) for i in max_positive_topes(c3)} == {"++-", "-++", "+-+"}
    got = max_positive_topes(paper)
    assert got
    parts = paper.tope_masks
    for i in got:
        assert not any(j != i and parts[i] & parts[j] == parts[i] for j in got)
