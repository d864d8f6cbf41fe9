import json
import subprocess
import sys

import pytest

from tope_committees import parse_topes, validate
from tope_committees.cli import main, parse_k_range

from conftest import DATA, PAPER_KAPPA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_k_range():
    assert parse_k_range("3..5") == [3, 4, 5]
    assert parse_k_range("7") == [7]


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", DATA / "c3.topes")
    assert code == 0 and json.loads(out)["valid"]
    bad = tmp_path / "bad.topes"
    bad.write_text("t 3\nsymmetry full\n+--\n-++\n+++\n---\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "ValidationFailure" in err


def test_kappa_brute_paper(capsys):
    code, out, _ = run(capsys, "kappa", DATA / "paper.topes", "--method", "brute", "--threads", 1)
    assert code == 0
    doc = json.loads(out)
    assert doc["instance"] == {"t": 6, "num_topes": 28}
    assert doc["totals"]["kappa"] == 238012
    got = {r["k"]: r["value"] for r in doc["results"] if r["variant"] == "kappa"}
    assert [got[k] for k in range(1, 15)] == list(PAPER_KAPPA)
    assert all(got[k] == got[28 - k] for k in range(1, 28))


def test_kappa_formula(capsys):
    code, out, _ = run(capsys, "kappa", DATA / "c3.topes", "--k", "3..3", "--method", "convex-euler")
    assert code == 0 and json.loads(out)["results"][0]["value"] == 1


def test_kappa_free_tsv(capsys):
    code, out, _ = run(capsys, "kappa", DATA / "c3.topes", "--free", "--min", "--maxplus",
                       "--out", "tsv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "k\tkappa\tkappa_free\tkappa_min\tkappa_maxplus\tn_star"
    assert lines[3].split("\t")[:5] == ["3", "1", "1", "1", "1"]


def test_kappa_all_is_a_crosscheck(capsys):
    code, out, _ = run(capsys, "kappa", DATA / "c3.topes", "--method", "all")
    assert code == 0
    doc = json.loads(out)
    assert doc["totals"]["disagree"] == 0
    assert {r["method"] for r in doc["results"]} >= {"HalfspaceIE", "UniqueFacet"}


def test_crosscheck_subcommand(capsys):
    code, out, _ = run(capsys, "crosscheck", DATA / "c3.topes", "--k", "3..3", "--out", "tsv")
    assert code == 0 and out.splitlines()[1].startswith("kappa\t3\t1")
    code, out, _ = run(capsys, "crosscheck", DATA / "c3.topes", "--k", "3..3",
                       "--methods", "hs-ie,double-mobius")
    doc = json.loads(out)
    assert code == 0 and {r["method"] for r in doc["results"]} == {"HalfspaceIE", "DoubleMobius"}


def test_gen(capsys, tmp_path):
    target = tmp_path / "g.topes"
    code, _, _ = run(capsys, "gen", "--t", 5, "--dim", 3, "--seed", 3, "--out", target)
    assert code == 0
    om = parse_topes(target.read_text())
    assert om.num_topes == 22 and validate(om) == []
    code, out, _ = run(capsys, "gen", "--t", 5, "--dim", 3, "--seed", 3)
    assert parse_topes(out) == om


def test_bool_block_all(capsys):
    code, out, _ = run(capsys, "bool-block", "--n", 4, "--r", "1/2", "--k", 2,
                       "--antichain", DATA / "one-pair.txt", "--method", "all")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["results"]) == 10
    assert all(r["value"] == 1 for r in doc["results"])


def test_bool_block_random_and_constraint_errors(capsys):
    code, out, _ = run(capsys, "bool-block", "--n", 6, "--r", "1/3", "--k", 3,
                       "--random", 3, 3, 1, "--out", "tsv")
    assert code == 0 and out.startswith("method\tvalue\tagrees")
    code, _, err = run(capsys, "bool-block", "--n", 4, "--r", "3/4", "--k", 2,
                       "--random", 1, 1, 3, "--method", "nerve")
    assert code == 2 and "ConstraintViolation" in err


def test_cross_block(capsys):
    code, out, _ = run(capsys, "cross-block", "--m", 3, "--r", "1/2", "--k", 2,
                       "--antichain", DATA / "cross-path.txt")
    doc = json.loads(out)
    assert code == 0 and doc["totals"]["disagree"] == 0


def test_convex(capsys):
    code, out, _ = run(capsys, "convex", DATA / "paper.topes", "--layer", 2)
    doc = json.loads(out)
    assert code == 0 and doc["layer"]["Direct"] == doc["layer"]["FreeSets"]
    assert doc["convex_sets"] == sum(row["convex"] for row in doc["by_size"].values())


@pytest.mark.parametrize("argv", [
    ["kappa"],
    ["kappa", "missing.topes"],
    ["bool-block", "--n", "4", "--r", "x", "--k", "2", "--random", "1", "2", "3"],
    ["kappa", str(DATA / "c3.topes"), "--method", "hs-ie", "--min"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tope_committees.cli", "validate",
                           str(DATA / "c3.topes"), "--out", "tsv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "valid" in proc.stdout


def test_disagreement_exit_code(capsys, monkeypatch):
    from tope_committees import blocking
    real = blocking.run_method
    monkeypatch.setattr(blocking, "run_method",
                        lambda inst, name, **kw: real(inst, name, **kw) + (name == "nerve"))
    code, out, _ = run(capsys, "bool-block", "--n", 4, "--r", "1/2", "--k", 2,
                       "--antichain", DATA / "one-pair.txt")
    assert code == 1 and json.loads(out)["totals"]["disagree"] == 1
