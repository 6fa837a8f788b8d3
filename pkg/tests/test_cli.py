import json
from pathlib import Path

import pytest

from fotpi.cli import main
from fotpi.model import FiniteModel

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "-e", "ci(X, Y, Z)")
    assert code == 0 and "ci(X, Y, Z)" in out


def test_parse_error(capsys):
    code, _, err = run(capsys, "parse", "-e", "indep(X,")
    assert code == 3 and "error" in err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "lei", "X", "Y")
    assert code == 0 and "forall" in out
    assert run(capsys, "expand", "nosuch", "X")[0] == 3


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", SAMPLES / "ci.fotpi", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["class"] == "Sigma 3" and (d["sigma"], d["pi"]) == (3, 4)


def test_eval_true_false(capsys):
    assert run(capsys, "eval", SAMPLES / "unif_x.fotpi", SAMPLES / "unif2.json")[0] == 0
    assert run(capsys, "eval", SAMPLES / "unif_x.fotpi", SAMPLES / "bern13.json")[0] == 1


def test_eval_evidence_roundtrip(capsys):
    code, out, _ = run(capsys, "eval", "-e", "exists U. indep(U, X) and not indep(U, U)", SAMPLES / "unif2.json",
                       "--json")
    assert code == 0
    ev = json.loads(out)["evidence"]
    m = FiniteModel.from_dict(ev)
    assert "X" in m.vars


def test_eval_missing_model(capsys):
    assert run(capsys, "eval", SAMPLES / "unif_x.fotpi", "/nonexistent.json")[0] == 3


def test_eval_budget_unknown(capsys):
    code, out, _ = run(capsys, "eval", "-e", "exists U. indep(U, X) and not indep(U, X)", SAMPLES / "unif2.json",
                       "--mode", "sound")
    assert code == 2 and "unknown" in out


def test_prove(capsys):
    assert run(capsys, "prove", "H(X) + H(Y) - H(X, Y) >= 0")[0] == 0
    code, out, _ = run(capsys, "prove", "H(X) - H(X, Y) >= 0", "--json")
    assert code == 1 and "dual_ray" in json.loads(out)
    assert run(capsys, "prove", "indep(X, Y)")[0] == 3


def test_prove_equality_splits(capsys):
    code, out, _ = run(capsys, "prove", "H(X, Y) - H(Y) = 0", "--constraint", "H(X, Y) - H(Y) = 0", "--json")
    assert code == 0 and len(json.loads(out)["parts"]) == 2


def test_imply(capsys):
    assert run(capsys, "imply", SAMPLES / "gpp_axiom.json")[0] == 0
    assert run(capsys, "imply", SAMPLES / "not_implied.json")[0] == 1


def test_imply_malformed(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"variables": ["X"]')
    assert run(capsys, "imply", p)[0] == 3


def test_compile_net(capsys):
    code, out, _ = run(capsys, "compile-net", SAMPLES / "broadcast.json", "--emit", "level")
    assert code == 0 and out.startswith("H-hierarchy level:")


def test_compile_net_bad_spec(tmp_path, capsys):
    p = tmp_path / "net.json"
    p.write_text(json.dumps({"k": 0}))
    assert run(capsys, "compile-net", p)[0] == 3


def test_search_cx(capsys):
    code, out, _ = run(capsys, "search-cx", SAMPLES / "cx_pairwise.json", "--json")
    assert code == 1
    assert json.loads(out)["verdict"] == "false"
    FiniteModel.from_dict(json.loads(out)["counterexample"])


def test_search_cx_valid_implication(capsys):
    assert run(capsys, "search-cx", SAMPLES / "gpp_axiom.json")[0] == 2


@pytest.mark.parametrize("argv", [[], ["bogus"], ["classify", "--jobs", "0", "-e", "indep(X, Y)"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3
