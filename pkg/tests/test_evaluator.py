from fractions import Fraction

import pytest

from fotpi.evaluator import (Budget, BudgetExhausted, Evaluator, TruthValue3, Verdict, eval_formula,
                             find_counterexample, register_witness_constructor)
from fotpi.formula import Exists, FormulaError, Indep, MacroCall, Not, Var, exists, join
from fotpi.macros.registry import Registry
from fotpi.model import FiniteModel, uniform_model
from fotpi.parser import parse

X, Y, Z, U = Var("X"), Var("Y"), Var("Z"), Var("U")
BITS = uniform_model(X=[0, 0, 1, 1], Y=[0, 1, 0, 1])


def test_truth_value_has_no_bool():
    with pytest.raises(TypeError):
        bool(TruthValue3(Verdict.TRUE))


def test_negate_keeps_unknown():
    assert TruthValue3(Verdict.UNKNOWN).negate().is_unknown


def test_atoms():
    assert eval_formula(Indep(X, Y), BITS).is_true
    assert eval_formula(Not(Indep(X, join(X, Y))), BITS).is_true


def test_free_variables_must_exist():
    with pytest.raises(FormulaError):
        eval_formula(Indep(X, Z), BITS)


def test_mode_checked():
    with pytest.raises(ValueError):
        Evaluator("lazy")


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(max_candidates=0)


def test_existential_finds_witness_with_evidence():
    # a nonconstant variable independent of X
    f = exists("U", Indep(U, X) & Not(Indep(U, U)))
    r = eval_formula(f, BITS)
    assert r.is_true and r.evidence is not None and "U" in r.evidence.vars


def test_unif_true_and_false():
    f = parse("unif(X)")
    assert eval_formula(f, uniform_model(X=[0, 1, 2])).is_true
    assert eval_formula(f, FiniteModel(["1/3", "2/3"], {"X": [0, 1]})).is_false


def test_bounded_raises_sound_reports_unknown():
    tiny = Budget(max_candidates=3, use_witness_hints=False)
    f = exists("U", Indep(U, join(X, Y)) & Not(Indep(U, U)) & Not(Indep(U, X)))
    with pytest.raises(BudgetExhausted):
        eval_formula(f, BITS, "bounded", tiny)
    r = eval_formula(f, BITS, "sound", tiny)
    assert r.is_unknown and r.exhausted


def test_sound_mode_never_claims_false_existential():
    f = exists("U", Indep(U, X) & Not(Indep(U, X)))
    assert eval_formula(f, BITS, "sound").is_unknown
    assert eval_formula(f, BITS, "bounded").is_false


def test_oracle_and_expansion_agree_on_lei():
    f = MacroCall("lei", (X, join(X, Y)))
    assert eval_formula(f, BITS).is_true
    assert eval_formula(f, BITS, use_oracles=False).is_true


def test_custom_witness_and_complete_key():
    reg = Registry()
    calls = []

    def ctor(m, new):
        calls.append(1)
        return []

    register_witness_constructor("nothing", ctor, reg, complete=True)
    f = Exists(("U",), Indep(U, X), ("nothing", ()))
    r = eval_formula(f, BITS, "bounded", registry=reg)
    # complete: no generic candidates are tried after the empty list
    assert calls and r.is_false
    reg2 = Registry()
    register_witness_constructor("nothing", ctor, reg2)
    assert eval_formula(f, BITS, "bounded", registry=reg2).is_true


def test_counterexample_pairwise():
    ants = [Indep(X, Y), Indep(X, Z), Indep(Y, Z)]
    m = find_counterexample(ants, Indep(X, join(Y, Z)), names=["X", "Y", "Z"])
    assert m is not None
    assert all(eval_formula(a, m).is_true for a in ants)
    assert eval_formula(Indep(X, join(Y, Z)), m).is_false


def test_counterexample_none_for_valid():
    assert find_counterexample([Indep(X, join(Y, Z))], Indep(X, Y), names=["X", "Y", "Z"]) is None


def test_counterexample_parallel_matches_sequential():
    ants = [Indep(X, Y), Indep(X, Z), Indep(Y, Z)]
    a = find_counterexample(ants, Indep(X, join(Y, Z)), names=["X", "Y", "Z"])
    b = find_counterexample(ants, Indep(X, join(Y, Z)), names=["X", "Y", "Z"], jobs=2)
    assert a == b


def test_random_restarts_are_seeded():
    cons = parse("unif(X)")
    a = find_counterexample([], cons, names=["X"], max_atoms=1, seed=3, restarts=20)
    b = find_counterexample([], cons, names=["X"], max_atoms=1, seed=3, restarts=20)
    assert a == b and a is not None
    assert sum(a.masses) == Fraction(1)
