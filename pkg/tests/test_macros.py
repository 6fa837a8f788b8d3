from fractions import Fraction

import pytest

from fotpi.arith import AVar, eq, le
from fotpi.formula import Exists, Forall, Indep, Lambda, MacroCall, Var, free_vars, join
from fotpi.hierarchy import classify
from fotpi.macros import REGISTRY, MacroError
from fotpi.macros.witnesses import nat_pmf, witness_for
from fotpi.model import FiniteModel, check_indep, uniform_model
from fotpi.evaluator import eval_formula

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def _args(d):
    out = []
    kinds = d.kinds_for(len(d.params) - 1 + max(d.min_var, 2)) if d.variadic else d.params
    for i, k in enumerate(kinds):
        if k == "rv":
            out.append(Var(f"V{i}"))
        elif k == "nat":
            out.append(max(d.min_nat.get(i, 0), 2))
        elif k == "formula":
            out.append(Lambda(("Q",), Indep(Var("Q"), Var("V0"))))
        else:
            w, x, y = AVar("w"), AVar("x"), AVar("y")
            out.append(le(x, w) & eq(y, w))
    return out


@pytest.mark.parametrize("name", REGISTRY.names())
def test_every_macro_expands(name):
    d = REGISTRY.get(name)
    args = _args(d)
    for form in ("pi", "H"):
        f = REGISTRY.expand(name, args, form)
        names = {a.name for a in args if isinstance(a, Var)}
        extra = free_vars(f) - names
        assert not extra, extra


@pytest.mark.parametrize("name", REGISTRY.names())
def test_every_macro_classifies(name):
    call = MacroCall(name, tuple(_args(REGISTRY.get(name))))
    lv = classify(call, "H", "sugared")
    assert lv.sigma >= 0 and lv.pi >= 0


def test_argument_checks():
    with pytest.raises(MacroError):
        REGISTRY.expand("lei", (X,))
    with pytest.raises(MacroError):
        REGISTRY.expand("card_le", (X, Y))
    with pytest.raises(MacroError):
        REGISTRY.get("no_such_macro")


def test_expansion_avoids_argument_names():
    f = REGISTRY.expand("unif", (Var("Y"),))
    assert isinstance(f, Exists)
    assert "Y" not in f.vars


def test_lei_is_universal():
    assert isinstance(REGISTRY.expand("lei", (X, Y)), Forall)


def _uni(n):
    return FiniteModel([Fraction(1, n)] * n, {"X": list(range(n))})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_triple_witness(n):
    w = witness_for("triple", ["X"], _uni(n), ["Y", "Z"])
    assert w is not None
    assert check_indep(w, X, Y) and check_indep(w, X, Z) and check_indep(w, Y, Z)
    assert not check_indep(w, X, join(Y, Z))


def test_unif_oracle():
    o = REGISTRY.get("unif").oracle
    assert o(_uni(3), X)
    assert not o(FiniteModel(["1/3", "2/3"], {"X": [0, 1]}), X)


def test_card_oracles():
    m = _uni(3)
    assert REGISTRY.get("card_le").oracle(m, X, 3)
    assert not REGISTRY.get("card_le").oracle(m, X, 2)
    assert REGISTRY.get("card_eq").oracle(m, X, 3)


def test_nat_representation():
    m = FiniteModel([1], {})
    for k in range(5):
        mm = m.adjoin_independent("N", nat_pmf(k))
        assert eval_formula(MacroCall("isnat", (Var("N"),)), mm).is_true


def test_lei_expansion_agrees_with_oracle():
    f = REGISTRY.expand("lei", (X, Y))
    for m in (uniform_model(X=[0, 0, 1, 1], Y=[0, 1, 0, 1]), uniform_model(X=[0, 1], Y=[0, 1])):
        assert eval_formula(f, m, use_oracles=False).is_true == REGISTRY.get("lei").oracle(m, X, Y)
