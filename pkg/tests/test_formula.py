import pytest
from hypothesis import given

from fotpi.formula import (And, Exists, Forall, FormulaError, Implies, Indep, MacroCall, NameSupply, Not, Var,
                           free_vars, join, rename_bound_apart, substitute)
from fotpi.parser import ParseError, parse, to_text

from strategies import formulas


def test_parse_lei_shape():
    f = parse("forall U. (indep(U,Y) -> indep(U,X))")
    assert f == Forall(("U",), Implies(Indep(Var("U"), Var("Y")), Indep(Var("U"), Var("X"))))


def test_indep_is_symmetric():
    assert parse("indep(X, Y)") == parse("indep(Y, X)")


def test_join_flattens_and_sorts():
    assert join(Var("Y"), join(Var("X"), Var("Z"))).names() == ("X", "Y", "Z")
    assert join(Var("X"), Var("X")) == Var("X")


def test_entropy_linear_syntax():
    f = parse("2*H(X,Y) - H(X) - H(Y) >= 0")
    assert dict(f.terms) == {("X", "Y"): 2, ("X",): -1, ("Y",): -1}
    assert parse("1/2*H(X) = 0").cmp == "="


def test_macro_call_and_arity():
    assert parse("ci(X, Y, Z)") == MacroCall("ci", (Var("X"), Var("Y"), Var("Z")))
    with pytest.raises(Exception):
        parse("ci(X, Y)")
    with pytest.raises(Exception):
        parse("nosuchmacro(X)")


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse("indep(X,\n  Y")
    assert e.value.line == 2


def test_free_vars():
    f = parse("exists U. (indep(U, join(X, Y)) and indep(U, Z))")
    assert free_vars(f) == {"X", "Y", "Z"}


def test_substitution_avoids_capture():
    f = parse("exists U. indep(U, X)")
    g = substitute(f, {"X": Var("U")})
    assert free_vars(g) == {"U"}
    assert isinstance(g, Exists) and g.vars != ("U",)


def test_rename_bound_apart_makes_binders_unique():
    f = And((parse("exists U. indep(U, X)"), parse("exists U. indep(U, Y)")))
    g = rename_bound_apart(f)
    assert g.args[0].vars != g.args[1].vars
    assert free_vars(g) == free_vars(f)


def test_name_supply_is_deterministic():
    a, b = NameSupply({"U_1"}), NameSupply({"U_1"})
    assert [a.fresh() for _ in range(3)] == [b.fresh() for _ in range(3)]
    assert "U_1" not in [NameSupply({"U_1"}).fresh() for _ in range(2)]


def test_bad_comparison():
    from fotpi.formula import EntropyLinear
    with pytest.raises(FormulaError):
        EntropyLinear({("X",): 1}, "<")


@given(formulas())
def test_print_parse_roundtrip(f):
    assert parse(to_text(f)) == f


@given(formulas())
def test_double_negation_free_vars(f):
    assert free_vars(Not(Not(f))) == free_vars(f)


@given(formulas())
def test_rename_apart_preserves_free_vars(f):
    assert free_vars(rename_bound_apart(f)) == free_vars(f)
