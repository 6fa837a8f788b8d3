from itertools import product

import pytest
from hypothesis import given, strategies as st

from fotpi.arith import (AConst, ArithError, AVar, a_exists, arith_eval, cantor_pair, cantor_unpair, codes_below,
                         dec_oracle, decn_pred, dec_pred, eq, godel_beta, godel_decode, godel_encode, lt, to_text)
from fotpi.evaluator import eval_formula
from fotpi.formula import Var
from fotpi.macros import compile_arith
from fotpi.macros.witnesses import nat_pmf
from fotpi.model import FiniteModel

a, b, c = AVar("a"), AVar("b"), AVar("c")


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_pairing_roundtrip(x, y):
    assert cantor_unpair(cantor_pair(x, y)) == (x, y)


@given(st.lists(st.integers(0, 7), max_size=4))
def test_encode_decode(seq):
    r = godel_encode(seq)
    assert godel_decode(r) == tuple(seq)
    assert codes_below(seq, r) == []


def test_small_codes():
    assert godel_decode(0) == ()
    assert godel_encode(()) == 0
    assert godel_beta(5, 1, 0) == 5 % 2


def test_encode_rejects_negative():
    with pytest.raises(ArithError):
        godel_encode((1, -1))


def test_dec_only_on_least_codes():
    # some code other than the least one decodes to (1,)
    r = godel_encode((1,))
    other = next(q for q in range(r + 1, r + 5000) if godel_decode(q) == (1,))
    assert dec_oracle(r, 1, 1) and not dec_oracle(other, 1, 1)
    assert arith_eval(decn_pred(), {"r": other, "i": 1, "a": 1})
    assert not arith_eval(dec_pred(), {"r": other, "i": 1, "a": 1})


def test_arith_eval_quantifier():
    p = a_exists("x", eq(AVar("x") + AVar("x"), a))
    assert arith_eval(p, {"a": 4}) and not arith_eval(p, {"a": 3})
    assert "exists" in to_text(p)


def _nat_model(**vals):
    m = FiniteModel([1], {})
    for name, k in vals.items():
        m = m.adjoin_independent(name, nat_pmf(k))
    return m


@pytest.mark.parametrize("x,y,z", [t for t in product(range(4), repeat=3)])
def test_compiled_addition(x, y, z):
    f = compile_arith(eq(a + b, c), {"a": Var("A"), "b": Var("B"), "c": Var("C")})
    assert eval_formula(f, _nat_model(A=x, B=y, C=z)).is_true == (x + y == z)


def test_compiled_order_and_constants():
    f = compile_arith(lt(a, AConst(2)), {"a": Var("A")})
    assert [eval_formula(f, _nat_model(A=k)).is_true for k in range(4)] == [True, True, False, False]


def test_compiled_rejects_non_naturals():
    f = compile_arith(eq(a, a), {"a": Var("A")})
    m = FiniteModel(["1/4", "3/4"], {"A": [0, 1]})
    assert eval_formula(f, m).is_false


def test_compile_errors():
    from fotpi.formula import FormulaError
    with pytest.raises(FormulaError):
        compile_arith(eq(a, b), {"a": Var("A")})
