import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fotpi.formula import Var, join
from fotpi.model import (EntropySign, FiniteModel, ModelError, check_ci, check_indep, cond_dist_relabel, corpus,
                         entropy_float, entropy_sign, is_function_of, load_model, restricted_growth, uniform_model)

from strategies import models

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def test_masses_must_sum_to_one():
    with pytest.raises(ModelError):
        FiniteModel(["1/2", "1/3"], {"X": [0, 1]})
    with pytest.raises(ModelError):
        FiniteModel(["1/2", "1/2"], {"X": [0]})


def test_json_roundtrip(tmp_path):
    m = FiniteModel(["1/4"] * 4, {"X": [0, 0, 1, 1], "Y": [0, 1, 0, 1]})
    p = tmp_path / "m.json"
    p.write_text(__import__("json").dumps(m.to_dict()))
    assert load_model(p) == m


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\"space\": [\"1/2\"")
    with pytest.raises(ModelError):
        load_model(p)


def test_independent_bits():
    m = uniform_model(X=[0, 0, 1, 1], Y=[0, 1, 0, 1])
    assert check_indep(m, X, Y)
    assert not check_indep(m, X, join(X, Y))
    assert check_ci(m, X, Y, Z) if "Z" in m.vars else True


def test_xor_pairwise_not_joint():
    m = uniform_model(X=[0, 0, 1, 1], Y=[0, 1, 0, 1], Z=[0, 1, 1, 0])
    assert check_indep(m, X, Y) and check_indep(m, X, Z) and check_indep(m, Y, Z)
    assert not check_indep(m, X, join(Y, Z))
    assert not check_ci(m, X, Y, Z)
    assert is_function_of(m, Z, join(X, Y))


def test_entropy_sign_exact_cases():
    m = FiniteModel([Fraction(1, 8)] * 8, {"X": [0, 1, 2, 3] * 2, "Y": [0] * 4 + [1] * 4})
    assert entropy_sign(m, {("X",): 1, ("Y",): -2}) is EntropySign.ZERO
    assert entropy_sign(m, {("X",): 1, ("Y",): -1}) is EntropySign.POSITIVE
    b = FiniteModel([Fraction(1, 6)] * 6, {"X": [0, 0, 1, 1, 1, 1], "Y": [0, 1] * 3})
    assert entropy_sign(b, {("X",): 1, ("Y",): -1}) is EntropySign.NEGATIVE


def test_refine_and_project():
    m = FiniteModel(["1/3", "2/3"], {"X": [0, 1]})
    r = m.refine(3)
    assert r.size == 6 and r.project(["X"]) == m


def test_adjoin_kernel_keeps_marginal():
    m = FiniteModel(["1/3", "2/3"], {"X": [0, 1]})
    e = m.adjoin("Y", [{0: "1/2", 1: "1/2"}, {0: 1}])
    assert e.pmf(X) == m.pmf(X)
    with pytest.raises(ModelError):
        m.adjoin("Y", [{0: "1/2"}, {0: 1}])


def test_cond_dist_relabel():
    m = uniform_model(X=[0, 0, 1, 1], Y=[0, 1, 1, 0], Z=[5, 5, 6, 6], W=[1, 0, 0, 1])
    assert cond_dist_relabel(m, (Y, (X,)), (Var("W"), (Z,)))


def test_corpus_sizes():
    assert len(corpus(["X"], 4, 3)) == 10
    assert len(corpus(["X", "Y"], 4, 3)) == 39
    assert len(corpus(["X", "Y", "Z"], 4, 4)) == 331


def test_restricted_growth_count():
    # Bell number B(4) = 15
    assert len(list(restricted_growth(4))) == 15


@given(models())
def test_entropy_sign_matches_float(m):
    terms = {("X", "Z"): 1, ("Y", "Z"): 1, ("X", "Y", "Z"): -1, ("Z",): -1}
    val = (entropy_float(m, ("X", "Z")) + entropy_float(m, ("Y", "Z")) - entropy_float(m, ("X", "Y", "Z"))
           - entropy_float(m, ("Z",)))
    s = entropy_sign(m, terms)
    assert s is not EntropySign.NEGATIVE
    if abs(val) > 1e-9:
        assert s is EntropySign.POSITIVE


@given(models())
def test_indep_iff_zero_mutual_information(m):
    mi = {("X",): 1, ("Y",): 1, ("X", "Y"): -1}
    assert check_indep(m, X, Y) == (entropy_sign(m, mi) is EntropySign.ZERO)


@given(models(), st.integers(1, 3))
def test_refinement_preserves_laws(m, k):
    r = m.refine(k)
    for t in (X, join(X, Y)):
        assert r.pmf(t) == m.pmf(t)
    assert math.isclose(entropy_float(r, ("X", "Y")), entropy_float(m, ("X", "Y")))


@given(models())
def test_compress_is_idempotent(m):
    c = m.compress()
    assert c.compress() == c
    assert c.pmf(join(X, Y, Z)) == m.pmf(join(X, Y, Z))
