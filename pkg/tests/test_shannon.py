from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fotpi.formula import EntropyLinear
from fotpi.parser import parse
from fotpi.shannon import (ShannonError, ShannonProblem, Status, elemental_inequalities, prove_shannon,
                           verify_certificate, verify_ray, zhang_yeung)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 9), (4, 28), (5, 85)])
def test_elemental_count(n, count):
    assert len(elemental_inequalities(n)) == count


def test_monotonicity_and_submodularity():
    for src in ("H(X, Y) - H(X) >= 0", "H(X) + H(Y) - H(X, Y) >= 0",
                "H(X, Z) + H(Y, Z) - H(X, Y, Z) - H(Z) >= 0"):
        v = prove_shannon(parse(src))
        assert v.status is Status.PROVABLE
        assert all(c > 0 for c in v.certificate.values())


def test_constraint_multiplier_used():
    # X function of Y: H(X,Y) = H(Y) gives H(X) <= H(Y)
    v = prove_shannon(parse("H(Y) - H(X) >= 0"), [parse("H(X, Y) - H(Y) = 0")])
    assert v.provable and v.constraint_multipliers


def test_not_provable_has_ray():
    p = ShannonProblem(parse("H(X) - H(X, Y) >= 0"))
    v = prove_shannon(p)
    assert not v.provable and verify_ray(p, v)


def test_zhang_yeung():
    p = ShannonProblem(zhang_yeung())
    v = prove_shannon(p)
    assert v.status is Status.NOT_PROVABLE and verify_ray(p, v)
    d = v.to_dict()
    assert d["status"] == "NotProvable" and "dual_ray" in d


def test_tampered_certificate_rejected():
    p = ShannonProblem(parse("H(X) + H(Y) - H(X, Y) >= 0"))
    v = prove_shannon(p)
    k = next(iter(v.certificate))
    v.certificate[k] += 1
    assert not verify_certificate(p, v)


def test_errors():
    with pytest.raises(ShannonError):
        ShannonProblem(parse("H(X) = 0"))
    with pytest.raises(ShannonError):
        ShannonProblem(parse("H(X) >= 0"), names=("A", "B", "C", "D", "E", "F", "G"))
    with pytest.raises(ShannonError):
        prove_shannon(parse("H(X) >= 0"), names=("Y",))


@given(st.lists(st.integers(0, 3), min_size=9, max_size=9))
def test_nonnegative_combinations_are_provable(ws):
    names = ("A", "B", "C")
    goal = {}
    for w, (_, vec) in zip(ws, elemental_inequalities(3)):
        for mk, c in vec.items():
            key = tuple(names[i] for i in range(3) if mk >> i & 1)
            goal[key] = goal.get(key, 0) + w * c
    goal = {k: v for k, v in goal.items() if v}
    if not goal:
        return
    p = ShannonProblem(EntropyLinear(goal, ">="), names=names)
    v = prove_shannon(p)
    assert v.provable and verify_certificate(p, v)


@given(st.dictionaries(st.sampled_from([("A",), ("B",), ("A", "B")]), st.integers(-3, 3), min_size=1))
def test_verdict_always_checkable(goal):
    goal = {k: Fraction(v) for k, v in goal.items() if v}
    if not goal:
        return
    p = ShannonProblem(EntropyLinear(goal, ">="), names=("A", "B"))
    v = prove_shannon(p)
    assert verify_certificate(p, v) if v.provable else verify_ray(p, v)
