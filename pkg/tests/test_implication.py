import pytest
from hypothesis import given, settings, strategies as st

from fotpi.implication import (ImplicationError, all_statements, closure, decide_indep_implication, instances,
                               statement)
from fotpi.model import check_indep, corpus


def test_statement_normalisation():
    assert statement([1], [0]) == statement([0], [1])
    with pytest.raises(ImplicationError):
        statement([0], [0, 1])
    with pytest.raises(ImplicationError):
        statement([], [1])


def test_statement_counts():
    # unordered pairs of disjoint nonempty subsets: (3^n - 2^(n+1) + 1) / 2
    for n in range(1, 6):
        assert len(all_statements(n)) == (3 ** n - 2 ** (n + 1) + 1) // 2


def test_mixing_rule():
    assert decide_indep_implication([statement([0], [1]), statement([0, 1], [2])], statement([0], [1, 2]))
    assert decide_indep_implication([statement([0], [1]), statement([0, 1], [2])], statement([1], [0, 2]))


def test_pairwise_does_not_give_joint():
    ants = [statement([0], [1]), statement([0], [2]), statement([1], [2])]
    assert not decide_indep_implication(ants, statement([0], [1, 2]))


def test_closure_is_closed_and_contains_input():
    ants = [statement([0], [1, 2]), statement([1], [2])]
    c = closure(ants, 3)
    assert {a.masks() for a in ants} <= c
    assert closure([statement(*_sides(a, b)) for a, b in c], 3) == c


def test_cap():
    with pytest.raises(ImplicationError):
        decide_indep_implication([statement([0], [9])], statement([0], [9]))
    with pytest.raises(ImplicationError):
        decide_indep_implication([statement([0], [3])], statement([0], [1]), n=2)


def _sides(a, b):
    return [i for i in range(8) if a >> i & 1], [i for i in range(8) if b >> i & 1]


_MODELS = corpus(["A", "B", "C"], 4, 3)


def _holds(m, s):
    from fotpi.formula import Var, join
    names = "ABC"
    return check_indep(m, join(*[Var(names[i]) for i in sorted(s.left)]),
                       join(*[Var(names[i]) for i in sorted(s.right)]))


@settings(max_examples=40)
@given(st.data())
def test_closure_sound_on_corpus(data):
    stmts = [statement(*_sides(a, b)) for a, b in all_statements(3)]
    ants = data.draw(st.lists(st.sampled_from(stmts), max_size=3))
    cons = data.draw(st.sampled_from(stmts))
    if decide_indep_implication(ants, cons, n=3):
        for m in _MODELS:
            if all(_holds(m, a) for a in ants):
                assert _holds(m, cons)


def test_two_variable_instances_complete():
    # every non-implied instance over two variables has a corpus counterexample
    for ants, cons in instances(2, 2):
        if decide_indep_implication(ants, cons, n=2):
            continue
        assert any(all(_holds(m, a) for a in ants) and not _holds(m, cons) for m in _MODELS)


def test_instance_count():
    assert sum(1 for _ in instances(2, 1)) == 2 * 1
