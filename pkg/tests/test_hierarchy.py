from hypothesis import given

from fotpi.formula import And, Not, Or
from fotpi.hierarchy import HierarchyLevel, classify, exists_level, forall_level, level
from fotpi.normal import to_nnf, to_prenex
from fotpi.parser import parse

from strategies import formulas


def lv(src, h="pi", mode="strict"):
    return str(classify(parse(src), h, mode))


def test_anchor_levels():
    assert lv("lei(X, Y)") == "Pi 1"
    assert lv("joint(Z, X, Y)") == "Pi 2"
    assert lv("ci(X, Y, Z)") == "Sigma 3"
    assert lv("card_eq(X, 2)") == "Pi 2"


def test_card_eq_2_entropy_hierarchy():
    assert lv("card_eq(X, 2)", "H", "strict") == "Pi 1"


def test_atoms_are_level_zero():
    assert classify(parse("indep(X, Y)")).pair == (0, 0)
    assert classify(parse("H(X) - H(X,Y) >= 0"), "H").pair == (0, 0)


def test_block_rules():
    assert exists_level(0, 0) == (1, 2)
    assert forall_level(0, 0) == (2, 1)
    assert exists_level(3, 2) == (3, 4)


def test_sugared_matches_strict_on_small_macros():
    for src in ("lei(X, Y)", "ci(X, Y, Z)", "joint(Z, X, Y)"):
        assert classify(parse(src), "pi", "sugared").pair[0] >= 1


def test_level_str():
    assert str(HierarchyLevel(2, 3)) == "Sigma 2"
    assert str(HierarchyLevel(3, 2)) == "Pi 2"
    assert str(HierarchyLevel(4, 4)) == "Delta 4"


@given(formulas())
def test_negation_swaps(f):
    a, b = level(f).pair, level(Not(f)).pair
    assert b == (a[1], a[0])


@given(formulas(), formulas())
def test_connectives_take_maxima(f, g):
    a, b = level(f).pair, level(g).pair
    want = (max(a[0], b[0]), max(a[1], b[1]))
    assert level(And((f, g))).pair == want
    assert level(Or((f, g))).pair == want


@given(formulas())
def test_nnf_and_prenex_do_not_lower_below_zero(f):
    assert level(to_nnf(f)).pair == level(f).pair
    p = level(to_prenex(f)).pair
    assert min(p) >= min(level(f).pair)
