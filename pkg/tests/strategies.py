from fractions import Fraction

from hypothesis import strategies as st

from fotpi.formula import And, Exists, Forall, Implies, Indep, Not, Or, Var, join
from fotpi.model import FiniteModel

NAMES = ["X", "Y", "Z", "W"]


def terms(names=NAMES):
    one = st.sampled_from(names).map(Var)
    many = st.lists(st.sampled_from(names), min_size=2, max_size=3, unique=True).map(
        lambda ns: join(*[Var(n) for n in ns]))
    return st.one_of(one, many)


def formulas(names=NAMES, depth=3):
    atom = st.builds(Indep, terms(names), terms(names))
    return st.recursive(atom, lambda sub: st.one_of(
        sub.map(Not),
        st.tuples(sub, sub).map(And),
        st.tuples(sub, sub).map(Or),
        st.builds(Implies, sub, sub),
        st.builds(lambda v, b: Exists((v,), b), st.sampled_from(names), sub),
        st.builds(lambda v, b: Forall((v,), b), st.sampled_from(names), sub),
    ), max_leaves=8)


@st.composite
def models(draw, names=("X", "Y", "Z"), max_atoms=6, max_values=3, den=6):
    n = draw(st.integers(1, max_atoms))
    ws = draw(st.lists(st.integers(0, den), min_size=n, max_size=n).filter(any))
    total = sum(ws)
    masses = [Fraction(w, total) for w in ws]
    cols = {v: draw(st.lists(st.integers(0, max_values - 1), min_size=n, max_size=n)) for v in names}
    return FiniteModel(masses, cols)
