"""Uniformity, cardinality and integer arithmetic on uniform variables.

A positive integer k is represented by any variable uniform over k values;
zero is represented by a Bern(1/3) variable.
"""
from ..formula import TRUE, And, Implies, Indep, Not, Or, conj, disj, empty, exists, forall, join
from .. import model as M
from .. import semantics as S
from .core import nonempty
from .registry import REGISTRY as R


@R.define("triple", ("rv", "rv", "rv"))
def triple(ctx, x, y, z):
    return conj(ctx("lei", x, join(y, z)), ctx("lei", y, join(x, z)), ctx("lei", z, join(x, y)),
                Indep(x, y), Indep(x, z), Indep(y, z))


@R.oracle("triple")
def triple_oracle(m, x, y, z):
    return (M.is_function_of(m, x, S.names_of(y, z)) and M.is_function_of(m, y, S.names_of(x, z))
            and M.is_function_of(m, z, S.names_of(x, y)) and M.check_indep(m, x, y)
            and M.check_indep(m, x, z) and M.check_indep(m, y, z))


@R.define("unif", ("rv",), doc="X is uniform over its support.")
def unif(ctx, x):
    y, z = ctx.fresh_many("Y", "Z")
    return exists((y, z), ctx("triple", x, y, z), hint=("triple", (x,)))


@R.oracle("unif")
def unif_oracle(m, x):
    return S.is_unif(m, x)


@R.define("card_le", ("rv", "nat"), min_nat={1: 1}, doc="X takes at most n values.")
def card_le(ctx, x, n):
    if n == 1:
        return empty(x)
    u = ctx.fresh("U")
    return forall(u, Implies(ctx("lt_iota", u, x), ctx("card_le", u, n - 1)))


@R.oracle("card_le")
def card_le_oracle(m, x, n):
    return S.card(m, x) <= n


@R.define("card_eq", ("rv", "nat"), min_nat={1: 1})
def card_eq(ctx, x, n):
    if n == 1:
        return ctx("card_le", x, 1)
    return And((ctx("card_le", x, n), Not(ctx("card_le", x, n - 1))))


@R.oracle("card_eq")
def card_eq_oracle(m, x, n):
    return S.card(m, x) == n


@R.define("card_ge", ("rv", "nat"), min_nat={1: 1})
def card_ge(ctx, x, n):
    if n == 1:
        return TRUE
    return Not(ctx("card_le", x, n - 1))


@R.oracle("card_ge")
def card_ge_oracle(m, x, n):
    return S.card(m, x) >= n


@R.define("ueq", ("rv", "rv"), doc="X and Y are uniform with equally many values.")
def ueq(ctx, x, y):
    u1, u2, u3 = ctx.fresh_many("U", "U", "U")
    return exists((u1, u2, u3), And((ctx("triple", x, u1, u2), ctx("triple", y, u1, u3))), hint=("ueq", (x, y)))


@R.oracle("ueq")
def ueq_oracle(m, x, y):
    return S.is_unif(m, x) and S.is_unif(m, y) and S.card(m, x) == S.card(m, y)


@R.define("ueq_n", ("rv", "nat"), min_nat={1: 1})
def ueq_n(ctx, x, n):
    return And((ctx("unif", x), ctx("card_eq", x, n)))


@R.oracle("ueq_n")
def ueq_n_oracle(m, x, n):
    return S.is_unif(m, x) and S.card(m, x) == n


@R.define("uprod", ("rv", "rv", "rv"), doc="|Z| = |X||Y| for uniform X, Y, Z.")
def uprod(ctx, x, y, z):
    xt, yt = ctx.fresh_many("X", "Y")
    body = conj(ctx("ueq", x, xt), ctx("ueq", y, yt), Indep(xt, yt), ctx("eq_iota", join(xt, yt), z))
    return exists((xt, yt), body, hint=("uprod", (x, y, z)))


@R.oracle("uprod")
def uprod_oracle(m, x, y, z):
    return (S.is_unif(m, x) and S.is_unif(m, y) and S.is_unif(m, z)
            and S.card(m, z) == S.card(m, x) * S.card(m, y))


@R.define("ule", ("rv", "rv"), doc="|X| <= |Y| for uniform X, Y.")
def ule(ctx, x, y):
    g, yt = ctx.fresh_many("G", "Y")
    body = conj(ctx("uprod", x, y, g), ctx("ueq", y, yt), ctx("lei", g, join(y, yt)))
    return exists((g, yt), body, hint=("ule", (x, y)))


def _ule(m, x, y):
    return S.is_unif(m, x) and S.is_unif(m, y) and S.card(m, x) <= S.card(m, y)


@R.oracle("ule")
def ule_oracle(m, x, y):
    return _ule(m, x, y)


@R.define("ult", ("rv", "rv"))
def ult(ctx, x, y):
    return Not(ctx("ule", y, x))


@R.oracle("ult")
def ult_oracle(m, x, y):
    return not _ule(m, y, x)


@R.define("uge", ("rv", "rv"))
def uge(ctx, x, y):
    return ctx("ule", y, x)


@R.oracle("uge")
def uge_oracle(m, x, y):
    return _ule(m, y, x)


@R.define("ugt", ("rv", "rv"))
def ugt(ctx, x, y):
    return ctx("ult", y, x)


@R.oracle("ugt")
def ugt_oracle(m, x, y):
    return not _ule(m, x, y)


def _against_const(rel):
    def build(ctx, x, n):
        u = ctx.fresh("U")
        return exists(u, And((ctx("ueq_n", u, n), ctx(rel, x, u))), hint=("unif_n", (n,)))
    return build


for _rel in ("ule", "ult", "uge", "ugt"):
    R.define(_rel + "_n", ("rv", "nat"), min_nat={1: 1})(_against_const(_rel))


@R.oracle("ule_n")
def ule_n_oracle(m, x, n):
    return S.is_unif(m, x) and S.card(m, x) <= n


@R.oracle("ult_n")
def ult_n_oracle(m, x, n):
    return not (S.is_unif(m, x) and S.card(m, x) >= n)


@R.oracle("uge_n")
def uge_n_oracle(m, x, n):
    return S.is_unif(m, x) and S.card(m, x) >= n


@R.oracle("ugt_n")
def ugt_n_oracle(m, x, n):
    return not (S.is_unif(m, x) and S.card(m, x) <= n)


@R.define("udiv", ("rv", "rv"), doc="|X| divides |Y| for uniform X, Y.")
def udiv(ctx, x, y):
    u = ctx.fresh("U")
    return exists(u, ctx("uprod", x, u, y), hint=("udiv", (x, y)))


@R.oracle("udiv")
def udiv_oracle(m, x, y):
    return S.is_unif(m, x) and S.is_unif(m, y) and S.card(m, y) % S.card(m, x) == 0


@R.define("uprime", ("rv",), doc="No factorisation of |X| into two factors >= 2 (true for non-uniform X).")
def uprime(ctx, x):
    u, v = ctx.fresh_many("U", "V")
    return Not(exists((u, v), conj(nonempty(u), nonempty(v), ctx("uprod", u, v, x)), hint=("factor", (x,))))


@R.oracle("uprime")
def uprime_oracle(m, x):
    if not S.is_unif(m, x):
        return True
    k = S.card(m, x)
    return not any(k % d == 0 for d in range(2, k) if d * d <= k)


@R.define("usucc", ("rv", "rv"), doc="|Y| = |X| + 1 for uniform X, Y.")
def usucc(ctx, x, y):
    u = ctx.fresh("U")
    return And((ctx("ult", x, y), forall(u, Implies(And((ctx("unif", u), ctx("ult", x, u))), ctx("ule", y, u)))))


@R.oracle("usucc")
def usucc_oracle(m, x, y):
    return S.is_unif(m, x) and S.is_unif(m, y) and S.card(m, y) == S.card(m, x) + 1


@R.define("smi", ("rv", "rv"), doc="Y is the indicator of one positive-mass value of X.")
def smi(ctx, x, y):
    u, v = ctx.fresh_many("U", "V")
    both_empty = And((ctx("eq_iota", x, y), empty(y)))
    no_split = Not(exists(v, And((ctx("card_le", v, 2), ctx("lei", u, join(y, v))))))
    rest = conj(ctx("lei", y, x), ctx("card_eq", y, 2),
                forall(u, Implies(And((ctx("lei", u, x), ctx("card_eq", u, 4))), no_split)))
    return Or((both_empty, rest))


@R.oracle("smi")
def smi_oracle(m, x, y):
    return S.smi(m, x, y)


@R.define("frac", ("rv", "rv", "rv", "rv"), doc="|Z| = |X| + |Y| and U ~ Bern(|X|/(|X|+|Y|)).")
def frac(ctx, x, y, z, u):
    xt, yt, v = ctx.fresh_many("X", "Y", "V")
    equal = conj(ctx("ueq_n", u, 2), ctx("uprod", x, u, z), ctx("uprod", y, u, z))
    split = conj(ctx("ueq", x, xt), ctx("ueq", y, yt), ctx("unif", z),
                 ctx("card_eq", u, 2), Not(ctx("unif", u)),
                 ctx("lei", u, z), ctx("mutual_indep", xt, yt, u), ctx("lei", z, join(xt, yt, u)),
                 forall(v, Implies(ctx("smi", z, v), Or((ctx("smi", join(xt, u), v), ctx("smi", join(yt, u), v))))))
    return Or((equal, exists((xt, yt), split, hint=("frac", (x, y, z, u)))))


@R.oracle("frac")
def frac_oracle(m, x, y, z, u):
    if not (S.is_unif(m, x) and S.is_unif(m, y) and S.is_unif(m, z)):
        return False
    a, b, c = S.card(m, x), S.card(m, y), S.card(m, z)
    if c != a + b:
        return False
    if a == b:
        return S.is_unif(m, u) and S.card(m, u) == 2
    return S.card(m, u) == 2 and M.is_function_of(m, u, z) and S.min_mass(m, u) * (a + b) == min(a, b)


@R.define("usum", ("rv", "rv", "rv"), doc="|Z| = |X| + |Y| for uniform X, Y, Z.")
def usum(ctx, x, y, z):
    u = ctx.fresh("U")
    return exists(u, ctx("frac", x, y, z, u), hint=("usum", (x, y, z)))


@R.oracle("usum")
def usum_oracle(m, x, y, z):
    return (S.is_unif(m, x) and S.is_unif(m, y) and S.is_unif(m, z)
            and S.card(m, z) == S.card(m, x) + S.card(m, y))


@R.define("is0", ("rv",), doc="X ~ Bern(1/3) up to relabelling (the representation of zero).")
def is0(ctx, x):
    u = ctx.fresh("U")
    return exists(u, conj(ctx("ueq_n", u, 3), nonempty(x), ctx("lt_iota", x, u)), hint=("is0", (x,)))


@R.oracle("is0")
def is0_oracle(m, x):
    return S.nat_value(m, x) == 0


@R.define("isnat", ("rv",), doc="X represents a natural number.")
def isnat(ctx, x):
    return Or((ctx("is0", x), ctx("unif", x)))


@R.oracle("isnat")
def isnat_oracle(m, x):
    return S.nat_value(m, x) is not None


# -- arithmetic on representations (zero included) ------------------------


@R.define("n_const", ("rv", "nat"), doc="X represents the constant k.")
def n_const(ctx, x, k):
    return ctx("is0", x) if k == 0 else ctx("ueq_n", x, k)


@R.oracle("n_const")
def n_const_oracle(m, x, k):
    return S.nat_value(m, x) == k


@R.define("n_eq", ("rv", "rv"))
def n_eq(ctx, a, b):
    return Or((And((ctx("is0", a), ctx("is0", b))), ctx("ueq", a, b)))


@R.define("n_lt", ("rv", "rv"))
def n_lt(ctx, a, b):
    return Or((And((ctx("is0", a), ctx("unif", b))), conj(ctx("unif", a), ctx("unif", b), ctx("ult", a, b))))


@R.define("n_le", ("rv", "rv"))
def n_le(ctx, a, b):
    return Or((ctx("n_lt", a, b), ctx("n_eq", a, b)))


@R.define("n_add", ("rv", "rv", "rv"), doc="c = a + b on representations.")
def n_add(ctx, a, b, c):
    return disj(And((ctx("is0", a), ctx("n_eq", b, c))),
                conj(ctx("is0", b), ctx("unif", a), ctx("ueq", a, c)),
                ctx("usum", a, b, c))


@R.define("n_mul", ("rv", "rv", "rv"), doc="c = a * b on representations.")
def n_mul(ctx, a, b, c):
    zero = conj(Or((ctx("is0", a), ctx("is0", b))), ctx("isnat", a), ctx("isnat", b), ctx("is0", c))
    return Or((zero, ctx("uprod", a, b, c)))


def _nat_rel(fn):
    def oracle(m, *args):
        vals = [S.nat_value(m, a) for a in args]
        return None not in vals and fn(*vals)
    return oracle


R.oracle("n_eq")(_nat_rel(lambda a, b: a == b))
R.oracle("n_lt")(_nat_rel(lambda a, b: a < b))
R.oracle("n_le")(_nat_rel(lambda a, b: a <= b))
R.oracle("n_add")(_nat_rel(lambda a, b, c: a + b == c))
R.oracle("n_mul")(_nat_rel(lambda a, b, c: a * b == c))
