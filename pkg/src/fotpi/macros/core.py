"""Functional dependence, joins, mutual and conditional independence."""
from ..formula import And, Implies, Indep, Not, conj, empty, entropy, exists, forall, join
from .. import model as M
from .. import semantics as S
from .registry import REGISTRY as R


@R.define("lei", ("rv", "rv"), doc="X is almost surely a function of Y.")
def lei(ctx, x, y):
    u = ctx.fresh("U")
    return forall(u, Implies(Indep(u, y), Indep(u, x)), hint=("lei_refute", (x, y)))


@R.hform("lei")
def lei_h(ctx, x, y):
    return entropy(((y, 1), (join(x, y), -1)), ">=")


@R.oracle("lei")
def lei_oracle(m, x, y):
    return M.is_function_of(m, x, y)


@R.define("eq_iota", ("rv", "rv"), doc="X and Y are informationally equivalent.")
def eq_iota(ctx, x, y):
    return And((ctx("lei", x, y), ctx("lei", y, x)))


@R.oracle("eq_iota")
def eq_iota_oracle(m, x, y):
    return M.relabel_equal(m, x, y)


@R.define("neq_iota", ("rv", "rv"))
def neq_iota(ctx, x, y):
    return Not(ctx("eq_iota", x, y))


@R.oracle("neq_iota")
def neq_iota_oracle(m, x, y):
    return not M.relabel_equal(m, x, y)


@R.define("lt_iota", ("rv", "rv"), doc="X is a function of Y but not conversely.")
def lt_iota(ctx, x, y):
    return And((ctx("lei", x, y), Not(ctx("lei", y, x))))


@R.oracle("lt_iota")
def lt_iota_oracle(m, x, y):
    return S.lt_iota(m, x, y)


@R.define("joint", ("rv", "rv*"), min_var=2, doc="Z is informationally the joint variable of the rest.")
def joint(ctx, z, *xs):
    u = ctx.fresh("U")
    below_z = [ctx("lei", x, z) for x in xs]
    below_u = conj(*[ctx("lei", x, u) for x in xs])
    return conj(*below_z, forall(u, Implies(below_u, ctx("lei", z, u))))


@R.hform("joint")
def joint_h(ctx, z, *xs):
    xs_j = join(*xs)
    all_j = join(z, *xs)
    return And((entropy(((z, 1), (all_j, -1)), "="), entropy(((xs_j, 1), (all_j, -1)), "=")))


@R.oracle("joint")
def joint_oracle(m, z, *xs):
    return M.relabel_equal(m, z, S.names_of(*xs))


@R.define("mutual_indep", ("rv*",), min_var=2)
def mutual_indep(ctx, *xs):
    return conj(*[Indep(xs[i], join(*xs[:i])) for i in range(1, len(xs))])


@R.hform("mutual_indep")
def mutual_indep_h(ctx, *xs):
    terms = [(x, 1) for x in xs] + [(join(*xs), -1)]
    return entropy(terms, "=")


@R.oracle("mutual_indep")
def mutual_indep_oracle(m, *xs):
    return S.mutually_indep(m, xs)


@R.define("ci", ("rv", "rv", "rv"), doc="X and Y are conditionally independent given Z.")
def ci(ctx, x, y, z):
    u = ctx.fresh("U")
    return exists(u, And((Indep(u, join(x, z)), ctx("lei", y, join(z, u)))), hint=("ci", (x, y, z)))


@R.hform("ci")
def ci_h(ctx, x, y, z):
    return entropy(((join(x, z), 1), (join(y, z), 1), (join(x, y, z), -1), (z, -1)), "=")


@R.oracle("ci")
def ci_oracle(m, x, y, z):
    return M.check_ci(m, x, y, z)


@R.define("is_empty", ("rv",), doc="X is almost surely constant.")
def is_empty(ctx, x):
    return empty(x)


@R.oracle("is_empty")
def is_empty_oracle(m, x):
    return S.is_const(m, x)


def nonempty(x):
    return Not(empty(x))

