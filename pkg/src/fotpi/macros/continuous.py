"""Atomless and discrete laws.  On finite models every variable is discrete."""
from ..formula import Not, conj, exists, join
from .registry import REGISTRY as R


@R.define("atomless", ("rv",), doc="Every value of X has probability zero.")
def atomless(ctx, x):
    u = ctx.fresh("U")
    return Not(exists(u, ctx("smi", x, u)))


@R.oracle("atomless")
def atomless_oracle(m, x):
    return False


@R.define("discrete", ("rv",), doc="The law of X has no atomless part.")
def discrete(ctx, x):
    v, w, u = ctx.fresh_many("V", "W", "U")
    vwu = join(v, w, u)
    no_atom = Not(exists(u, conj(ctx("smi", x, u), ctx("smi", vwu, v), ctx("smi", vwu, w))))
    return Not(exists((v, w), conj(ctx("lei", join(v, w), x), ctx("card_eq", v, 2), ctx("card_eq", w, 2),
                                   ctx("card_eq", join(v, w), 3), no_atom)))


@R.oracle("discrete")
def discrete_oracle(m, x):
    return True


