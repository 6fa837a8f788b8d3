"""Bernoulli parameters, labels, divided masses and distribution comparison."""
from ..formula import (And, CondDistRel, Iff, Implies, Indep, Not, Or, conj, entropy, exists, forall,
                       join)
from .. import model as M
from .. import semantics as S
from .registry import REGISTRY as R, MacroError


def _ratio(m, x, y):
    a, b = S.card(m, x), S.card(m, y)
    return min(a, b), a + b


@R.define("qeq", ("rv", "rv", "rv"), doc="X, Y uniform and B ~ Bern(|X|/(|X|+|Y|)) up to relabelling.")
def qeq(ctx, x, y, b):
    z = ctx.fresh("Z")
    return exists(z, ctx("frac", x, y, z, b), hint=("qeq", (x, y, b)))


@R.oracle("qeq")
def qeq_oracle(m, x, y, b):
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, b) != 2:
        return False
    lo, tot = _ratio(m, x, y)
    return S.min_mass(m, b) * tot == lo


@R.define("qlt", ("rv", "rv", "rv"), doc="B ~ Bern(t) with |X|/(|X|+|Y|) < t <= 1/2.")
def qlt(ctx, x, y, b):
    c, d = ctx.fresh_many("C", "D")
    bcd = join(b, c, d)
    inner = conj(ctx("qeq", x, y, c), ctx("ueq_n", d, 2), ctx("smi", bcd, c), ctx("smi", bcd, d),
                 Not(ctx("smi", bcd, b)))
    return Or((ctx("ueq_n", b, 2), And((ctx("card_eq", b, 2), exists((c, d), inner, hint=("qlt", (x, y, b)))))))


def _qlt(m, x, y, b):
    if S.card(m, b) == 2 and S.is_unif(m, b):
        return True
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, b) != 2:
        return False
    lo, tot = _ratio(m, x, y)
    return S.min_mass(m, b) * tot > lo


@R.oracle("qlt")
def qlt_oracle(m, x, y, b):
    return _qlt(m, x, y, b)


@R.define("qle", ("rv", "rv", "rv"))
def qle(ctx, x, y, b):
    return Or((ctx("qlt", x, y, b), ctx("qeq", x, y, b)))


@R.oracle("qle")
def qle_oracle(m, x, y, b):
    return _qlt(m, x, y, b) or qeq_oracle(m, x, y, b)


@R.define("ble", ("rv", "rv"), doc="Bernoulli parameters (in [0, 1/2]) compare as t_B <= t_C.")
def ble(ctx, b, c):
    x, y = ctx.fresh_many("X", "Y")
    return conj(ctx("card_le", b, 2), ctx("card_le", c, 2),
                forall((x, y), Implies(And((ctx("ult", x, y), ctx("qlt", x, y, b))), ctx("qlt", x, y, c))))


@R.hform("ble")
def ble_h(ctx, b, c):
    return conj(ctx("card_le", b, 2), ctx("card_le", c, 2), entropy(((c, 1), (b, -1)), ">="))


def _ble(m, b, c):
    return S.card(m, b) <= 2 and S.card(m, c) <= 2 and S.min_mass(m, b) <= S.min_mass(m, c)


@R.oracle("ble")
def ble_oracle(m, b, c):
    return _ble(m, b, c)


@R.define("blt", ("rv", "rv"))
def blt(ctx, b, c):
    return Not(ctx("ble", c, b))


@R.oracle("blt")
def blt_oracle(m, b, c):
    return not _ble(m, c, b)


@R.define("beq", ("rv", "rv"))
def beq(ctx, b, c):
    return And((ctx("ble", b, c), ctx("ble", c, b)))


@R.oracle("beq")
def beq_oracle(m, b, c):
    return _ble(m, b, c) and _ble(m, c, b)


# -- labels -----------------------------------------------------------------


def _smis_tail(m, x, y, b, c):
    if M.relabel_equal(m, b, c):
        return True
    xc, bcol, ccol = m.column(x), m.column(b), m.column(c)
    seen = {}
    for xv, bv, cv, w in zip(xc, bcol, ccol, m.weights):
        if w:
            seen.setdefault(xv, set()).add((bv, cv))
    return any(len(s) >= 3 for s in seen.values())


@R.define("smis", ("rv", "rv", "rv", "rv"), doc="B, C single-mass indicators of Y on the same value of X.")
def smis(ctx, x, y, b, c):
    u = ctx.fresh("U")
    split = exists(u, And((ctx("card_le", u, 2), ctx("lei", join(b, c), join(x, u)))), hint=("smis", (x, b, c)))
    return conj(ctx("lei", x, y), ctx("smi", y, b), ctx("smi", y, c), Or((ctx("eq_iota", b, c), Not(split))))


def _smis(m, x, y, b, c):
    return (M.is_function_of(m, x, y) and S.smi(m, y, b) and S.smi(m, y, c) and _smis_tail(m, x, y, b, c))


@R.oracle("smis")
def smis_oracle(m, x, y, b, c):
    return _smis(m, x, y, b, c)


@R.define("smid", ("rv", "rv", "rv", "rv"))
def smid(ctx, x, y, b, c):
    return conj(ctx("lei", x, y), ctx("smi", y, b), ctx("smi", y, c), Not(ctx("smis", x, y, b, c)))


@R.oracle("smid")
def smid_oracle(m, x, y, b, c):
    return M.is_function_of(m, x, y) and S.smi(m, y, b) and S.smi(m, y, c) and not _smis_tail(m, x, y, b, c)


@R.define("label3", ("rv", "rv"), doc="L|A=a is uniform over s_a >= 3 values with distinct s_a.")
def label3(ctx, a, l):
    b, u, c, d, v = ctx.fresh_many("B", "U", "C", "D", "V")
    same = forall(c, Implies(ctx("smis", a, l, b, c), ctx("smi", join(a, u), c)))
    other = forall(d, Implies(ctx("smid", a, l, b, d),
                              Not(exists(v, conj(ctx("ueq", u, v), Indep(v, a), ctx("smi", join(a, v), d))))))
    per = exists(u, conj(ctx("uge_n", u, 3), Indep(u, a), same, other), hint=("label_u", (a, l, b)))
    return And((ctx("lei", a, l), forall(b, Implies(ctx("smi", l, b), per))))


@R.oracle("label3")
def label3_oracle(m, a, l):
    return S.label_sizes(m, a, l) is not None


@R.define("divmass3", ("rv", "rv", "rv", "rv"), doc="B indicates one L-value inside the A-class labelled |U|.")
def divmass3(ctx, a, l, u, b):
    ut = ctx.fresh("U")
    body = conj(ctx("label3", a, l), ctx("smi", l, b), ctx("ueq", u, ut), ctx("uge_n", u, 3), Indep(ut, a),
                ctx("smi", join(a, ut), b))
    return exists(ut, body, hint=("divmass", (a, l, u, b)))


@R.oracle("divmass3")
def divmass3_oracle(m, a, l, u, b):
    sizes = S.label_sizes(m, a, l)
    if sizes is None or not S.is_unif(m, u) or S.card(m, u) < 3 or not S.smi(m, l, b) or S.is_const(m, l):
        return False
    k = S.card(m, u)
    lcl = S.classes(m, l)
    acl = S.classes(m, a)
    for lv, ev in lcl.items():
        if S.indicator_of(m, b, ev):
            x = next(xv for xv, e in acl.items() if ev <= e)
            return sizes[x] == k
    return False


@R.define("label0", ("rv", "rv"), doc="Label with the value shift: L|A=a uniform over a+3 values.")
def label0(ctx, a, l):
    return ctx("label3", a, l)


@R.oracle("label0")
def label0_oracle(m, a, l):
    return S.label_sizes(m, a, l) is not None


@R.define("pmf_def", ("rv", "arith"), doc="A follows the pmf p given by psi(w, x, y): x/(x+y) <= p(w)/w.")
def pmf_def(ctx, a, psi):
    from .arithmetic import compile_arith
    from ..arith import arith_free_vars
    free = arith_free_vars(psi)
    if not free <= {"w", "x", "y"}:
        raise MacroError("pmf_def: the arithmetic predicate may only use the free variables w, x, y")
    l, b, u, x, y, c = ctx.fresh_many("L", "B", "U", "X", "Y", "C")
    psi_f = conj(ctx("unif", u), ctx("unif", x), ctx("unif", y), ctx("uge_n", u, 3),
                 compile_arith(psi, {"w": u, "x": x, "y": y}, avoid=ctx.supply.avoid))
    inner = forall((x, y, c), Implies(And((ctx("ult", x, y), ctx("qeq", x, y, c))), Iff(ctx("ble", c, b), psi_f)))
    return exists(l, And((ctx("label3", a, l), forall((b, u), Implies(ctx("divmass3", a, l, u, b), inner)))),
                  hint=("label", (a,)))


@R.define("rdist_eq", ("rv", "rv"), doc="Same distribution up to relabelling.")
def rdist_eq(ctx, a1, a2):
    l1, l2, b, u, b1, u1, b2, u2 = ctx.fresh_many("L", "L", "B", "U", "B", "U", "B", "U")
    side1 = exists((b1, u1), conj(ctx("beq", b, b1), ctx("ueq", u, u1), ctx("divmass3", a1, l1, u1, b1)))
    side2 = exists((b2, u2), conj(ctx("beq", b, b2), ctx("ueq", u, u2), ctx("divmass3", a2, l2, u2, b2)))
    body = conj(ctx("label3", a1, l1), ctx("label3", a2, l2), forall((b, u), Iff(side1, side2)))
    return exists((l1, l2), body, hint=("labels_matched", (a1, a2)))


@R.hform("rdist_eq")
def rdist_eq_h(ctx, a1, a2):
    return CondDistRel((), a1, (), a2)


@R.oracle("rdist_eq")
def rdist_eq_oracle(m, a1, a2):
    return M.same_dist_relabel(m, a1, a2)


@R.define("cardleu2", ("rv", "rv"), doc="V uniform with |A| + 2 <= |V|.")
def cardleu2(ctx, a, v):
    l, b, u = ctx.fresh_many("L", "B", "U")
    return exists(l, And((ctx("label3", a, l), forall((b, u), Implies(ctx("divmass3", a, l, u, b), ctx("ule", u, v))))),
                  hint=("label", (a,)))


@R.oracle("cardleu2")
def cardleu2_oracle(m, a, v):
    return S.is_unif(m, v) and S.card(m, a) + 2 <= S.card(m, v)


@R.define("card_le_rv", ("rv", "rv"), doc="|A1| <= |A2| for arbitrary A1, A2.")
def card_le_rv(ctx, a1, a2):
    v = ctx.fresh("V")
    return forall(v, Implies(ctx("cardleu2", a2, v), ctx("cardleu2", a1, v)))


@R.oracle("card_le_rv")
def card_le_rv_oracle(m, a1, a2):
    return S.card(m, a1) <= S.card(m, a2)


@R.define("card_eq_rv", ("rv", "rv"), doc="|A1| = |A2| for arbitrary A1, A2.")
def card_eq_rv(ctx, a1, a2):
    v = ctx.fresh("V")
    return forall(v, Iff(ctx("cardleu2", a1, v), ctx("cardleu2", a2, v)))


@R.oracle("card_eq_rv")
def card_eq_rv_oracle(m, a1, a2):
    return S.card(m, a1) == S.card(m, a2)


