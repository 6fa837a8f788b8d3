"""Events represented by random variables.

An event E with 0 < P(E) < 1 is represented by a variable that is constant
off E and uniform over k >= 2 values on E, with P(E)/k < P(not E).  The sure
event is represented by any uniform variable with at least two values and
the null event by a constant.
"""
from ..formula import (And, CondDistRel, Implies, Indep, Lambda, Not, Or, conj, disj, empty, exists, forall,
                       join)
from .. import model as M
from .. import semantics as S
from .core import nonempty
from .registry import REGISTRY as R


def _events(m, *ds):
    out = [S.event_of(m, d) for d in ds]
    return None if any(e is None for e in out) else out


@R.define("ind", ("rv", "rv"), doc="C is the indicator of the event represented by D.")
def ind(ctx, d, c):
    u, v, w, f, g = ctx.fresh_many("U", "V", "W", "F", "G")
    dv, cv = join(d, v), join(c, v)
    mass_cmp = forall((f, g), Implies(conj(ctx("smi", dv, f), Not(ctx("smi", cv, f)), ctx("smi", dv, g),
                                           ctx("smi", cv, g)), ctx("blt", f, g)))
    size = exists(w, And((ctx("usucc", u, w), ctx("card_eq_rv", d, w))), hint=("usucc", (u,)))
    inner = conj(ctx("uge_n", u, 2), ctx("ueq_n", v, 2), ctx("mutual_indep", u, v, c), ctx("lei", d, join(c, u)),
                 size, mass_cmp)
    proper = conj(ctx("card_eq", c, 2), ctx("smi", d, c), exists((u, v), inner, hint=("ind_uv", (d, c))))
    return Or((And((ctx("unif", d), empty(c))), proper))


@R.oracle("ind")
def ind_oracle(m, d, c):
    e = S.event_of(m, d)
    return e is not None and S.indicator_of(m, c, e)


@R.define("isev", ("rv",), doc="D represents some event.")
def isev(ctx, d):
    c = ctx.fresh("C")
    return exists(c, ctx("ind", d, c), hint=("indicator", (d,)))


@R.oracle("isev")
def isev_oracle(m, d):
    return S.event_of(m, d) is not None


@R.define("compl", ("rv", "rv"), doc="D1 and D2 represent complementary events.")
def compl(ctx, d1, d2):
    c = ctx.fresh("C")
    shared = exists(c, conj(ctx("ind", d1, c), ctx("ind", d2, c), Not(ctx("smi", join(d1, d2), c))),
                    hint=("indicator", (d1,)))
    return conj(shared, Implies(ctx("uge_n", d2, 2), empty(d1)), Implies(ctx("uge_n", d1, 2), empty(d2)))


@R.oracle("compl")
def compl_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and ev[0] == S.positive_atoms(m) - ev[1]


@R.define("eveq", ("rv", "rv"), doc="D1 and D2 represent the same event.")
def eveq(ctx, d1, d2):
    c = ctx.fresh("C")
    return And((exists(c, And((ctx("ind", d1, c), ctx("ind", d2, c))), hint=("indicator", (d1,))),
                Not(ctx("compl", d1, d2))))


@R.oracle("eveq")
def eveq_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and ev[0] == ev[1]


@R.define("subset", ("rv", "rv"), doc="The event of D1 is contained in the event of D2.")
def subset(ctx, d1, d2):
    c2, dt = ctx.fresh_many("C", "D")
    proper = conj(Not(ctx("unif", d1)), Not(ctx("unif", d2)),
                  exists(c2, And((ctx("ind", d2, c2),
                                  forall(dt, Implies(ctx("eveq", d1, dt), ctx("smi", join(d2, dt), c2)),
                                         hint=("event_reps", (d1, d2))))),
                         hint=("indicator", (d2,))))
    return conj(ctx("isev", d1), ctx("isev", d2), disj(empty(d1), ctx("uge_n", d2, 2), proper))


@R.oracle("subset")
def subset_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and ev[0] <= ev[1]


@R.define("union_P", ("rv", "formula"), doc="D represents the union of all events whose representations satisfy P.")
def union_P(ctx, d, p):
    d2, dt = ctx.fresh_many("D", "D")
    member = lambda x: And((p.apply(x), ctx("isev", x)))
    upper = lambda top: forall(d2, Implies(member(d2), ctx("subset", d2, top)))
    return And((upper(d), forall(dt, Implies(And((ctx("isev", dt), upper(dt))), ctx("subset", d, dt)))))


@R.define("inter_P", ("rv", "formula"), doc="D represents the intersection of all events satisfying P.")
def inter_P(ctx, d, p):
    d2, dt = ctx.fresh_many("D", "D")
    member = lambda x: And((p.apply(x), ctx("isev", x)))
    lower = lambda bot: forall(d2, Implies(member(d2), ctx("subset", bot, d2)))
    return conj(ctx("isev", d), lower(d), forall(dt, Implies(And((ctx("isev", dt), lower(dt))), ctx("subset", dt, d))))


def _family(ctx, ds):
    x = ctx.fresh("D")
    return Lambda((x,), disj(*[ctx("eveq", x, di) for di in ds]))


@R.define("union", ("rv*",), min_var=1, doc="The last argument represents the union of the events of the others.")
def union(ctx, *args):
    return ctx("union_P", args[-1], _family(ctx, args[:-1]))


@R.define("inter", ("rv*",), min_var=1, doc="The last argument represents the intersection of the others.")
def inter(ctx, *args):
    return ctx("inter_P", args[-1], _family(ctx, args[:-1]))


def _family_events(m, ds):
    return [e for e in (S.event_of(m, d) for d in ds) if e is not None]


@R.oracle("union")
def union_oracle(m, *args):
    e = S.event_of(m, args[-1])
    return e is not None and e == frozenset().union(*_family_events(m, args[:-1]))


@R.oracle("inter")
def inter_oracle(m, *args):
    e = S.event_of(m, args[-1])
    out = S.positive_atoms(m)
    for f in _family_events(m, args[:-1]):
        out = out & f
    return e is not None and e == out


@R.define("disjoint", ("rv", "rv"))
def disjoint(ctx, d1, d2):
    dt = ctx.fresh("D")
    return exists(dt, And((ctx("compl", d1, dt), ctx("subset", d2, dt))), hint=("compl_rep", (d1,)))


@R.oracle("disjoint")
def disjoint_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and not (ev[0] & ev[1])


@R.define("indep_ev", ("rv", "rv"), doc="The events of D1 and D2 are independent.")
def indep_ev(ctx, d1, d2):
    t1, t2 = ctx.fresh_many("D", "D")
    return exists((t1, t2), conj(ctx("eveq", d1, t1), ctx("eveq", d2, t2), Indep(t1, t2)),
                  hint=("indep_reps", (d1, d2)))


@R.oracle("indep_ev")
def indep_ev_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and S.prob(m, ev[0] & ev[1]) == S.prob(m, ev[0]) * S.prob(m, ev[1])


@R.define("prle", ("rv", "rv"), doc="P(event of D1) <= P(event of D2).")
def prle(ctx, d1, d2):
    dt = ctx.fresh("D")
    return exists(dt, And((ctx("rdist_eq", d1, dt), ctx("subset", dt, d2))), hint=("sub_rep", (d1, d2)))


@R.oracle("prle")
def prle_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and S.prob(m, ev[0]) <= S.prob(m, ev[1])


@R.define("preq", ("rv", "rv"), doc="P(event of D1) = P(event of D2).")
def preq(ctx, d1, d2):
    dt = ctx.fresh("D")
    return exists(dt, And((ctx("rdist_eq", d1, dt), ctx("eveq", dt, d2))), hint=("sub_rep", (d1, d2)))


@R.oracle("preq")
def preq_oracle(m, d1, d2):
    ev = _events(m, d1, d2)
    return ev is not None and S.prob(m, ev[0]) == S.prob(m, ev[1])


@R.define("prob_poly", ("rv", "rv", "rv", "rv"), doc="P(E1) = P(E2) P(E3) + P(E4).")
def prob_poly(ctx, d1, d2, d3, d4):
    t1, t2, t3, t4, t23 = ctx.fresh_many("D", "D", "D", "D", "D")
    body = conj(ctx("preq", d1, t1), ctx("preq", d2, t2), ctx("preq", d3, t3), ctx("preq", d4, t4),
                ctx("indep_ev", t2, t3), ctx("inter", t2, t3, t23), ctx("disjoint", t23, t4),
                ctx("union", t23, t4, t1))
    return exists((t1, t2, t3, t4, t23), body)


@R.oracle("prob_poly")
def prob_poly_oracle(m, d1, d2, d3, d4):
    ev = _events(m, d1, d2, d3, d4)
    if ev is None:
        return False
    p = [S.prob(m, e) for e in ev]
    return p[0] == p[1] * p[2] + p[3]


@R.define("prob_prod_eq", ("rv", "rv", "rv", "rv"), doc="P(E1) P(E2) = P(E3) P(E4).")
def prob_prod_eq(ctx, d1, d2, d3, d4):
    t1, t2, t3, t4, f, g = ctx.fresh_many("D", "D", "D", "D", "F", "G")
    body = conj(ctx("preq", d1, t1), ctx("preq", d2, t2), ctx("indep_ev", t1, t2), ctx("inter", t1, t2, f),
                ctx("preq", d3, t3), ctx("preq", d4, t4), ctx("indep_ev", t3, t4), ctx("inter", t3, t4, g),
                ctx("preq", f, g))
    return exists((t1, t2, t3, t4, f, g), body)


@R.oracle("prob_prod_eq")
def prob_prod_eq_oracle(m, d1, d2, d3, d4):
    ev = _events(m, d1, d2, d3, d4)
    if ev is None:
        return False
    p = [S.prob(m, e) for e in ev]
    return p[0] * p[1] == p[2] * p[3]


# -- events of labelled variables ------------------------------------------


@R.define("labelevne3", ("rv", "rv", "rv", "rv"), doc="P(A = |U|) > 0 and D represents the event A = |U|.")
def labelevne3(ctx, a, l, u, d):
    c, ut, b, dt, b2 = ctx.fresh_many("C", "U", "B", "D", "B")
    fine = exists(dt, And((ctx("eveq", d, dt), ctx("lei", b, dt))), hint=("fine_rep", (d, l)))
    per_b = forall(b, Implies(ctx("divmass3", a, l, u, b),
                              conj(ctx("smi", join(a, ut), b), ctx("smi", join(c, ut), b), fine)))
    body = conj(ctx("ind", d, c), ctx("label3", a, l), ctx("smi", a, c), ctx("ueq", u, ut), ctx("uge_n", u, 3),
                Indep(ut, a), per_b)
    # without this conjunct the universal above is vacuous when no class of A has |U| labels
    hit = exists(b2, ctx("divmass3", a, l, u, b2), hint=("divmass_b", (a, l, u)))
    return And((exists((c, ut), body, hint=("labelev", (a, l, u, d))), hit))


def _labelled_event(m, a, l, k):
    """Event A = k for label l (None if l is no label; empty if no class)."""
    lc = S.labelled_classes(m, a, l)
    if lc is None:
        return None
    return lc.get(k, frozenset())


@R.oracle("labelevne3")
def labelevne3_oracle(m, a, l, u, d):
    if not S.is_unif(m, u) or S.card(m, u) < 3:
        return False
    ev = _labelled_event(m, a, l, S.card(m, u))
    return bool(ev) and S.event_of(m, d) == ev


@R.define("labelev3", ("rv", "rv", "rv", "rv"), doc="D represents the (possibly null) event A = |U|.")
def labelev3(ctx, a, l, u, d):
    d2 = ctx.fresh("D")
    return Or((ctx("labelevne3", a, l, u, d),
               And((empty(d), Not(exists(d2, ctx("labelevne3", a, l, u, d2), hint=("labelev_rep", (a, l, u))))))))


def _labelev(m, a, l, k, d):
    ev = _labelled_event(m, a, l, k) if k is not None and k >= 3 else None
    if ev:
        return S.event_of(m, d) == ev
    return S.is_const(m, d)


@R.oracle("labelev3")
def labelev3_oracle(m, a, l, u, d):
    return _labelev(m, a, l, S.card(m, u) if S.is_unif(m, u) else None, d)


@R.define("labelev0", ("rv", "rv", "rv", "rv"), doc="E represents the event that A (labelled by L) equals a.")
def labelev0(ctx, a, l, n, e):
    t, u = ctx.fresh_many("T", "U")
    body = conj(ctx("n_const", t, 3), ctx("n_add", n, t, u), ctx("labelev3", a, l, u, e))
    return exists((t, u), body, hint=("shift3", (n,)))


@R.oracle("labelev0")
def labelev0_oracle(m, a, l, n, e):
    k = S.nat_value(m, n)
    return k is not None and _labelev(m, a, l, k + 3, e)


@R.define("deq", ("rv", "rv", "rv", "rv"), doc="X (labelled by LX) and Z (labelled by LZ) are equal in law.")
def deq(ctx, x, lx, z, lz):
    u, dx, dz = ctx.fresh_many("U", "D", "D")
    body = Implies(And((ctx("labelev3", x, lx, u, dx), ctx("labelev3", z, lz, u, dz))), ctx("preq", dx, dz))
    return conj(ctx("label3", x, lx), ctx("label3", z, lz), forall((u, dx, dz), body))


def _class_probs(m, a, l):
    lc = S.labelled_classes(m, a, l)
    return None if lc is None else {k: S.prob(m, e) for k, e in lc.items()}


@R.oracle("deq")
def deq_oracle(m, x, lx, z, lz):
    px, pz = _class_probs(m, x, lx), _class_probs(m, z, lz)
    if px is None or pz is None:
        return False
    return all(px.get(k, 0) == pz.get(k, 0) for k in set(px) | set(pz))


@R.define("cdeq", ("rv",) * 8, doc="Y|X follows the conditional law of W|Z, all four labelled.")
def cdeq(ctx, x, lx, y, ly, z, lz, w, lw):
    u, v, dx, dy, dz, dw, f, g = ctx.fresh_many("U", "V", "D", "D", "D", "D", "F", "G")
    hyp = conj(nonempty(dx), ctx("labelev3", x, lx, u, dx), ctx("labelev3", z, lz, u, dz),
               ctx("labelev3", y, ly, v, dy), ctx("labelev3", w, lw, v, dw))
    prod = exists((f, g), conj(ctx("inter", dz, dw, f), ctx("inter", dx, dy, g), ctx("prob_prod_eq", dx, f, dz, g)))
    body = Implies(hyp, And((nonempty(dz), prod)))
    return conj(ctx("label3", x, lx), ctx("label3", y, ly), ctx("label3", z, lz), ctx("label3", w, lw),
                forall((u, v, dx, dy, dz, dw), body))


@R.oracle("cdeq")
def cdeq_oracle(m, x, lx, y, ly, z, lz, w, lw):
    cls = [S.labelled_classes(m, a, l) for a, l in ((x, lx), (y, ly), (z, lz), (w, lw))]
    if any(c is None for c in cls):
        return False
    cx, cy, cz, cw = cls
    for k, ex in cx.items():
        ez = cz.get(k, frozenset())
        if not ez:
            return False
        for t in set(cy) | set(cw):
            lhs = S.prob(m, ex) * S.prob(m, ez & cw.get(t, frozenset()))
            rhs = S.prob(m, ez) * S.prob(m, ex & cy.get(t, frozenset()))
            if lhs != rhs:
                return False
    return True


@R.define("cdeqr", ("rv", "rv", "rv", "rv"), doc="Y|X follows the conditional law of W|Z up to relabelling.")
def cdeqr(ctx, x, y, z, w):
    lx, ly, lz, lw = ctx.fresh_many("L", "L", "L", "L")
    return exists((lx, ly, lz, lw), ctx("cdeq", x, lx, y, ly, z, lz, w, lw), hint=("labels_cd", (x, y, z, w)))


@R.hform("cdeqr")
def cdeqr_h(ctx, x, y, z, w):
    return CondDistRel((x,), y, (z,), w)


@R.oracle("cdeqr")
def cdeqr_oracle(m, x, y, z, w):
    return M.cond_dist_relabel(m, (y, (x,)), (w, (z,)))
