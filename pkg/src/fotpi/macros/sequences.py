"""Finite sequences of labelled naturals, i.i.d. sequences and entropy bounds.

A sequence is stored as one variable whose (label-shifted) value is the
code of the sequence.  Codes that are not the least code of what they
decode to stand for the empty sequence, since no entry can be decoded.
"""
from ..arith import (ACall, AExists, AForall, AImplies, AVar, a_and, a_exists, dec_oracle, eq, godel_decode,
                     godel_encode, le, lt)
from ..formula import And, Iff, Implies, Indep, Lambda, Not, Or, conj, empty, exists, forall
from .. import semantics as S
from .arithmetic import compile_arith, pow_pred
from .registry import REGISTRY as R, MacroError


def code_seq(v):
    s = godel_decode(v)
    return s if godel_encode(s) == v else ()


def labelled_values(m, a, l):
    """Per-atom labelled value of a (None on null atoms); None if l is no label."""
    sizes = S.label_sizes(m, a, l)
    if sizes is None:
        return None
    return [sizes[v] - 3 if w else None for v, w in zip(m.column(a), m.weights)]


def _seqs(m, xb, lb, n):
    """Per-atom decoded sequences if xb is a sequence of length n, else None."""
    vals = labelled_values(m, xb, lb)
    if vals is None or n is None:
        return None
    out = [None if v is None else code_seq(v) for v in vals]
    if any(s is not None and len(s) != n for s in out):
        return None
    return out


def _arith(ctx, p, **vars_):
    return compile_arith(p, vars_, avoid=ctx.supply.avoid)


def _dec(l, i, x):
    return ACall("dec", (l, i, x), dec_oracle)


@R.define("ev_nonempty", ("rv", "rv", "rv"), doc="P(A = a) > 0 for A labelled by L.")
def ev_nonempty(ctx, a, l, n):
    e = ctx.fresh("E")
    return exists(e, And((ctx("labelev0", a, l, n, e), Not(empty(e)))), hint=("labelev0_rep", (a, l, n)))


@R.oracle("ev_nonempty")
def ev_nonempty_oracle(m, a, l, n):
    k = S.nat_value(m, n)
    lc = S.labelled_classes(m, a, l)
    return k is not None and lc is not None and bool(lc.get(k + 3))


def _length_is():
    """Arithmetic: l decodes to a sequence of length exactly n."""
    def x_of(env):
        s = code_seq(env["l"])
        i = env["i"]
        return [s[i - 1]] if 1 <= i <= len(s) else []

    def i_low(env):
        return range(1, env["n"] + 1)

    def i_high(env):
        return range(env["n"] + 1, len(code_seq(env["l"])) + 1)

    some = AForall("i", AImplies(a_and(le(1, "i"), le("i", "n")), AExists("x", _dec("l", "i", "x"), x_of)), i_low)
    none = AForall("i", AForall("x", AImplies(lt("n", "i"), ~_dec("l", "i", "x")), x_of), i_high)
    return a_and(some, none)


@R.define("isseq", ("rv", "rv", "rv"), doc="Xb (labelled by Lb) codes a sequence of length n.")
def isseq(ctx, xb, lb, n):
    l = ctx.fresh("N")
    body = Implies(And((ctx("isnat", l), ctx("ev_nonempty", xb, lb, l))), _arith(ctx, _length_is(), l=l, n=n))
    return And((ctx("label3", xb, lb), forall(l, body, hint=("label_values", (xb, lb)))))


@R.oracle("isseq")
def isseq_oracle(m, xb, lb, n):
    return _seqs(m, xb, lb, S.nat_value(m, n)) is not None


@R.define("lev_sub", ("rv",) * 6, doc="The event A = a is almost surely inside the event B = b (labels L, M).")
def lev_sub(ctx, a, l, x, b, mm, y):
    e1, e2 = ctx.fresh_many("E", "E")
    return forall((e1, e2), Implies(And((ctx("labelev0", a, l, x, e1), ctx("labelev0", b, mm, y, e2))),
                                    ctx("subset", e1, e2)))


@R.oracle("lev_sub")
def lev_sub_oracle(m, a, l, x, b, mm, y):
    kx, ky = S.nat_value(m, x), S.nat_value(m, y)
    if kx is None or ky is None:
        return True
    la, lb = S.labelled_classes(m, a, l), S.labelled_classes(m, b, mm)
    ea = la.get(kx + 3, frozenset()) if la is not None else frozenset()
    eb = lb.get(ky + 3, frozenset()) if lb is not None else frozenset()
    return ea <= eb


@R.define("entry", ("rv",) * 6, doc="X (labelled by L) is entry i of the length-n sequence Xb.")
def entry(ctx, xb, lb, n, x, l, i):
    v, c = ctx.fresh_many("N", "N")
    every = forall((v, c), Implies(_arith(ctx, _dec("c", "i", "v"), c=c, i=i, v=v), ctx("lev_sub", xb, lb, c, x, l, v)),
                   hint=("seq_entries", (xb, lb, i)))
    in_range = _arith(ctx, a_and(le(1, "i"), le("i", "n")), i=i, n=n)
    return conj(ctx("isseq", xb, lb, n), ctx("label3", x, l), in_range, every)


def _entry(m, xb, lb, n, x, l, i):
    seqs = _seqs(m, xb, lb, n)
    xs = labelled_values(m, x, l)
    if seqs is None or xs is None or i is None or not 1 <= i <= n:
        return False
    return all(s is None or s[i - 1] == v for s, v in zip(seqs, xs))


@R.oracle("entry")
def entry_oracle(m, xb, lb, n, x, l, i):
    return _entry(m, xb, lb, S.nat_value(m, n), x, l, S.nat_value(m, i))


@R.define("subseq", ("rv",) * 7, doc="Yb (labelled by Mb) codes entries i..j of Xb.")
def subseq(ctx, xb, lb, n, yb, mb, i, j):
    d, k, k2, x, l = ctx.fresh_many("N", "N", "N", "X", "L")
    shifted = exists(k2, And((_arith(ctx, eq(AVar("k2") + AVar("i"), AVar("k") + 1), k2=k2, i=i, k=k),
                              ctx("entry", yb, mb, d, x, l, k2))), hint=("nat_diff1", (k, i)))
    agree = forall((x, l), Iff(ctx("entry", xb, lb, n, x, l, k), shifted), hint=("seq_component", (xb, lb, k, yb, mb, i)))
    each = forall(k, Implies(And((ctx("isnat", k), _arith(ctx, a_and(le("i", "k"), le("k", "j")), i=i, j=j, k=k))),
                             agree), hint=("nat_range", (i, j)))
    body = conj(_arith(ctx, eq(AVar("d") + AVar("i"), AVar("j") + 1), d=d, i=i, j=j), ctx("isseq", yb, mb, d), each)
    return conj(_arith(ctx, a_and(le(1, "i"), le("i", "j"), le("j", "n")), i=i, j=j, n=n),
                ctx("isseq", xb, lb, n), exists(d, body, hint=("nat_diff1", (j, i))))


def _subseq(m, xb, lb, n, yb, mb, i, j):
    if None in (n, i, j) or not 1 <= i <= j <= n:
        return False
    xs, ys = _seqs(m, xb, lb, n), _seqs(m, yb, mb, j - i + 1)
    if xs is None or ys is None:
        return False
    return all(s is None or s[i - 1:j] == t for s, t in zip(xs, ys))


@R.oracle("subseq")
def subseq_oracle(m, xb, lb, n, yb, mb, i, j):
    return _subseq(m, xb, lb, S.nat_value(m, n), yb, mb, S.nat_value(m, i), S.nat_value(m, j))


@R.define("prefix", ("rv",) * 6, doc="Yb (labelled by Mb) codes the first j entries of Xb.")
def prefix(ctx, xb, lb, n, yb, mb, j):
    one = ctx.fresh("N")
    nil = conj(ctx("n_const", j, 0), ctx("isseq", xb, lb, n), empty(yb), ctx("isseq", yb, mb, j))
    return Or((nil, exists(one, And((ctx("n_const", one, 1), ctx("subseq", xb, lb, n, yb, mb, one, j))),
                           hint=("nat", (1,)))))


@R.oracle("prefix")
def prefix_oracle(m, xb, lb, n, yb, mb, j):
    nv, jv = S.nat_value(m, n), S.nat_value(m, j)
    if jv == 0:
        return _seqs(m, xb, lb, nv) is not None and S.is_const(m, yb) and _seqs(m, yb, mb, 0) is not None
    return _subseq(m, xb, lb, nv, yb, mb, 1, jv)


@R.define("iid", ("rv",) * 5, doc="Xb codes n i.i.d. copies of X (labels Lb and L).")
def iid(ctx, xb, lb, n, x, l):
    i, j, xp, lp, yb, mb = ctx.fresh_many("N", "N", "X", "L", "Y", "M")
    before = exists(j, And((_arith(ctx, eq(AVar("j") + 1, AVar("i")), i=i, j=j), ctx("prefix", xb, lb, n, yb, mb, j))),
                    hint=("nat_pred", (i,)))
    hyp = conj(ctx("isnat", i), ctx("entry", xb, lb, n, xp, lp, i), before)
    body = Implies(hyp, And((ctx("deq", xp, lp, x, l), Indep(xp, yb))))
    return And((ctx("isseq", xb, lb, n), forall((i, xp, lp, yb, mb), body, hint=("seq_split", (xb, lb, n)))))


@R.oracle("iid")
def iid_oracle(m, xb, lb, n, x, l):
    nv = S.nat_value(m, n)
    seqs = _seqs(m, xb, lb, nv)
    if seqs is None:
        return False
    if nv == 0:
        return True
    xs = labelled_values(m, x, l)
    if xs is None:
        return False
    law = _law(m, xs)
    for i in range(nv):
        comp = [None if s is None else s[i] for s in seqs]
        if _law(m, comp) != law:
            return False
        head = [None if s is None else s[:i] for s in seqs]
        if not _independent(m, comp, head):
            return False
    return True


def _law(m, vals):
    out = {}
    for v, w in zip(vals, m.weights):
        if w:
            out[v] = out.get(v, 0) + w
    return out


def _independent(m, a, b):
    pa, pb, pab = _law(m, a), _law(m, b), _law(m, list(zip(a, b)))
    return all(pab.get((u, v), 0) * m.den == wa * wb for u, wa in pa.items() for v, wb in pb.items())


@R.define("pairseq", ("rv", "rv", "rv*"), min_var=0, doc="Xb codes (X1, ..., Xn) with labels (L1, ..., Ln).")
def pairseq(ctx, xb, lb, *parts):
    if len(parts) % 2:
        raise MacroError("pairseq takes variable/label pairs after the sequence and its label")
    n = len(parts) // 2
    nn = ctx.fresh("N")
    entries = []
    for k in range(n):
        ik = ctx.fresh("N")
        entries.append(exists(ik, And((ctx("n_const", ik, k + 1), ctx("entry", xb, lb, nn, parts[2 * k], parts[2 * k + 1], ik))),
                              hint=("nat", (k + 1,))))
    return exists(nn, conj(ctx("n_const", nn, n), ctx("isseq", xb, lb, nn), *entries), hint=("nat", (n,)))


@R.oracle("pairseq")
def pairseq_oracle(m, xb, lb, *parts):
    n = len(parts) // 2
    if _seqs(m, xb, lb, n) is None:
        return False
    return all(_entry(m, xb, lb, n, parts[2 * k], parts[2 * k + 1], k + 1) for k in range(n))


# -- events of labelled comparisons ---------------------------------------


def _eq_event(m, a, l, b, mm):
    la, lb = S.labelled_classes(m, a, l), S.labelled_classes(m, b, mm)
    if la is None or lb is None:
        return frozenset()
    out = frozenset()
    for k, e in la.items():
        out |= e & lb.get(k, frozenset())
    return out


@R.define("ev_eq", ("rv",) * 5, doc="E represents the event that A (label L) equals B (label M).")
def ev_eq(ctx, a, l, b, mm, e):
    d, n, e1, e2 = ctx.fresh_many("D", "N", "E", "E")
    piece = exists((e1, e2), conj(ctx("labelev0", a, l, n, e1), ctx("labelev0", b, mm, n, e2), ctx("inter", e1, e2, d)))
    member = Lambda((d,), exists(n, And((ctx("isnat", n), piece))))
    return ctx("union_P", e, member)


@R.oracle("ev_eq")
def ev_eq_oracle(m, a, l, b, mm, e):
    return S.event_of(m, e) == _eq_event(m, a, l, b, mm)


@R.define("ev_neq", ("rv",) * 5, doc="E represents the event that A (label L) differs from B (label M).")
def ev_neq(ctx, a, l, b, mm, e):
    f = ctx.fresh("F")
    return exists(f, And((ctx("ev_eq", a, l, b, mm, f), ctx("compl", f, e))), hint=("eq_event", (a, l, b, mm)))


@R.oracle("ev_neq")
def ev_neq_oracle(m, a, l, b, mm, e):
    return S.event_of(m, e) == S.positive_atoms(m) - _eq_event(m, a, l, b, mm)


@R.define("as_eq", ("rv",) * 4, doc="A (label L) equals B (label M) almost surely.")
def as_eq(ctx, a, l, b, mm):
    e = ctx.fresh("E")
    return exists(e, And((ctx("ev_eq", a, l, b, mm, e), ctx("uge_n", e, 2))), hint=("eq_event", (a, l, b, mm)))


@R.oracle("as_eq")
def as_eq_oracle(m, a, l, b, mm):
    return _eq_event(m, a, l, b, mm) == S.positive_atoms(m)


# -- entropy bounds -----------------------------------------------------


@R.define("card_pow_le", ("rv",) * 4, doc="|W|^b <= 2^(n a), through arithmetic exponentiation.")
def card_pow_le(ctx, w, b, n, a):
    cw = ctx.fresh("N")
    p = a_exists(["p", "q"], a_and(pow_pred("w", "b", "p"), pow_pred(2, AVar("n") * AVar("a"), "q"), le("p", "q")))
    return exists(cw, conj(ctx("unif", cw), ctx("card_eq_rv", w, cw), _arith(ctx, p, w=cw, b=b, n=n, a=a)),
                  hint=("card_of", (w,)))


@R.oracle("card_pow_le")
def card_pow_le_oracle(m, w, b, n, a):
    vals = [S.nat_value(m, t) for t in (b, n, a)]
    return None not in vals and S.card(m, w) ** vals[0] <= 2 ** (vals[1] * vals[2])


@R.define("card_pow_le_iid", ("rv",) * 4, doc="|W|^b <= 2^(n a), comparing the supports of two i.i.d. sequences.")
def card_pow_le_iid(ctx, w, b, n, a):
    wb, lwb, lw, vb, lvb, bit, lbit, na = ctx.fresh_many("W", "L", "L", "V", "L", "B", "L", "N")
    body = conj(_arith(ctx, eq("k", AVar("n") * AVar("a")), k=na, n=n, a=a), ctx("iid", wb, lwb, b, w, lw),
                ctx("ueq_n", bit, 2), ctx("iid", vb, lvb, na, bit, lbit), ctx("card_le_rv", wb, vb))
    return exists((wb, lwb, lw, vb, lvb, bit, lbit, na), body)


R.oracle("card_pow_le_iid")(card_pow_le_oracle)


def _hle_v(route):
    def build(ctx, x, a, b):
        a2, b2, e, xb, lb, yb, mb, l, w, n, f = ctx.fresh_many("N", "N", "E", "X", "L", "Y", "M", "L", "W", "N", "F")
        faster = _arith(ctx, lt(AVar("a") * AVar("b2"), AVar("a2") * AVar("b")), a=a, b=b, a2=a2, b2=b2)
        err = exists(f, And((ctx("ev_neq", xb, lb, yb, mb, f), ctx("prle", f, e))))
        code = conj(ctx("isnat", n), ctx("iid", xb, lb, n, x, l), ctx("isseq", yb, mb, n), ctx("lei", yb, w),
                    ctx("lei", w, xb), ctx("card_pow_le" if route == "arith" else "card_pow_le_iid", w, b2, n, a2), err)
        per_e = forall(e, Implies(And((ctx("isev", e), Not(empty(e)))), exists((xb, lb, yb, mb, l, w, n), code)))
        return forall((a2, b2), Implies(conj(ctx("isnat", a2), ctx("isnat", b2), faster), per_e))
    return build


R.define("hle_v", ("rv", "rv", "rv"), evaluable=False, doc="H(X) <= a/b in bits (a, b represented).")(_hle_v("arith"))
R.define("hle_v_iid", ("rv", "rv", "rv"), evaluable=False,
         doc="hle_v with the cardinality bound checked through i.i.d. sequences.")(_hle_v("iid"))


def _hle(name):
    def build(ctx, x, a, b):
        na, nb = ctx.fresh_many("N", "N")
        return exists((na, nb), conj(ctx("n_const", na, a), ctx("n_const", nb, b), ctx(name, x, na, nb)))
    return build


R.define("hle", ("rv", "nat", "nat"), evaluable=False, min_nat={2: 1}, doc="H(X) <= a/b in bits.")(_hle("hle_v"))
R.define("hle_iid", ("rv", "nat", "nat"), evaluable=False, min_nat={2: 1})(_hle("hle_v_iid"))


def hle_formula(x, a, b, route="arith"):
    """The source-coding characterisation of H(X) <= a/b."""
    if b == 0:
        raise MacroError("hle needs a positive denominator")
    if route not in ("arith", "iid"):
        raise MacroError(f"unknown route {route!r}")
    return R.expand("hle" if route == "arith" else "hle_iid", (x, a, b))


@R.define("entropy_cmp", ("rv", "rv", "nat"), evaluable=False, min_nat={2: 1}, doc="H(X) <= k H(Y).")
def entropy_cmp(ctx, x, y, k):
    a, b, c = ctx.fresh_many("N", "N", "N")
    scaled = forall(c, Implies(_arith(ctx, eq("c", AVar("b") * k), b=b, c=c), ctx("hle_v", y, a, c)))
    return forall((a, b), Implies(And((ctx("isnat", a), ctx("isnat", b))), Implies(scaled, ctx("hle_v", x, a, b))))
