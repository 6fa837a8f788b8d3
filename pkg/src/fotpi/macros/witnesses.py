"""Witness constructors for quantifier hints.

A constructor takes (model, new variable names, *hint args) and returns a
list of extensions of the model adjoining exactly the new variables.  For
existential hints the extensions are candidate witnesses; for universal
hints they are candidate counterexamples.  An empty list means the
construction does not apply to the model.
"""
from fractions import Fraction
from itertools import permutations

from ..arith import godel_decode, godel_encode
from ..formula import And, Exists, Forall, Iff, Implies, NameSupply, Not, Or, Var
from ..model import FiniteModel, ModelError, is_function_of, check_ci
from .. import semantics as S
from .registry import REGISTRY as R


def _name(v):
    return v.name if isinstance(v, Var) else v


def adjoin_joint(m, names, row_fn):
    """Adjoin several variables at once; row_fn(i) maps tuples of new values
    to conditional probabilities given atom i."""
    names = [_name(n) for n in names]
    if len(set(names)) != len(names) or any(n in m.vars for n in names):
        raise ModelError("witness variables must be new and distinct")
    codes = {}
    rows = []
    for i in range(m.size):
        row = {}
        for vals, p in row_fn(i).items():
            if p:
                vals = vals if isinstance(vals, tuple) else (vals,)
                row[codes.setdefault(vals, len(codes))] = Fraction(p)
        rows.append(row)
    tmp = "__witness__"
    ext = m.adjoin(tmp, rows)
    inv = {c: v for v, c in codes.items()}
    cols = {n: [inv[c][k] for c in ext.vars[tmp]] for k, n in enumerate(names)}
    vs = {k: v for k, v in ext.vars.items() if k != tmp}
    vs.update(cols)
    return FiniteModel(ext.masses, vs)


def index_of(m, t):
    """Per-atom index of the value of t in its sorted support (0 on null atoms)."""
    sup = {v: i for i, v in enumerate(sorted(m.support(t)))}
    return [sup.get(v, 0) for v in m.column(t)]


def _uniform(k, offset=0):
    return {offset + j: Fraction(1, k) for j in range(k)}


def nat_pmf(k):
    if k == 0:
        return {0: Fraction(2, 3), 1: Fraction(1, 3)}
    return _uniform(k)


def _fresh(m, names, pmfs):
    """Adjoin independent variables with the given laws."""
    return adjoin_joint(m, names, product_rows(*[(lambda i, pmf=pmf: pmf) for pmf in pmfs]))


def _nat_values(m, *ts):
    vals = [S.nat_value(m, t) for t in ts]
    return None if None in vals else vals


def witness(key, complete=False):
    def wrap(fn):
        R.register_witness(key, fn, complete)
        return fn
    return wrap


# -- independence and functional dependence -------------------------------


@witness("lei_refute")
def w_lei_refute(m, new, x, y):
    """U with U independent of Y but not of X, when X is not a function of Y."""
    if is_function_of(m, x, y):
        return []
    xc, yc = m.column(x), m.column(y)
    joint, ym = {}, {}
    for a, b, w in zip(xc, yc, m.weights):
        if w:
            joint[a, b] = joint.get((a, b), 0) + w
            ym[b] = ym.get(b, 0) + w
    for (x0, y0), w in sorted(joint.items(), key=repr):
        if w < ym[y0]:
            break
    p = Fraction(joint[x0, y0], ym[y0])

    def row(i):
        if yc[i] == y0:
            return {(1 if xc[i] == x0 else 0,): 1}
        return {(1,): p, (0,): 1 - p}
    return [adjoin_joint(m, new, row)]


@witness("ci")
def w_ci(m, new, x, y, z):
    """Functional representation: U independent of XZ with Y a function of ZU."""
    if not check_ci(m, x, y, z):
        return []
    yc, zc = m.column(y), m.column(z)
    cond = {}
    for b, c, w in zip(yc, zc, m.weights):
        if w:
            cond.setdefault(c, {})
            cond[c][b] = cond[c].get(b, 0) + w
    cuts = {Fraction(0), Fraction(1)}
    spans = {}
    for c, row in cond.items():
        tot = sum(row.values())
        acc = Fraction(0)
        for b in sorted(row, key=repr):
            lo = acc
            acc += Fraction(row[b], tot)
            spans[c, b] = (lo, acc)
            cuts.add(acc)
    cuts = sorted(cuts)
    pieces = list(zip(cuts, cuts[1:]))

    def row(i):
        key = (zc[i], yc[i])
        if key not in spans:
            return {(0,): 1}
        lo, hi = spans[key]
        return {(j,): (b - a) / (hi - lo) for j, (a, b) in enumerate(pieces) if lo <= a and b <= hi}
    return [adjoin_joint(m, new, row)]


@witness("join")
def w_join(m, new, *parts):
    cols = [m.column(p) for p in parts]
    codes = {}
    col = [codes.setdefault(vals, len(codes)) for vals in zip(*cols)]
    return [adjoin_joint(m, new, lambda i: {(col[i],): 1})]


# -- uniform variables and integers ---------------------------------------


@witness("triple")
def w_triple(m, new, x):
    if not S.is_unif(m, x):
        return []
    k = S.card(m, x)
    xi = index_of(m, x)
    return [adjoin_joint(m, new, lambda i: {(j, (xi[i] + j) % k): Fraction(1, k) for j in range(k)})]


@witness("unif_n")
def w_unif_n(m, new, n):
    return [_fresh(m, new, [_uniform(n)])]


@witness("ueq")
def w_ueq(m, new, x, y):
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, x) != S.card(m, y):
        return []
    k = S.card(m, x)
    xi, yi = index_of(m, x), index_of(m, y)
    return [adjoin_joint(m, new, lambda i: {(j, (xi[i] + j) % k, (yi[i] + j) % k): Fraction(1, k)
                                            for j in range(k)})]


@witness("uprod")
def w_uprod(m, new, x, y, z):
    if not (S.is_unif(m, x) and S.is_unif(m, y) and S.is_unif(m, z)):
        return []
    b = S.card(m, y)
    if S.card(m, z) != S.card(m, x) * b:
        return []
    zi = index_of(m, z)
    return [adjoin_joint(m, new, lambda i: {(zi[i] // b, zi[i] % b): 1})]


@witness("ule")
def w_ule(m, new, x, y):
    if not (S.is_unif(m, x) and S.is_unif(m, y)):
        return []
    a, b = S.card(m, x), S.card(m, y)
    if a > b:
        return []
    yi = index_of(m, y)
    # G = (Y, X~) with X~ fresh, Y~ = X~ + Y mod |Y|
    return [adjoin_joint(m, new, lambda i: {(yi[i] * a + j, (j + yi[i]) % b): Fraction(1, a) for j in range(a)})]


@witness("udiv")
def w_udiv(m, new, x, y):
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, y) % S.card(m, x):
        return []
    return [_fresh(m, new, [_uniform(S.card(m, y) // S.card(m, x))])]


@witness("factor")
def w_factor(m, new, x):
    if not S.is_unif(m, x):
        return []
    k = S.card(m, x)
    return [_fresh(m, new, [_uniform(d), _uniform(k // d)]) for d in range(2, k) if k % d == 0 and d * d <= k]


def _frac_parts(m, x, y, z, u):
    """Rows (X~, Y~) for the mixture witness of frac, or None."""
    if not all(S.is_unif(m, t) for t in (x, y, z)):
        return None
    a, b = S.card(m, x), S.card(m, y)
    if S.card(m, z) != a + b or a == b:
        return None
    ucl = S.classes(m, u)
    if len(ucl) != 2 or not is_function_of(m, u, z):
        return None
    want = Fraction(a, a + b)
    first = [v for v, e in ucl.items() if S.prob(m, e) == want]
    if not first:
        return None
    uc, zc = m.column(u), m.column(z)
    blocks = {}
    for v in (first[0],) + tuple(v for v in ucl if v != first[0]):
        blocks[v] = sorted({zc[i] for i in ucl[v]})
    pos = {zv: blk.index(zv) for blk in blocks.values() for zv in blk}

    def row(i):
        if not m.weights[i]:
            return {(0, 0): 1}
        j = pos[zc[i]]
        if uc[i] == first[0]:
            return {(j, t): Fraction(1, b) for t in range(b)}
        return {(s, j): Fraction(1, a) for s in range(a)}
    return row


@witness("frac")
def w_frac(m, new, x, y, z, u):
    row = _frac_parts(m, x, y, z, u)
    return [] if row is None else [adjoin_joint(m, new, row)]


@witness("usum")
def w_usum(m, new, x, y, z):
    if not all(S.is_unif(m, t) for t in (x, y, z)):
        return []
    a, b = S.card(m, x), S.card(m, y)
    if S.card(m, z) != a + b:
        return []
    if a == b:
        return [_fresh(m, new, [_uniform(2)])]
    zi = index_of(m, z)
    return [adjoin_joint(m, new, lambda i: {(0 if zi[i] < a else 1,): 1})]


@witness("is0")
def w_is0(m, new, x):
    if S.nat_value(m, x) != 0:
        return []
    small = min(S.classes(m, x).items(), key=lambda kv: S.prob(m, kv[1]))[0]
    xc = m.column(x)
    return [adjoin_joint(m, new, lambda i: {(0,): 1} if xc[i] == small else {(1,): Fraction(1, 2), (2,): Fraction(1, 2)})]


@witness("usucc")
def w_usucc(m, new, u):
    if not S.is_unif(m, u):
        return []
    return [_fresh(m, new, [_uniform(S.card(m, u) + 1)])]


@witness("card_of")
def w_card_of(m, new, w):
    return [_fresh(m, new, [_uniform(S.card(m, w))])]


# -- naturals for the arithmetic layer ------------------------------------


@witness("nat", complete=True)
def w_nat(m, new, k):
    return [_fresh(m, new, [nat_pmf(k)])]


def _nat_fn(fn):
    def build(m, new, *args):
        vals = _nat_values(m, *args)
        if vals is None:
            return []
        k = fn(*vals)
        return [] if k is None or k < 0 else [_fresh(m, new, [nat_pmf(k)])]
    return build


R.register_witness("nat_sum", _nat_fn(lambda a, b: a + b), complete=True)
R.register_witness("nat_prod", _nat_fn(lambda a, b: a * b), complete=True)
R.register_witness("nat_quot", _nat_fn(lambda r, l: (r // l if r % l == 0 else None) if l else 0), complete=True)
R.register_witness("nat_floordiv", _nat_fn(lambda v, d: v // d if d else None), complete=True)
R.register_witness("nat_diff1", _nat_fn(lambda k, i: k - i + 1), complete=True)
R.register_witness("nat_pred", _nat_fn(lambda i: i - 1), complete=True)


@witness("nat_range")
def w_nat_range(m, new, i, j):
    vals = _nat_values(m, i, j)
    if vals is None:
        return []
    return [_fresh(m, new, [nat_pmf(k)]) for k in range(vals[0], vals[1] + 1)]


@witness("nat_dom", complete=True)
def w_nat_dom(m, new, domain, scope, bound, *rvs):
    env = {}
    for name, t in zip(scope, rvs):
        v = S.nat_value(m, t)
        if v is None:
            return []
        env[name] = v
    try:
        values = list(domain(env)) if domain is not None else list(range(bound + 1))
    except (KeyError, IndexError, ValueError):
        values = list(range(bound + 1))
    return [_fresh(m, new, [nat_pmf(k)]) for k in dict.fromkeys(values)]


# -- Bernoulli parameters and labels --------------------------------------


@witness("qeq")
def w_qeq(m, new, x, y, b):
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, b) != 2:
        return []
    p, q = S.card(m, x), S.card(m, y)
    cl = sorted(S.classes(m, b).items(), key=lambda kv: (S.prob(m, kv[1]), repr(kv[0])))
    lo, hi = min(p, q), max(p, q)
    if S.prob(m, cl[0][1]) != Fraction(lo, p + q):
        return []
    bc = m.column(b)
    small = cl[0][0]
    return [adjoin_joint(m, new, lambda i: _uniform(lo) if bc[i] == small else _uniform(hi, lo))]


@witness("qlt")
def w_qlt(m, new, x, y, b):
    if not (S.is_unif(m, x) and S.is_unif(m, y)) or S.card(m, b) != 2:
        return []
    p, q = S.card(m, x), S.card(m, y)
    r = Fraction(min(p, q), p + q)
    cl = sorted(S.classes(m, b).items(), key=lambda kv: (S.prob(m, kv[1]), repr(kv[0])))
    theta = S.prob(m, cl[0][1])
    if not r < theta < Fraction(1, 2):
        return []
    bc = m.column(b)
    small = cl[0][0]

    def row(i):
        if bc[i] == small:
            return {(1, 0): r / theta, (0, 0): 1 - r / theta}
        h = Fraction(1, 2) / (1 - theta)
        return {(0, 1): h, (0, 0): 1 - h}
    return [adjoin_joint(m, new, row)]


@witness("smis")
def w_smis(m, new, x, b, c):
    out = []
    for t in (b, c):
        col = index_of(m, t)
        out.append(adjoin_joint(m, new, lambda i, col=col: {(col[i],): 1}))
    return out


def _sizes_for(m, a, order=None):
    vals = order if order is not None else sorted(m.support(a))
    return {v: 3 + j for j, v in enumerate(vals)}


def _label_rows(m, a, sizes):
    """L | A = v uniform over sizes[v] values, disjoint across classes."""
    offs, acc = {}, 0
    for v in sorted(sizes):
        offs[v] = acc
        acc += sizes[v]
    ac = m.column(a)
    return lambda i: _tup(_uniform(sizes[ac[i]], offs[ac[i]])) if ac[i] in sizes else {(0,): 1}


@witness("label")
def w_label(m, new, a):
    return [adjoin_joint(m, new, _label_rows(m, a, _sizes_for(m, a)))]


def _by_mass(m, a):
    d = m.dist(a)
    return sorted(d, key=lambda v: (d[v], repr(v)))


@witness("labels_matched")
def w_labels_matched(m, new, a1, a2):
    s1, s2 = _sizes_for(m, a1, _by_mass(m, a1)), _sizes_for(m, a2, _by_mass(m, a2))
    return [adjoin_joint(m, new, product_rows(_label_rows(m, a1, s1), _label_rows(m, a2, s2)))]


def _cd_maps(m, x, y, z, w, cap=8):
    """Injections X->Z values and Y->W values matching the kernels, or None."""
    def kernel(t, c):
        rows = {}
        for tv, cv, wt in zip(m.column(t), m.column(c), m.weights):
            if wt:
                rows.setdefault(cv, {})
                rows[cv][tv] = rows[cv].get(tv, 0) + wt
        return {cv: {tv: Fraction(n, sum(r.values())) for tv, n in r.items()} for cv, r in rows.items()}
    lk, rk = kernel(y, x), kernel(w, z)
    ly = sorted({v for r in lk.values() for v in r}, key=repr)
    ry = sorted({v for r in rk.values() for v in r}, key=repr)
    if len(ly) > len(ry) or len(ry) > cap:
        return None
    for image in permutations(ry, len(ly)):
        psi = dict(zip(ly, image))
        free = dict(rk)
        phi = {}
        for xv, row in lk.items():
            want = {psi[k]: q for k, q in row.items()}
            hit = next((zv for zv, r in free.items() if r == want), None)
            if hit is None:
                break
            phi[xv] = hit
            del free[hit]
        else:
            return phi, psi
    return None


@witness("labels_cd")
def w_labels_cd(m, new, x, y, z, w):
    maps = _cd_maps(m, x, y, z, w)
    if maps is None:
        return []
    phi, psi = maps
    sz = _sizes_for(m, z)
    sw = _sizes_for(m, w)
    extra = max(list(sz.values()) + list(sw.values()) + [2]) + 1
    sx = {v: sz[phi[v]] if v in phi else extra + j for j, v in enumerate(sorted(m.support(x)))}
    sy = {v: sw[psi[v]] if v in psi else extra + j for j, v in enumerate(sorted(m.support(y)))}
    rows = [_label_rows(m, t, s) for t, s in ((x, sx), (y, sy), (z, sz), (w, sw))]
    return [adjoin_joint(m, new, product_rows(*rows))]


def _class_of_b(m, a, l, b):
    """(A-value, L-value) of the single L-mass indicated by B, or None."""
    if not S.smi(m, l, b) or S.is_const(m, l):
        return None
    lcl = S.classes(m, l)
    for lv, e in lcl.items():
        if S.indicator_of(m, b, e):
            i = next(iter(e))
            return m.column(a)[i], lv
    return None


def _aligned_u(m, a, l, av, s):
    """U uniform over s values, equal to the L-index on A = av and fresh
    elsewhere, so that U is independent of A."""
    ac, lc = m.column(a), m.column(l)
    lidx = {v: j for j, v in enumerate(sorted({lc[i] for i in range(m.size) if m.weights[i] and ac[i] == av}))}
    if len(lidx) != s:
        return None
    return lambda i: {(lidx[lc[i]],): 1} if ac[i] == av and lc[i] in lidx else _tup(_uniform(s))


@witness("label_u")
def w_label_u(m, new, a, l, b):
    sizes = S.label_sizes(m, a, l)
    hit = _class_of_b(m, a, l, b)
    if sizes is None or hit is None:
        return []
    row = _aligned_u(m, a, l, hit[0], sizes[hit[0]])
    return [] if row is None else [adjoin_joint(m, new, row)]


@witness("divmass")
def w_divmass(m, new, a, l, u, b):
    sizes = S.label_sizes(m, a, l)
    hit = _class_of_b(m, a, l, b)
    if sizes is None or hit is None or not S.is_unif(m, u) or sizes[hit[0]] != S.card(m, u):
        return []
    row = _aligned_u(m, a, l, hit[0], sizes[hit[0]])
    return [] if row is None else [adjoin_joint(m, new, row)]


def _class_of_size(m, a, l, k):
    sizes = S.label_sizes(m, a, l)
    if sizes is None:
        return None
    hit = [v for v, s in sizes.items() if s == k]
    return hit[0] if hit else None


@witness("divmass_b")
def w_divmass_b(m, new, a, l, u):
    if not S.is_unif(m, u):
        return []
    av = _class_of_size(m, a, l, S.card(m, u))
    if av is None:
        return []
    ac, lc = m.column(a), m.column(l)
    lv = min(lc[i] for i in range(m.size) if m.weights[i] and ac[i] == av)
    return [adjoin_joint(m, new, lambda i: {(1 if lc[i] == lv else 0,): 1})]


# -- events ---------------------------------------------------------------


def min_parts(m, event):
    """Least k >= 2 making a uniform split of the event a valid representation."""
    pe = S.prob(m, event)
    rest = 1 - pe
    if rest == 0:
        return 2
    k = 2
    while pe / k >= rest:
        k += 1
    return k


def rep_rows(m, event, k=None):
    """Rows representing event: uniform over 1..k on it, 0 off it."""
    if not event:
        return lambda i: {(0,): 1}
    k = k or min_parts(m, event)
    return lambda i: _tup(_uniform(k, 1)) if i in event else {(0,): 1}


@witness("indicator")
def w_indicator(m, new, d):
    e = S.event_of(m, d)
    if e is None:
        return []
    trivial = not e or e == S.positive_atoms(m)
    return [adjoin_joint(m, new, lambda i: {(0 if trivial or i not in e else 1,): 1})]


@witness("ind_uv")
def w_ind_uv(m, new, d, c):
    e = S.event_of(m, d)
    if e is None or not e or e == S.positive_atoms(m) or not S.indicator_of(m, c, e):
        return []
    k = S.card(m, d) - 1
    dc = m.column(d)
    vals = {v: j for j, v in enumerate(sorted({dc[i] for i in e}))}
    half = _uniform(2)

    def row(i):
        u = {(vals[dc[i]],): 1} if i in e else {(j,): Fraction(1, k) for j in range(k)}
        return {uv + (v,): p * q for uv, p in u.items() for v, q in half.items()}
    return [adjoin_joint(m, new, row)]


@witness("event_reps")
def w_event_reps(m, new, d1, d2):
    e1, e2 = S.event_of(m, d1), S.event_of(m, d2)
    if e1 is None:
        return []
    ks = {min_parts(m, e1)} if e1 else {1}
    if e1 and e2 is not None:
        out_mass = S.prob(m, e1 - e2)
        if out_mass:
            k = min_parts(m, e1)
            while S.prob(m, e1) / k >= out_mass:
                k += 1
            ks.add(k)
    return [adjoin_joint(m, new, rep_rows(m, e1, k)) for k in sorted(ks)]


@witness("compl_rep")
def w_compl_rep(m, new, d):
    e = S.event_of(m, d)
    if e is None:
        return []
    return [adjoin_joint(m, new, rep_rows(m, S.positive_atoms(m) - e))]


@witness("indep_reps")
def w_indep_reps(m, new, d1, d2):
    e1, e2 = S.event_of(m, d1), S.event_of(m, d2)
    if e1 is None or e2 is None:
        return []
    return [adjoin_joint(m, new, product_rows(rep_rows(m, e1), rep_rows(m, e2)))]


@witness("sub_rep")
def w_sub_rep(m, new, d1, d2):
    """A variable distributed as D1 whose event lies inside the event of D2."""
    e1, e2 = S.event_of(m, d1), S.event_of(m, d2)
    if e1 is None or e2 is None:
        return []
    target = S.prob(m, e1)
    if target > S.prob(m, e2):
        return []
    if not e1:
        return [adjoin_joint(m, new, lambda i: {(0,): 1})]
    if e1 == S.positive_atoms(m):
        k = S.card(m, d1)
        return [adjoin_joint(m, new, lambda i: _uniform(k))] if e2 == e1 else []
    k = S.card(m, d1) - 1
    frac = {}
    acc = Fraction(0)
    for i in sorted(e2):
        if acc >= target:
            break
        p = m.masses[i]
        take = min(p, target - acc)
        frac[i] = take / p
        acc += take

    def row(i):
        r = frac.get(i, 0)
        out = {(j,): r / k for j in range(1, k + 1)} if r else {}
        if r != 1:
            out[(0,)] = 1 - r
        return out
    return [adjoin_joint(m, new, row)]


@witness("fine_rep")
def w_fine_rep(m, new, d, l):
    e = S.event_of(m, d)
    if e is None or not e:
        return []
    lc = m.column(l)
    lvals = {v: j for j, v in enumerate(sorted({lc[i] for i in e}))}
    s = len(lvals)
    rest = 1 - S.prob(m, e)
    r = 1
    while rest and S.prob(m, e) / (s * r) >= rest:
        r += 1
    if s * r < 2:
        r = 2
    return [adjoin_joint(m, new, lambda i: {(1 + lvals[lc[i]] * r + j,): Fraction(1, r) for j in range(r)}
                         if i in e else {(0,): 1})]


def _labelled_event(m, a, l, k):
    lc = S.labelled_classes(m, a, l)
    return None if lc is None else lc.get(k)


@witness("labelev")
def w_labelev(m, new, a, l, u, d):
    if not S.is_unif(m, u):
        return []
    k = S.card(m, u)
    av = _class_of_size(m, a, l, k)
    if av is None:
        return []
    ac = m.column(a)
    single = S.card(m, a) > 1
    urow = _aligned_u(m, a, l, av, k)
    if urow is None:
        return []
    return [adjoin_joint(m, new, lambda i: {(1 if single and ac[i] == av else 0,) + uv: p
                                            for uv, p in urow(i).items()})]


@witness("labelev_rep")
def w_labelev_rep(m, new, a, l, u):
    if not S.is_unif(m, u):
        return []
    e = _labelled_event(m, a, l, S.card(m, u))
    return [adjoin_joint(m, new, rep_rows(m, e))] if e else []


@witness("shift3")
def w_shift3(m, new, n):
    k = S.nat_value(m, n)
    return [] if k is None else [_fresh(m, new, [_uniform(3), nat_pmf(k + 3)])]


@witness("labelev0_rep")
def w_labelev0_rep(m, new, a, l, n):
    k = S.nat_value(m, n)
    e = None if k is None else _labelled_event(m, a, l, k + 3)
    return [adjoin_joint(m, new, rep_rows(m, e))] if e else []


# -- sequences ------------------------------------------------------------


def _values(m, a, l):
    sizes = S.label_sizes(m, a, l)
    return None if sizes is None else sorted({s - 3 for s in sizes.values()})


@witness("label_values")
def w_label_values(m, new, xb, lb):
    vals = _values(m, xb, lb)
    return [] if vals is None else [_fresh(m, new, [nat_pmf(v)]) for v in vals]


def _code_seq(v):
    s = godel_decode(v)
    return s if godel_encode(s) == v else ()


@witness("seq_entries")
def w_seq_entries(m, new, xb, lb, i):
    vals, k = _values(m, xb, lb), S.nat_value(m, i)
    if vals is None or k is None:
        return []
    out = []
    for c in vals:
        s = _code_seq(c)
        if 1 <= k <= len(s):
            out.append(_fresh(m, new, [nat_pmf(s[k - 1]), nat_pmf(c)]))
    return out


def _tup(row):
    return {k if isinstance(k, tuple) else (k,): p for k, p in row.items()}


def product_rows(*fns):
    """Row function drawing each factor independently given the atom."""
    def row(i):
        out = {(): Fraction(1)}
        for fn in fns:
            out = {k + v: p * q for k, p in out.items() for v, q in _tup(fn(i)).items()}
        return out
    return row


def labelled_rows(values):
    """(X, L) with X = values[i] on atom i and L | X = v uniform over v+3 labels."""
    offs, acc = {}, 0
    for v in sorted(set(values)):
        offs[v] = acc
        acc += v + 3
    return lambda i: {(values[i], offs[values[i]] + j): Fraction(1, values[i] + 3) for j in range(values[i] + 3)}


def _components(m, xb, lb):
    sizes = S.label_sizes(m, xb, lb)
    if sizes is None:
        return None
    return [_code_seq(sizes[v] - 3) if w else () for v, w in zip(m.column(xb), m.weights)]


def _entries(m, seqs, pos):
    if pos is None or pos < 1 or any(len(s) < pos for s, w in zip(seqs, m.weights) if w):
        return None
    return [s[pos - 1] if len(s) >= pos else 0 for s in seqs]


@witness("seq_component")
def w_seq_component(m, new, xb, lb, k, yb, mb, i):
    kv, iv = S.nat_value(m, k), S.nat_value(m, i)
    out = []
    for (a, l), pos in (((xb, lb), kv), ((yb, mb), None if kv is None or iv is None else kv - iv + 1)):
        seqs = _components(m, a, l)
        vals = None if seqs is None else _entries(m, seqs, pos)
        if vals is not None:
            out.append(adjoin_joint(m, new, labelled_rows(vals)))
    return out


@witness("seq_split")
def w_seq_split(m, new, xb, lb, n):
    """(I, entry I, label, prefix of length I-1, label) for each position I."""
    nv = S.nat_value(m, n)
    seqs = _components(m, xb, lb)
    if nv is None or seqs is None:
        return []
    out = []
    for i in range(1, nv + 1):
        vals = _entries(m, seqs, i)
        if vals is None:
            continue
        heads = [godel_encode(tuple(s[:i - 1])) for s in seqs]
        pmf = nat_pmf(i)
        out.append(adjoin_joint(m, new, product_rows(lambda a: pmf, labelled_rows(vals), labelled_rows(heads))))
    return out


@witness("eq_event")
def w_eq_event(m, new, a, l, b, mm):
    la, lb = S.labelled_classes(m, a, l), S.labelled_classes(m, b, mm)
    e = frozenset()
    if la is not None and lb is not None:
        for k, ev in la.items():
            e |= ev & lb.get(k, frozenset())
    return [adjoin_joint(m, new, rep_rows(m, e))]


def witness_for(name, args, model, names=None):
    """Extension of model by the named witness constructor or, failing that,
    by a witness for the outermost hinted existential of the named macro.  None when
    the construction does not apply."""
    args = tuple(Var(a) if isinstance(a, str) else a for a in args)
    if name in R.witnesses:
        names = names or _default_names(model, _ARITY.get(name, 1))
        got = R.witnesses[name](model, list(names), *args)
        return got[0] if got else None
    node = _first_hinted(R.expand(name, args))
    if node is None:
        return None
    key, hargs = node.hint
    names = names or _default_names(model, len(node.vars))
    got = R.witnesses[key](model, list(names), *hargs)
    return got[0] if got else None


_ARITY = {"triple": 2, "ueq": 3, "uprod": 2, "ule": 2, "ind_uv": 2, "qlt": 2, "labels_matched": 2,
          "labels_cd": 4, "factor": 2, "labelev": 2, "seq_entries": 2, "seq_component": 2, "seq_split": 5}


def _default_names(model, k):
    pool = [c for c in "YZUVWTSRQP" if c not in model.vars]
    if len(pool) >= k:
        return pool[:k]
    sup = NameSupply(model.vars, prefix="W")
    return [sup.fresh("W") for _ in range(k)]


def _first_hinted(f):
    if isinstance(f, Exists) and f.hint is not None:
        return f
    if isinstance(f, (Exists, Forall, Not)):
        return _first_hinted(f.body)
    if isinstance(f, (And, Or)):
        for a in f.args:
            hit = _first_hinted(a)
            if hit is not None:
                return hit
    if isinstance(f, (Implies, Iff)):
        return _first_hinted(f.left) or _first_hinted(f.right)
    return None
