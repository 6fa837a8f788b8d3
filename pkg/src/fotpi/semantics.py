"""Direct semantics used by the macro oracles.

Everything here works on FiniteModel columns with exact integer weights.
Events are frozensets of positive-mass atom indices, so two events are
equal exactly when they agree up to a null set.
"""
from collections import defaultdict
from fractions import Fraction

from .model import check_indep, is_function_of, term_names


def names_of(*terms):
    out = []
    for t in terms:
        out.extend(term_names(t))
    return tuple(out)


def is_const(m, t):
    return m.support_size(t) <= 1


def is_unif(m, t):
    w = set(m.dist(t).values())
    return len(w) <= 1


def card(m, t):
    return m.support_size(t)


def lt_iota(m, s, t):
    return is_function_of(m, s, t) and not is_function_of(m, t, s)


def mutually_indep(m, terms):
    return all(check_indep(m, terms[i], names_of(*terms[:i])) for i in range(1, len(terms)))


def min_mass(m, t):
    """Smaller mass of a variable with at most two values (0 if constant)."""
    d = sorted(m.dist(t).values())
    return Fraction(d[0], m.den) if len(d) == 2 else Fraction(0)


def classes(m, t):
    """value -> frozenset of positive-mass atoms."""
    out = defaultdict(set)
    for i, (v, w) in enumerate(zip(m.column(t), m.weights)):
        if w:
            out[v].add(i)
    return {v: frozenset(s) for v, s in out.items()}


def positive_atoms(m):
    return frozenset(i for i, w in enumerate(m.weights) if w)


def prob(m, event):
    return Fraction(sum(m.weights[i] for i in event), m.den)


def smi(m, x, y):
    """y is (informationally) the indicator of one positive-mass value of x."""
    if is_const(m, x) and is_const(m, y):
        return True
    if card(m, y) != 2 or not is_function_of(m, y, x):
        return False
    yc = list(classes(m, y).values())
    xc = classes(m, x).values()
    return any(c in xc for c in yc)


def nat_value(m, t):
    """Integer represented by t (Bern(1/3) for zero, Unif[k] for k), else None."""
    d = sorted(m.dist(t).values())
    if len(d) == 2 and d[1] == 2 * d[0]:
        return 0
    if len(set(d)) == 1:
        return len(d)
    return None


def event_of(m, d):
    """Event represented by d, or None when d represents no event."""
    dist = m.dist(d)
    ws = sorted(dist.values())
    if len(set(ws)) == 1:
        return positive_atoms(m) if len(ws) >= 2 else frozenset()
    if len(ws) < 3 or ws[-1] == ws[-2] or len(set(ws[:-1])) != 1:
        return None
    top = max(dist, key=dist.get)
    return frozenset(i for i, (v, w) in enumerate(zip(m.column(d), m.weights)) if w and v != top)


def indicator_of(m, c, event):
    """c is informationally the indicator of event (constant for trivial ones)."""
    pos = positive_atoms(m)
    if not event or event == pos:
        return is_const(m, c)
    cl = list(classes(m, c).values())
    return len(cl) == 2 and (event in cl)


def label_sizes(m, a, l):
    """For a label l of a: value of a -> number of l-values (uniform), else None."""
    if not is_function_of(m, a, l):
        return None
    out = {}
    ac = m.column(a)
    lc = m.column(l)
    rows = defaultdict(lambda: defaultdict(int))
    for x, y, w in zip(ac, lc, m.weights):
        if w:
            rows[x][y] += w
    for x, row in rows.items():
        ws = set(row.values())
        if len(ws) != 1 or len(row) < 3:
            return None
        out[x] = len(row)
    if len(set(out.values())) != len(out):
        return None
    return out


def labelled_classes(m, a, l):
    """label value -> event, for a labelled by l; None if l is not a label."""
    sizes = label_sizes(m, a, l)
    if sizes is None:
        return None
    cl = classes(m, a)
    return {s: cl[x] for x, s in sizes.items()}
