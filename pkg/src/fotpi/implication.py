"""Marginal independence implication by closure under the finite axiom
system: symmetry, decomposition and mixing

    X _|_ Y  and  XY _|_ W   =>   X _|_ YW.

Statements are stored as pairs of disjoint nonempty bitmasks over the
variable indices, normalised so that the smaller mask comes first.
"""
from dataclasses import dataclass
from itertools import combinations

from .formula import Indep, Var, join


class ImplicationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class IndepStatement:
    left: frozenset
    right: frozenset

    def __post_init__(self):
        left, right = frozenset(self.left), frozenset(self.right)
        if not left or not right:
            raise ImplicationError("independence statements need two nonempty sides")
        if left & right:
            raise ImplicationError("independence statement sides must be disjoint")
        if sorted(right) < sorted(left):
            left, right = right, left
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def masks(self):
        a, b = _mask(self.left), _mask(self.right)
        return (a, b) if a < b else (b, a)

    def as_formula(self, names):
        def term(side):
            return join(*[Var(names[i]) for i in sorted(side)])
        return Indep(term(self.left), term(self.right))

    def text(self, names):
        return "".join(names[i] for i in sorted(self.left)) + " _|_ " + "".join(names[i] for i in sorted(self.right))


def _mask(side):
    return sum(1 << i for i in side)


def _norm(a, b):
    return (a, b) if a < b else (b, a)


def _submasks(m):
    s = m
    while s:
        yield s
        s = (s - 1) & m


def statement(left, right):
    return IndepStatement(frozenset(left), frozenset(right))


def all_statements(n):
    """Every statement over n variables, each once."""
    out = set()
    full = (1 << n) - 1
    for a in range(1, full + 1):
        for b in _submasks(full & ~a):
            out.add(_norm(a, b))
    return sorted(out)


def _from_masks(a, b):
    return IndepStatement(frozenset(i for i in range(a.bit_length()) if a >> i & 1),
                          frozenset(i for i in range(b.bit_length()) if b >> i & 1))


def closure(statements, n=None, cap=8):
    """Least set of statements containing the given ones and closed under the
    three rules; returned as a set of normalised mask pairs."""
    pairs = set()
    for s in statements:
        pairs.add(s.masks() if isinstance(s, IndepStatement) else _norm(*s))
    top = max((max(a, b).bit_length() for a, b in pairs), default=0)
    n = top if n is None else n
    if n > cap:
        raise ImplicationError(f"{n} variables exceed the cap of {cap}")
    if top > n:
        raise ImplicationError("statement mentions a variable beyond n")
    closed = set()
    work = list(pairs)
    by_union = {}
    by_side = {}
    while work:
        a, b = work.pop()
        if (a, b) in closed:
            continue
        closed.add((a, b))
        by_union.setdefault(a | b, []).append((a, b))
        by_side.setdefault(a, []).append(b)
        by_side.setdefault(b, []).append(a)
        new = [_norm(a2, b2) for a2 in _submasks(a) for b2 in _submasks(b)]
        # this statement as X _|_ Y, a stored one as XY _|_ W
        for w in by_side.get(a | b, ()):
            new += [_norm(a, b | w), _norm(b, a | w)]
        # this statement as XY _|_ W, a stored one as X _|_ Y
        for xy, w in ((a, b), (b, a)):
            for x, y in by_union.get(xy, ()):
                new += [_norm(x, y | w), _norm(y, x | w)]
        work.extend(t for t in new if t not in closed)
    return closed


def decide_indep_implication(antecedents, consequent, n=None, cap=8):
    """True iff the antecedents imply the consequent for all distributions."""
    ants = [s if isinstance(s, IndepStatement) else statement(*s) for s in antecedents]
    cons = consequent if isinstance(consequent, IndepStatement) else statement(*consequent)
    need = max([max(s.left | s.right) + 1 for s in ants + [cons]])
    n = need if n is None else n
    if n < need:
        raise ImplicationError("statement mentions a variable beyond n")
    if n > cap:
        raise ImplicationError(f"{n} variables exceed the cap of {cap}")
    return cons.masks() in closure(ants, n, cap)


def statements_from_formula(f, names):
    """Statement of an independence atom whose sides are variables or joins."""
    if not isinstance(f, Indep):
        raise ImplicationError("expected an independence atom")
    idx = {v: i for i, v in enumerate(names)}
    try:
        return statement([idx[v] for v in f.left.names()], [idx[v] for v in f.right.names()])
    except KeyError as e:
        raise ImplicationError(f"unknown variable {e.args[0]}") from None


def instances(n, max_antecedents):
    """All (antecedent tuple, consequent) pairs over n variables."""
    stmts = [_from_masks(a, b) for a, b in all_statements(n)]
    for k in range(max_antecedents + 1):
        for ants in combinations(stmts, k):
            for c in stmts:
                yield ants, c
