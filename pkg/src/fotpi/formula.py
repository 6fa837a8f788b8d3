"""Formula syntax: terms, atoms, connectives, quantifiers and macro calls.

All nodes are immutable and hashable.  Quantifier nodes may carry a witness
hint (key, args) naming a constructor; hints do not take part in equality.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class FormulaError(ValueError):
    pass


# -- terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def names(self):
        return (self.name,)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Join:
    parts: tuple

    def names(self):
        return tuple(p.name for p in self.parts)

    def __str__(self):
        return "join(" + ", ".join(p.name for p in self.parts) + ")"


def join(*terms):
    """Flattened, deduplicated, sorted join; a single part collapses to a Var."""
    names = set()
    for t in terms:
        if isinstance(t, str):
            t = Var(t)
        names.update(t.names())
    if not names:
        raise FormulaError("join of no terms")
    if len(names) == 1:
        return Var(names.pop())
    return Join(tuple(Var(n) for n in sorted(names)))


def as_term(t):
    if isinstance(t, str):
        return Var(t)
    if isinstance(t, (Var, Join)):
        return t
    if isinstance(t, (tuple, list)):
        return join(*t)
    raise FormulaError(f"not a term: {t!r}")


def term_key(t):
    return t.names()


def is_term(x):
    return isinstance(x, (Var, Join))


# -- formulae -------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        from .parser import to_text
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Indep(Formula):
    left: object
    right: object

    def __post_init__(self):
        a, b = as_term(self.left), as_term(self.right)
        if term_key(b) < term_key(a):
            a, b = b, a
        object.__setattr__(self, "left", a)
        object.__setattr__(self, "right", b)


def indep(a, b):
    return Indep(a, b)


def empty(x):
    """x is almost surely constant."""
    return Indep(x, x)


CMPS = (">=", ">", "=")


@dataclass(frozen=True)
class EntropyLinear(Formula):
    """sum of coeff * H(subset) compared with zero."""
    terms: tuple
    cmp: str = ">="

    def __post_init__(self):
        if self.cmp not in CMPS:
            raise FormulaError(f"bad comparison {self.cmp}")
        acc = {}
        for subset, c in (self.terms.items() if isinstance(self.terms, dict) else self.terms):
            names = set()
            for t in ((subset,) if isinstance(subset, (str, Var, Join)) else subset):
                names.update(as_term(t).names())
            if not names:
                raise FormulaError("entropy of an empty subset")
            key = tuple(sorted(names))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        items = tuple(sorted((k, v) for k, v in acc.items() if v))
        if not items:
            raise FormulaError("entropy expression with no nonzero coefficient")
        object.__setattr__(self, "terms", items)

    def as_dict(self):
        return dict(self.terms)

    def names(self):
        return sorted({n for k, _ in self.terms for n in k})


def entropy(terms, cmp=">="):
    """EntropyLinear, or a constant when every coefficient cancels (which
    happens when macro arguments share variables)."""
    acc = {}
    for subset, c in (terms.items() if isinstance(terms, dict) else terms):
        names = set()
        for t in ((subset,) if isinstance(subset, (str, Var, Join)) else subset):
            names.update(as_term(t).names())
        key = tuple(sorted(names))
        acc[key] = acc.get(key, 0) + Fraction(c)
    if any(acc.values()):
        return EntropyLinear(terms, cmp)
    if cmp not in CMPS:
        raise FormulaError(f"bad comparison {cmp}")
    return FALSE if cmp == ">" else TRUE


@dataclass(frozen=True)
class CondDistRel(Formula):
    """lhs_target | lhs_cond r~ rhs_target | rhs_cond (conditioning joint)."""
    lhs_cond: tuple
    lhs_target: object
    rhs_cond: tuple
    rhs_target: object

    def __post_init__(self):
        object.__setattr__(self, "lhs_cond", tuple(as_term(t) for t in self.lhs_cond))
        object.__setattr__(self, "rhs_cond", tuple(as_term(t) for t in self.rhs_cond))
        object.__setattr__(self, "lhs_target", as_term(self.lhs_target))
        object.__setattr__(self, "rhs_target", as_term(self.rhs_target))
        if len(self.lhs_cond) != len(self.rhs_cond):
            raise FormulaError("conditional relation needs equally many conditions on both sides")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula
    hint: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula
    hint: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class Lambda:
    """Formula parameter: a formula with named holes."""
    params: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))

    def apply(self, *args):
        if len(args) != len(self.params):
            raise FormulaError(f"formula parameter expects {len(self.params)} arguments")
        return substitute(self.body, {p: as_term(a) for p, a in zip(self.params, args)})


@dataclass(frozen=True)
class MacroCall(Formula):
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


ATOMS = (Indep, EntropyLinear, CondDistRel, Const)
QUANTS = (Exists, Forall)


def conj(*fs):
    fs = [f for f in fs if f != TRUE]
    if any(f == FALSE for f in fs):
        return FALSE
    if not fs:
        return TRUE
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs):
    fs = [f for f in fs if f != FALSE]
    if any(f == TRUE for f in fs):
        return TRUE
    if not fs:
        return FALSE
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def exists(vs, body, hint=None):
    vs = (vs,) if isinstance(vs, str) else tuple(vs)
    return Exists(vs, body, hint) if vs else body


def forall(vs, body, hint=None):
    vs = (vs,) if isinstance(vs, str) else tuple(vs)
    return Forall(vs, body, hint) if vs else body


def call(name, *args):
    return MacroCall(name, tuple(as_term(a) if isinstance(a, str) else a for a in args))


# -- traversal ------------------------------------------------------------


def _arg_names(a):
    if is_term(a):
        return set(a.names())
    if isinstance(a, Lambda):
        return free_vars(a.body) - set(a.params)
    fv = getattr(a, "free_rv", None)
    if fv is not None:
        return set(fv())
    return set()


def free_vars(f):
    """Free random-variable names of a formula."""
    if isinstance(f, Indep):
        return set(f.left.names()) | set(f.right.names())
    if isinstance(f, EntropyLinear):
        return set(f.names())
    if isinstance(f, CondDistRel):
        out = set(f.lhs_target.names()) | set(f.rhs_target.names())
        for t in f.lhs_cond + f.rhs_cond:
            out.update(t.names())
        return out
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTS):
        return free_vars(f.body) - set(f.vars)
    if isinstance(f, MacroCall):
        out = set()
        for a in f.args:
            out |= _arg_names(a)
        return out
    raise FormulaError(f"not a formula: {f!r}")


def all_names(f, acc=None):
    """Every random-variable name occurring in f, bound or free."""
    acc = set() if acc is None else acc
    if isinstance(f, QUANTS):
        acc.update(f.vars)
        all_names(f.body, acc)
    elif isinstance(f, Not):
        all_names(f.body, acc)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            all_names(a, acc)
    elif isinstance(f, (Implies, Iff)):
        all_names(f.left, acc)
        all_names(f.right, acc)
    elif isinstance(f, MacroCall):
        for a in f.args:
            if isinstance(a, Lambda):
                acc.update(a.params)
                all_names(a.body, acc)
            else:
                acc |= _arg_names(a)
    else:
        acc |= free_vars(f)
    return acc


class NameSupply:
    """Deterministic fresh names avoiding a given set."""

    def __init__(self, avoid=(), prefix="U"):
        self.avoid = set(avoid)
        self.prefix = prefix
        self._n = count(1)

    def fresh(self, base=None):
        base = (base or self.prefix).split("_")[0].rstrip("'") or self.prefix
        while True:
            name = f"{base}_{next(self._n)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def add(self, names):
        self.avoid.update(names)


def _sub_term(t, m):
    if isinstance(t, Var):
        return m.get(t.name, t)
    hit = [m.get(p.name, p) for p in t.parts]
    return join(*hit)


def substitute(f, m, supply=None):
    """Capture-avoiding replacement of free variable names by terms."""
    m = {k: as_term(v) for k, v in m.items() if as_term(v) != Var(k)}
    if not m:
        return f
    if supply is None:
        avoid = all_names(f)
        for v in m.values():
            avoid.update(v.names())
        avoid.update(m)
        supply = NameSupply(avoid)
    return _subst(f, m, supply)


def _subst_arg(a, m, supply):
    if is_term(a):
        return _sub_term(a, m)
    if isinstance(a, Lambda):
        inner = {k: v for k, v in m.items() if k not in a.params}
        clash = {p for p in a.params if any(p in v.names() for v in inner.values())}
        params = a.params
        body = a.body
        if clash:
            ren = {p: Var(supply.fresh(p)) for p in clash}
            body = _subst(body, ren, supply)
            params = tuple(ren[p].name if p in ren else p for p in params)
        return Lambda(params, _subst(body, inner, supply))
    sub = getattr(a, "subst_rv", None)
    if sub is not None:
        return sub({k: v for k, v in m.items()})
    return a


def _subst_hint(h, m):
    if h is None:
        return None
    key, args = h
    return (key, tuple(_sub_term(a, m) if is_term(a) else a for a in args))


def _subst(f, m, supply):
    if not m:
        return f
    if isinstance(f, Indep):
        return Indep(_sub_term(f.left, m), _sub_term(f.right, m))
    if isinstance(f, EntropyLinear):
        return EntropyLinear(tuple((tuple(_sub_term(Var(n), m) for n in k), c) for k, c in f.terms), f.cmp)
    if isinstance(f, CondDistRel):
        return CondDistRel(tuple(_sub_term(t, m) for t in f.lhs_cond), _sub_term(f.lhs_target, m),
                           tuple(_sub_term(t, m) for t in f.rhs_cond), _sub_term(f.rhs_target, m))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.body, m, supply))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_subst(a, m, supply) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_subst(f.left, m, supply), _subst(f.right, m, supply))
    if isinstance(f, QUANTS):
        inner = {k: v for k, v in m.items() if k not in f.vars}
        if not inner:
            return f
        targets = set()
        for v in inner.values():
            targets.update(v.names())
        vs = list(f.vars)
        body = f.body
        hint = f.hint
        clash = [v for v in vs if v in targets]
        if clash:
            ren = {v: Var(supply.fresh(v)) for v in clash}
            body = _subst(body, ren, supply)
            hint = _subst_hint(hint, ren)
            vs = [ren[v].name if v in ren else v for v in vs]
        return type(f)(tuple(vs), _subst(body, inner, supply), _subst_hint(hint, inner))
    if isinstance(f, MacroCall):
        return MacroCall(f.name, tuple(_subst_arg(a, m, supply) for a in f.args))
    raise FormulaError(f"not a formula: {f!r}")


def rename_bound_apart(f, supply=None, avoid=()):
    """Alpha-rename so that every binder introduces a distinct name that is
    also distinct from every free name and from avoid."""
    if supply is None:
        supply = NameSupply(all_names(f) | set(avoid))
    else:
        supply.add(avoid)
    used = set(free_vars(f)) | set(avoid)
    return _apart(f, supply, used)


def _apart(f, supply, used):
    if isinstance(f, QUANTS):
        ren = {}
        vs = []
        for v in f.vars:
            if v in used:
                nv = supply.fresh(v)
                ren[v] = Var(nv)
                vs.append(nv)
            else:
                vs.append(v)
            used.add(vs[-1])
        body = _subst(f.body, ren, supply) if ren else f.body
        hint = _subst_hint(f.hint, ren) if ren else f.hint
        return type(f)(tuple(vs), _apart(body, supply, used), hint)
    if isinstance(f, Not):
        return Not(_apart(f.body, supply, used))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_apart(a, supply, used) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_apart(f.left, supply, used), _apart(f.right, supply, used))
    return f


def size(f):
    """Node count."""
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, QUANTS):
        return 1 + size(f.body)
    return 1


def contains_macros(f):
    if isinstance(f, MacroCall):
        return True
    if isinstance(f, Not):
        return contains_macros(f.body)
    if isinstance(f, (And, Or)):
        return any(contains_macros(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return contains_macros(f.left) or contains_macros(f.right)
    if isinstance(f, QUANTS):
        return contains_macros(f.body)
    return False


def contains_joins(f):
    if isinstance(f, Indep):
        return isinstance(f.left, Join) or isinstance(f.right, Join)
    if isinstance(f, Not):
        return contains_joins(f.body)
    if isinstance(f, (And, Or)):
        return any(contains_joins(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return contains_joins(f.left) or contains_joins(f.right)
    if isinstance(f, QUANTS):
        return contains_joins(f.body)
    return False
