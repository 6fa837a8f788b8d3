"""Macro definitions, argument checking and expansion."""
from ..arith import APred
from ..formula import (And, Exists, Forall, FormulaError, Iff, Implies,
                       Lambda, MacroCall, NameSupply, Not, Or, all_names, as_term, exists,
                       forall, is_term)

KINDS = ("rv", "nat", "formula", "arith")


class MacroError(FormulaError):
    pass


class MacroDef:
    """A named derived predicate.

    params is a tuple of kinds; a trailing '*' on the last kind makes it
    variadic (at least min_var arguments).  build(ctx, *args) returns the
    defining formula, which may use other macros.  hbuild, when given, is an
    equivalent definition for the entropy hierarchy.  oracle(model, *args)
    decides the predicate directly on a finite model.
    """

    def __init__(self, name, params, build, hbuild=None, oracle=None, evaluable=True,
                 min_nat=None, min_var=1, doc=""):
        self.name = name
        self.params = tuple(params)
        self.build = build
        self.hbuild = hbuild
        self.oracle = oracle
        self.evaluable = evaluable
        self.min_nat = min_nat or {}
        self.min_var = min_var
        self.doc = doc

    def __repr__(self):
        return f"MacroDef({self.name}, {self.params})"

    @property
    def variadic(self):
        return bool(self.params) and self.params[-1].endswith("*")

    def kinds_for(self, n):
        if not self.variadic:
            return self.params
        fixed = self.params[:-1]
        return fixed + (self.params[-1][:-1],) * (n - len(fixed))

    def check(self, args):
        n = len(args)
        if self.variadic:
            need = len(self.params) - 1 + self.min_var
            if n < need:
                raise MacroError(f"{self.name} expects at least {need} arguments, got {n}")
        elif n != len(self.params):
            raise MacroError(f"{self.name} expects {len(self.params)} arguments, got {n}")
        for i, (kind, a) in enumerate(zip(self.kinds_for(n), args)):
            ok = {"rv": is_term(a),
                  "nat": isinstance(a, int) and not isinstance(a, bool) and a >= 0,
                  "formula": isinstance(a, Lambda),
                  "arith": isinstance(a, APred)}[kind]
            if not ok:
                raise MacroError(f"{self.name}: argument {i + 1} must be of kind {kind}")
            if kind == "nat" and a < self.min_nat.get(i, 0):
                raise MacroError(f"{self.name}: argument {i + 1} must be at least {self.min_nat[i]}")


class Registry:
    def __init__(self):
        self.defs = {}
        self.witnesses = {}
        # keys whose candidates are, up to what the quantified body can
        # observe, every possible witness
        self.complete = set()

    def register(self, d):
        if d.name in self.defs:
            raise MacroError(f"macro {d.name} already registered")
        self.defs[d.name] = d
        return d

    def define(self, name, params, **kw):
        """Decorator form of register."""
        def wrap(fn):
            self.register(MacroDef(name, params, fn, **kw))
            return fn
        return wrap

    def hform(self, name):
        def wrap(fn):
            self.get(name).hbuild = fn
            return fn
        return wrap

    def oracle(self, name):
        def wrap(fn):
            self.get(name).oracle = fn
            return fn
        return wrap

    def get(self, name):
        try:
            return self.defs[name]
        except KeyError:
            raise MacroError(f"unknown macro {name!r}") from None

    def __contains__(self, name):
        return name in self.defs

    def names(self):
        return sorted(self.defs)

    def check_call(self, name, args):
        self.get(name).check(list(args))

    # -- expansion

    def expand(self, name, args, form="pi"):
        """One level of expansion of name(args)."""
        d = self.get(name)
        args = [as_term(a) if isinstance(a, str) else a for a in args]
        d.check(args)
        avoid = set()
        for a in args:
            if is_term(a):
                avoid.update(a.names())
            elif isinstance(a, Lambda):
                avoid |= all_names(a.body) | set(a.params)
        ctx = Ctx(self, form, avoid)
        builder = d.hbuild if (form == "H" and d.hbuild is not None) else d.build
        return builder(ctx, *args)

    def expand_all(self, f, form="pi", limit=200000):
        """Recursively expand every macro call.  Raises MacroError when the
        result would exceed limit nodes."""
        budget = [limit]
        return self._expand_all(f, form, budget)

    def _expand_all(self, f, form, budget):
        budget[0] -= 1
        if budget[0] < 0:
            raise MacroError("expansion too large; classify macro calls in sugared mode instead")
        if isinstance(f, MacroCall):
            return self._expand_all(self.expand(f.name, f.args, form), form, budget)
        if isinstance(f, Not):
            return Not(self._expand_all(f.body, form, budget))
        if isinstance(f, (And, Or)):
            return type(f)(tuple(self._expand_all(a, form, budget) for a in f.args))
        if isinstance(f, (Implies, Iff)):
            return type(f)(self._expand_all(f.left, form, budget), self._expand_all(f.right, form, budget))
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.vars, self._expand_all(f.body, form, budget), f.hint)
        return f

    def register_witness(self, key, constructor, complete=False):
        if key in self.witnesses:
            raise MacroError(f"witness constructor {key!r} already registered")
        self.witnesses[key] = constructor
        if complete:
            self.complete.add(key)


class Ctx:
    """Per-expansion helper handing out fresh names and macro calls."""

    def __init__(self, registry, form, avoid):
        self.registry = registry
        self.form = form
        self.supply = NameSupply(avoid)

    def fresh(self, base="U"):
        return self.supply.fresh(base)

    def fresh_many(self, *bases):
        return [self.fresh(b) for b in bases]

    def __call__(self, name, *args):
        args = tuple(as_term(a) if isinstance(a, (str, tuple, list)) else a for a in args)
        self.registry.get(name).check(list(args))
        return MacroCall(name, args)

    def level(self, f):
        from ..hierarchy import level_of
        return level_of(f, self.form, self.registry)

    def describe(self, vs, defn, body):
        """Definite description: the vs uniquely fixed by defn satisfy body.

        Both exists-and and forall-implies readings are equivalent; the one
        with the lower level is used (exists on ties).
        """
        a = exists(vs, And((defn, body)))
        b = forall(vs, Implies(defn, body))
        la, lb = self.level(a), self.level(b)
        ka = (min(la), max(la))
        kb = (min(lb), max(lb))
        return b if kb < ka else a


def rv_names(args):
    out = []
    for a in args:
        if is_term(a):
            out.extend(a.names())
    return out


def h_indep(a, b):
    """I(a;b) = 0 as an entropy atom."""
    from ..formula import entropy, join
    a, b = as_term(a), as_term(b)
    return entropy(((a, 1), (b, 1), (join(a, b), -1)), "=")


REGISTRY = Registry()
