"""Quantifier-alternation levels in the independence (pi) and entropy (H)
hierarchies.

Levels are computed by the syntactic algebra: atoms (0, 0); negation swaps;
conjunction and disjunction take componentwise maxima; an existential block
whose variables occur in its body maps (s, p) to s' = max(1, min(s, p + 1)),
p' = s' + 1, and universal blocks dually.  Macro calls are summarised once per
argument pattern, so shared subformulae are never re-expanded.
"""
from dataclasses import dataclass

from .arith import APred, to_text as arith_text
from .formula import (And, CondDistRel, Const, EntropyLinear, Exists, Forall, FormulaError, Iff, Implies,
                      Indep, Lambda, MacroCall, Not, Or, Var, is_term, substitute)


@dataclass(frozen=True)
class HierarchyLevel:
    sigma: int
    pi: int
    hierarchy: str = "pi"

    def __str__(self):
        if self.sigma < self.pi:
            return f"Sigma {self.sigma}"
        if self.pi < self.sigma:
            return f"Pi {self.pi}"
        return f"Delta {self.sigma}"

    @property
    def pair(self):
        return (self.sigma, self.pi)

    def to_dict(self):
        return {"sigma": self.sigma, "pi": self.pi, "hierarchy": self.hierarchy, "class": str(self)}


def exists_level(s, p):
    s2 = max(1, min(s, p + 1))
    return s2, s2 + 1


def forall_level(s, p):
    p2 = max(1, min(p, s + 1))
    return p2 + 1, p2


def _canon_call(call):
    """Argument pattern of a macro call: names replaced by first-occurrence
    indices.  Returns (key, names in index order)."""
    idx = {}
    key = []
    for a in call.args:
        if is_term(a):
            key.append(("t", tuple(idx.setdefault(n, len(idx)) for n in a.names())))
        elif isinstance(a, bool):
            raise FormulaError("boolean macro argument")
        elif isinstance(a, int):
            key.append(("n", a))
        elif isinstance(a, Lambda):
            from .formula import free_vars
            from .parser import to_text
            free = sorted(free_vars(a.body) - set(a.params))
            for n in free:
                idx.setdefault(n, len(idx))
            ren = {n: Var(f"v{idx[n]}__") for n in free}
            ren.update({p: Var(f"p{i}__") for i, p in enumerate(a.params)})
            key.append(("f", len(a.params), to_text(substitute(a.body, ren))))
        elif isinstance(a, APred):
            key.append(("a", arith_text(a)))
        else:
            raise FormulaError(f"bad macro argument {a!r}")
    names = sorted(idx, key=idx.get)
    return (call.name, tuple(key)), names


class LevelEngine:
    """Memoised level and free-variable computation for one registry."""

    def __init__(self, registry):
        self.registry = registry
        self.memo = {}

    def call_info(self, call, form):
        key, names = _canon_call(call)
        mk = (form, key)
        hit = self.memo.get(mk)
        if hit is None:
            body = self.registry.expand(call.name, call.args, form)
            s, p, fv = self.info(body, form)
            pos = {n: i for i, n in enumerate(names)}
            hit = (s, p, frozenset(pos[n] for n in fv if n in pos))
            self.memo[mk] = hit
        s, p, used = hit
        return s, p, {names[i] for i in used}

    def info(self, f, form):
        """(sigma, pi, free names) of f."""
        if isinstance(f, Indep):
            return 0, 0, set(f.left.names()) | set(f.right.names())
        if isinstance(f, (EntropyLinear, CondDistRel)):
            if form != "H":
                raise FormulaError("entropy and conditional-distribution atoms belong to the H hierarchy")
            from .formula import free_vars
            return 0, 0, free_vars(f)
        if isinstance(f, Const):
            return 0, 0, set()
        if isinstance(f, Not):
            s, p, fv = self.info(f.body, form)
            return p, s, fv
        if isinstance(f, (And, Or)):
            s = p = 0
            fv = set()
            for a in f.args:
                s1, p1, f1 = self.info(a, form)
                s, p = max(s, s1), max(p, p1)
                fv |= f1
            return s, p, fv
        if isinstance(f, Implies):
            s1, p1, f1 = self.info(f.left, form)
            s2, p2, f2 = self.info(f.right, form)
            return max(p1, s2), max(s1, p2), f1 | f2
        if isinstance(f, Iff):
            s1, p1, f1 = self.info(f.left, form)
            s2, p2, f2 = self.info(f.right, form)
            m = max(s1, p1, s2, p2)
            return m, m, f1 | f2
        if isinstance(f, (Exists, Forall)):
            s, p, fv = self.info(f.body, form)
            if not fv & set(f.vars):
                return s, p, fv
            s, p = exists_level(s, p) if isinstance(f, Exists) else forall_level(s, p)
            return s, p, fv - set(f.vars)
        if isinstance(f, MacroCall):
            return self.call_info(f, form)
        raise FormulaError(f"not a formula: {f!r}")


_ENGINES = {}


def engine(registry):
    e = _ENGINES.get(id(registry))
    if e is None or e.registry is not registry:
        e = _ENGINES[id(registry)] = LevelEngine(registry)
    return e


def _default_registry(registry):
    if registry is None:
        from .macros import REGISTRY
        return REGISTRY
    return registry


def level_of(f, form="pi", registry=None):
    """(sigma, pi) of f, summarising macro calls per argument pattern."""
    s, p, _ = engine(_default_registry(registry)).info(f, form)
    return s, p


def level(f, hierarchy="pi"):
    """Level of a macro-free formula."""
    from .formula import contains_macros
    if contains_macros(f):
        raise FormulaError("unexpanded macro call; expand first or classify in sugared mode")
    s, p, _ = LevelEngine(None).info(f, "H" if hierarchy == "H" else "pi")
    return HierarchyLevel(s, p, hierarchy)


def classify(f, hierarchy="pi", mode="strict", registry=None):
    """Least syntactic (sigma, pi) of f in the chosen hierarchy.

    pi/strict expands every macro and removes joins before counting.
    sugared mode keeps macro calls and joins and summarises each macro
    once.  In the H hierarchy strict mode expands fully with entropy forms.
    """
    reg = _default_registry(registry)
    if hierarchy not in ("pi", "H"):
        raise FormulaError(f"unknown hierarchy {hierarchy!r}")
    if mode not in ("strict", "sugared"):
        raise FormulaError(f"unknown mode {mode!r}")
    if hierarchy == "pi" and mode == "strict":
        from .normal import eliminate_joins
        g = eliminate_joins(reg.expand_all(f, "pi"), "strict_pi", registry=reg)
        return level(g, "pi")
    if mode == "strict":
        return level(reg.expand_all(f, "H"), "H")
    s, p = level_of(f, hierarchy, reg)
    return HierarchyLevel(s, p, hierarchy)
