"""Three-valued evaluation of formulae on finite models.

Quantifiers range over a finite candidate family of model extensions:
hint-driven witnesses first, then functions of the (refined) atom
partition, then variables independent of everything present, then
binary kernels with masses on a rational grid.  In sound mode only
evidence found decides a quantifier; bounded mode takes the family as the
whole domain.
"""
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from .formula import (And, CondDistRel, Const, EntropyLinear, Exists, Forall, FormulaError, Iff, Implies, Indep,
                      MacroCall, Not, Or, free_vars, rename_bound_apart)
from .model import (EntropySign, FiniteModel, ModelError, check_indep, cond_dist_relabel, corpus, entropy_sign,
                    restricted_growth)


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class Budget:
    max_refine: int = 2
    max_support: int = 4
    max_denominator: int = 4
    max_candidates: int = 200000
    use_witness_hints: bool = True
    max_atoms: int = 8

    def __post_init__(self):
        for k in ("max_refine", "max_support", "max_denominator", "max_candidates", "max_atoms"):
            if getattr(self, k) < 1:
                raise ValueError(f"{k} must be at least 1")


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass
class TruthValue3:
    verdict: Verdict
    evidence: FiniteModel = None
    exhausted: bool = False
    note: str = ""

    def __bool__(self):
        raise TypeError("use .verdict or is_true/is_false on a three-valued result")

    @property
    def is_true(self):
        return self.verdict is Verdict.TRUE

    @property
    def is_false(self):
        return self.verdict is Verdict.FALSE

    @property
    def is_unknown(self):
        return self.verdict is Verdict.UNKNOWN

    def negate(self):
        flip = {Verdict.TRUE: Verdict.FALSE, Verdict.FALSE: Verdict.TRUE, Verdict.UNKNOWN: Verdict.UNKNOWN}
        return TruthValue3(flip[self.verdict], self.evidence, self.exhausted, self.note)

    def to_dict(self):
        out = {"verdict": str(self.verdict)}
        if self.evidence is not None:
            out["evidence"] = self.evidence.to_dict()
        if self.exhausted:
            out["budget_exhausted"] = True
        if self.note:
            out["note"] = self.note
        return out


def _tv(b, evidence=None):
    return TruthValue3(Verdict.TRUE if b else Verdict.FALSE, evidence)


T, F, U = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN


def register_witness_constructor(key, constructor, registry=None, complete=False):
    """Make constructor(model, new_names, *hint_args) -> [extensions] available
    to quantifiers carrying the hint key.  complete=True promises that the
    list holds every witness the quantified body can tell apart."""
    _registry(registry).register_witness(key, constructor, complete)


def _registry(registry):
    if registry is None:
        from .macros import REGISTRY
        return REGISTRY
    return registry


class Evaluator:
    def __init__(self, mode="bounded", budget=None, registry=None, use_oracles=True):
        if mode not in ("sound", "bounded"):
            raise ValueError(f"unknown evaluation mode {mode!r}")
        self.mode = mode
        self.budget = budget or Budget()
        self.registry = _registry(registry)
        self.use_oracles = use_oracles
        self.spent = 0

    # -- connectives

    def eval(self, f, m):
        if isinstance(f, Const):
            return _tv(f.value)
        if isinstance(f, Indep):
            return _tv(check_indep(m, f.left, f.right))
        if isinstance(f, EntropyLinear):
            sign = entropy_sign(m, {k: c for k, c in f.terms})
            ok = {">=": sign is not EntropySign.NEGATIVE, ">": sign is EntropySign.POSITIVE,
                  "=": sign is EntropySign.ZERO}[f.cmp]
            return _tv(ok)
        if isinstance(f, CondDistRel):
            return _tv(cond_dist_relabel(m, (f.lhs_target, f.lhs_cond), (f.rhs_target, f.rhs_cond)))
        if isinstance(f, Not):
            return self.eval(f.body, m).negate()
        if isinstance(f, And):
            return self._junction(f.args, m, F)
        if isinstance(f, Or):
            return self._junction(f.args, m, T)
        if isinstance(f, Implies):
            return self._junction((Not(f.left), f.right), m, T)
        if isinstance(f, Iff):
            a, b = self.eval(f.left, m), self.eval(f.right, m)
            if U in (a.verdict, b.verdict):
                return TruthValue3(U, exhausted=a.exhausted or b.exhausted)
            return _tv(a.verdict is b.verdict)
        if isinstance(f, (Exists, Forall)):
            return self._quant(f, m)
        if isinstance(f, MacroCall):
            return self._macro(f, m)
        raise FormulaError(f"not a formula: {f!r}")

    def _junction(self, args, m, decisive):
        unknown = None
        for a in args:
            r = self.eval(a, m)
            if r.verdict is decisive:
                return r
            if r.verdict is U and unknown is None:
                unknown = r
        if unknown is not None:
            return unknown
        return TruthValue3(F if decisive is T else T)

    def _macro(self, f, m):
        d = self.registry.get(f.name)
        if self.use_oracles and d.oracle is not None:
            return _tv(d.oracle(m, *f.args))
        if not d.evaluable:
            return TruthValue3(U, note=f"{f.name} is not evaluable")
        body = rename_bound_apart(self.registry.expand(f.name, f.args), avoid=m.vars)
        return self.eval(body, m)

    # -- quantifiers

    def _charge(self):
        self.spent += 1
        if self.spent > self.budget.max_candidates:
            raise BudgetExhausted(f"more than {self.budget.max_candidates} candidates examined")

    def _quant(self, f, m):
        is_ex = isinstance(f, Exists)
        decisive = T if is_ex else F
        keep = set(free_vars(f))
        if f.hint is not None:
            for a in f.hint[1]:
                if hasattr(a, "names"):
                    keep.update(n for n in a.names() if n in m.vars)
        keep = [n for n in keep if n in m.vars]
        base = m.project(keep) if keep else FiniteModel([1], {})
        unknown = None
        seen = set()
        for ext in self._candidates(f, base):
            key = _dedupe_key(ext, f.vars)
            if key in seen:
                continue
            seen.add(key)
            self._charge()
            r = self.eval(f.body, ext)
            if r.verdict is decisive:
                return TruthValue3(decisive, ext)
            if r.verdict is U and unknown is None:
                unknown = r
        if self.mode == "sound" or unknown is not None:
            return TruthValue3(U, exhausted=bool(unknown and unknown.exhausted), note=unknown.note if unknown else "")
        return TruthValue3(F if is_ex else T)

    def _candidates(self, f, base):
        if self.budget.use_witness_hints and f.hint is not None:
            key, args = f.hint
            fn = self.registry.witnesses.get(key)
            if fn is not None:
                try:
                    yield from fn(base, list(f.vars), *args)
                except (ModelError, KeyError, ZeroDivisionError, ValueError):
                    pass
                else:
                    # a complete constructor already produced every witness
                    # that matters; bounded mode stops there
                    if self.mode == "bounded" and key in self.registry.complete:
                        return
        yield from self._block(base, list(f.vars))

    def _block(self, base, names):
        if not names:
            yield base
            return
        for ext in self.single(base, names[0]):
            yield from self._block(ext, names[1:])

    def single(self, base, name):
        """The generic candidate family for one new variable over base.

        Refinements stop at max_atoms atoms, and per-atom kernels are only
        tried on bases with at most half that many atoms.
        """
        b = self.budget
        n = base.size
        for r in range(1, b.max_refine + 1):
            if r > 1 and n * r > b.max_atoms:
                break
            fine = base.refine(r)
            for lab in restricted_growth(fine.size, b.max_support):
                if r > 1:
                    blocks = [lab[i * r:(i + 1) * r] for i in range(n)]
                    if all(len(set(bl)) == 1 for bl in blocks):
                        continue
                    # copies of an atom are exchangeable: keep block-sorted labelings
                    # whenever the sorted form is itself enumerated
                    srt = tuple(v for bl in blocks for v in sorted(bl))
                    if srt != lab and _is_rg(srt):
                        continue
                yield fine.with_var(name, lab)
        for k in range(2, b.max_support + 1):
            yield base.adjoin_independent(name, {j: Fraction(1, k) for j in range(k)})
        grid = [Fraction(j, b.max_denominator) for j in range(b.max_denominator + 1)]
        for p in grid[1:-1]:
            yield base.adjoin_independent(name, {0: p, 1: 1 - p})
        if 1 < n <= b.max_atoms // 2:
            for ps in product(grid, repeat=n):
                if len(set(ps)) > 1:
                    yield base.adjoin(name, [{0: 1 - p, 1: p} for p in ps])


def _is_rg(lab):
    top = -1
    for v in lab:
        if v > top + 1:
            return False
        top = max(top, v)
    return True


def _dedupe_key(ext, new):
    """Compressed joint law with the new variables relabelled in order of
    first occurrence; equal keys give the same extension up to relabelling."""
    old = sorted(n for n in ext.vars if n not in new)
    cols = [ext.vars[n] for n in old]
    ncols = [ext.vars[n] for n in new]
    acc = {}
    for i, w in enumerate(ext.weights):
        if w:
            k = (tuple(c[i] for c in cols), tuple(c[i] for c in ncols))
            acc[k] = acc.get(k, 0) + w
    g = math.gcd(ext.den, *acc.values())
    relabel = [{} for _ in new]
    out = []
    for (o, nv), w in sorted(acc.items()):
        out.append((o, tuple(r.setdefault(v, len(r)) for r, v in zip(relabel, nv)), w // g))
    return ext.den // g, tuple(sorted(out))


def eval_formula(f, m, mode="bounded", budget=None, registry=None, use_oracles=True):
    """Evaluate f on m.  Free variables must be variables of m.

    Bounded mode raises BudgetExhausted when more than max_candidates
    quantifier candidates are needed; sound mode reports Unknown instead.
    """
    missing = set(free_vars(f)) - set(m.vars)
    if missing:
        raise FormulaError(f"free variables not in the model: {sorted(missing)}")
    ev = Evaluator(mode, budget, registry, use_oracles)
    f = rename_bound_apart(f, avoid=m.vars)
    if mode == "bounded":
        return ev.eval(f, m)
    try:
        return ev.eval(f, m)
    except BudgetExhausted as e:
        return TruthValue3(U, exhausted=True, note=str(e))


evaluate = eval_formula


def _refutes(antecedents, consequent, m, budget, mode, registry):
    ev = Evaluator(mode, budget, registry)
    try:
        if not all(ev.eval(a, m).is_true for a in antecedents):
            return False
        return ev.eval(consequent, m).is_false
    except BudgetExhausted:
        return False


def _first_refuting(job):
    antecedents, consequent, models, budget, mode = job
    for i, m in models:
        if _refutes(antecedents, consequent, m, budget, mode, None):
            return i
    return None


def find_counterexample(antecedents, consequent, budget=None, names=None, max_atoms=4, max_values=3,
                        seed=None, restarts=0, mode="bounded", registry=None, jobs=1):
    """A model satisfying every antecedent and falsifying the consequent.

    Searches all equiprobable models on up to max_atoms atoms (which covers
    every law with masses of denominator at most max_atoms), then, when a
    seed is given, restarts with random models on the budget's rational grid.
    Returns None when nothing is found; that is no proof of validity.
    With jobs > 1 the corpus is split across processes (default registry
    only); the answer is the same model as the sequential search.
    """
    antecedents = list(antecedents)
    fs = antecedents + [consequent]
    if names is None:
        names = sorted(set().union(*(free_vars(f) for f in fs)))
    if not names:
        names = ["X"]
    budget = budget or Budget()
    models = list(corpus(names, max_atoms, max_values))
    if jobs > 1 and registry is None and len(models) > 1:
        from concurrent.futures import ProcessPoolExecutor
        chunks = [[(i, m) for i, m in enumerate(models) if i % jobs == r] for r in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            hits = [i for i in pool.map(_first_refuting, [(antecedents, consequent, c, budget, mode) for c in chunks])
                    if i is not None]
        if hits:
            return models[min(hits)]
    else:
        for m in models:
            if _refutes(antecedents, consequent, m, budget, mode, registry):
                return m
    if seed is not None:
        rng = random.Random(seed)
        d = budget.max_denominator
        for _ in range(restarts):
            atoms = rng.randint(1, 2 * max_atoms)
            cuts = sorted(rng.randint(0, d * atoms) for _ in range(atoms - 1))
            ws = [b - a for a, b in zip([0] + cuts, cuts + [d * atoms])]
            if not any(ws):
                continue
            masses = [Fraction(w, d * atoms) for w in ws]
            m = FiniteModel(masses, {n: [rng.randrange(max_values) for _ in masses] for n in names})
            if _refutes(antecedents, consequent, m, budget, mode, registry):
                return m
    return None


__all__ = ["Budget", "BudgetExhausted", "Evaluator", "TruthValue3", "Verdict", "eval_formula", "evaluate",
           "find_counterexample", "register_witness_constructor"]
