"""Arithmetic predicates over natural-number representations.

compile_arith turns an arithmetic predicate into a formula whose free
variables are the random variables representing its free naturals.  Every
intermediate term value gets its own existentially bound representation
carrying a witness hint, so bounded evaluation can build it directly.
"""
from ..arith import (AAdd, AAnd, ACall, ACmp, AConst, ADiv, AExists, AForall, AIff, AImplies, AMod, ANot, AOr,
                     AVar, APred, arith_free_vars, a_and, beta_eq, cantor_unpair, dec_oracle, dec_pred, decn_pred,
                     godel_beta, godel_decode, godel_encode, le, lift)
from ..formula import (And, FormulaError, Iff, Implies, MacroCall, NameSupply, Not, Or, Var, conj, exists, forall)
from .. import semantics as S
from .registry import REGISTRY as R


def _call(name, *args):
    return MacroCall(name, tuple(Var(a) if isinstance(a, str) else a for a in args))


class _Compiler:
    def __init__(self, supply, bound):
        self.supply = supply
        self.bound = bound

    def term(self, t, env, defs):
        """Name of a variable representing t; definitions appended to defs."""
        if isinstance(t, AVar):
            try:
                return env[t.name]
            except KeyError:
                raise FormulaError(f"unmapped arithmetic variable {t.name}") from None
        if isinstance(t, AConst):
            v = self.supply.fresh("N")
            defs.append((v, _call("n_const", v, t.value), ("nat", (t.value,))))
            return v
        a = self.term(t.left, env, defs)
        b = self.term(t.right, env, defs)
        v = self.supply.fresh("N")
        if isinstance(t, AAdd):
            defs.append((v, _call("n_add", a, b, v), ("nat_sum", (Var(a), Var(b)))))
        else:
            defs.append((v, _call("n_mul", a, b, v), ("nat_prod", (Var(a), Var(b)))))
        return v

    @staticmethod
    def nest(defs, body):
        for v, d, hint in reversed(defs):
            body = exists(v, And((d, body)), hint=hint)
        return body

    def pred(self, p, env):
        if isinstance(p, ACmp):
            if p.op == "=" and isinstance(p.right, AConst) and isinstance(p.left, AVar):
                return _call("n_const", self.term(p.left, env, []), p.right.value)
            if p.op == "=" and isinstance(p.left, AConst) and isinstance(p.right, AVar):
                return _call("n_const", self.term(p.right, env, []), p.left.value)
            defs = []
            a = self.term(p.left, env, defs)
            b = self.term(p.right, env, defs)
            rel = {"=": "n_eq", "<": "n_lt", "<=": "n_le"}[p.op]
            return self.nest(defs, _call(rel, a, b))
        if isinstance(p, ADiv):
            defs = []
            a = self.term(p.left, env, defs)
            b = self.term(p.right, env, defs)
            k = self.supply.fresh("N")
            body = exists(k, And((_call("isnat", k), _call("n_mul", a, k, b))), hint=("nat_quot", (Var(b), Var(a))))
            return self.nest(defs, body)
        if isinstance(p, AMod):
            defs = []
            v = self.term(p.value, env, defs)
            m = self.term(p.modulus, env, defs)
            r = self.term(p.rem, env, defs)
            q, prod = self.supply.fresh("N"), self.supply.fresh("N")
            inner = exists(prod, conj(_call("n_mul", q, m, prod), _call("n_add", prod, r, v)),
                           hint=("nat_prod", (Var(q), Var(m))))
            split = exists(q, And((_call("isnat", q), inner)), hint=("nat_floordiv", (Var(v), Var(m))))
            return self.nest(defs, And((split, _call("n_lt", r, m))))
        if isinstance(p, ACall):
            defs = []
            names = [self.term(a, env, defs) for a in p.args]
            return self.nest(defs, _call(p.name, *names))
        if isinstance(p, ANot):
            return Not(self.pred(p.body, env))
        if isinstance(p, (AAnd, AOr)):
            parts = tuple(self.pred(a, env) for a in p.args)
            return And(parts) if isinstance(p, AAnd) else Or(parts)
        if isinstance(p, AImplies):
            return Implies(self.pred(p.left, env), self.pred(p.right, env))
        if isinstance(p, AIff):
            return Iff(self.pred(p.left, env), self.pred(p.right, env))
        if isinstance(p, (AExists, AForall)):
            x = self.supply.fresh("N")
            inner = dict(env)
            inner[p.var] = x
            body = self.pred(p.body, inner)
            scope = tuple(sorted(env))
            hint = ("nat_dom", (p.domain, scope, self.bound) + tuple(Var(env[n]) for n in scope))
            if isinstance(p, AExists):
                return exists(x, And((_call("isnat", x), body)), hint=hint)
            return forall(x, Implies(_call("isnat", x), body), hint=hint)
        raise FormulaError(f"not an arithmetic predicate: {p!r}")


def compile_arith(p, var_map, avoid=(), bound=8):
    """Formula true exactly when the mapped variables represent naturals
    satisfying p.  bound is the range tried by bounded evaluation for
    quantifiers that carry no domain of their own."""
    if not isinstance(p, APred):
        raise FormulaError("compile_arith needs an arithmetic predicate")
    missing = arith_free_vars(p) - set(var_map)
    if missing:
        raise FormulaError("unmapped arithmetic variables: " + ", ".join(sorted(missing)))
    env = {k: (v.name if isinstance(v, Var) else v) for k, v in var_map.items()}
    supply = NameSupply(set(avoid) | set(env.values()), prefix="N")
    body = _Compiler(supply, bound).pred(p, env)
    if isinstance(avoid, set):
        avoid.update(supply.avoid)
    used = sorted({env[n] for n in arith_free_vars(p)})
    return conj(*[_call("isnat", v) for v in used], body)


# -- exponentiation -----------------------------------------------------


def pow_pred(x, y, z):
    """z = x ** y, via a beta-coded table of the powers x^0 .. x^y."""
    x, y, z = lift(x), lift(y), lift(z)
    from ..arith import term_value

    def table(env):
        xv, yv = term_value(x, env), term_value(y, env)
        return (yv + 1,) + tuple(xv ** j for j in range(yv + 1))

    def bdom(env):
        b, _ = cantor_unpair(godel_encode(table(env)[1:]))
        return [b]

    def cdom(env):
        _, c = cantor_unpair(godel_encode(table(env)[1:]))
        return [c]

    def idom(env):
        return range(1, term_value(y, env) + 1)

    def tdom(env):
        return [godel_beta(env["pb_"], env["pc_"], env["pi_"])]

    step = AExists("pt_", a_and(beta_eq("pb_", "pc_", "pi_", "pt_"),
                                beta_eq("pb_", "pc_", AVar("pi_") + 1, AVar("pt_") * x)), tdom)
    steps = AForall("pi_", AImplies(a_and(le(1, "pi_"), le("pi_", y)), step), idom)
    body = a_and(beta_eq("pb_", "pc_", 1, 1), steps, beta_eq("pb_", "pc_", y + AConst(1), z))
    return AExists("pb_", AExists("pc_", body, cdom), bdom)


# -- decoding macros ----------------------------------------------------


def _arith_macro(name, pred_fn, oracle_fn, doc):
    @R.define(name, ("rv", "rv", "rv"), doc=doc)
    def build(ctx, r, i, a):
        return compile_arith(pred_fn("r", "i", "a"), {"r": r, "i": i, "a": a}, avoid=ctx.supply.avoid)

    @R.oracle(name)
    def oracle(m, r, i, a):
        vals = [S.nat_value(m, t) for t in (r, i, a)]
        return None not in vals and oracle_fn(*vals)


def decn_oracle(r, i, a):
    s = godel_decode(r)
    return 1 <= i <= len(s) and s[i - 1] == a


_arith_macro("decn", decn_pred, decn_oracle, "Entry i of some decoding of r equals a.")
_arith_macro("dec", dec_pred, dec_oracle, "r is the code of a sequence whose i-th entry is a.")
