"""Arithmetic over the naturals: terms, predicates, evaluation, and the
executable beta/pairing functions used to encode finite sequences."""
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


class ArithError(ValueError):
    pass


# -- terms ----------------------------------------------------------------


class ATerm:
    __slots__ = ()

    def __add__(self, o):
        return AAdd(self, lift(o))

    def __radd__(self, o):
        return AAdd(lift(o), self)

    def __mul__(self, o):
        return AMul(self, lift(o))

    def __rmul__(self, o):
        return AMul(lift(o), self)


@dataclass(frozen=True)
class AVar(ATerm):
    name: str


@dataclass(frozen=True)
class AConst(ATerm):
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ArithError("naturals only")


@dataclass(frozen=True)
class AAdd(ATerm):
    left: ATerm
    right: ATerm


@dataclass(frozen=True)
class AMul(ATerm):
    left: ATerm
    right: ATerm


def lift(x):
    if isinstance(x, ATerm):
        return x
    if isinstance(x, int):
        return AConst(x)
    if isinstance(x, str):
        return AVar(x)
    raise ArithError(f"not an arithmetic term: {x!r}")


# -- predicates -----------------------------------------------------------


class APred:
    __slots__ = ()

    def __and__(self, o):
        return AAnd((self, o))

    def __or__(self, o):
        return AOr((self, o))

    def __invert__(self):
        return ANot(self)


@dataclass(frozen=True)
class ACmp(APred):
    op: str
    left: ATerm
    right: ATerm

    def __post_init__(self):
        if self.op not in ("=", "<", "<="):
            raise ArithError(f"bad comparison {self.op}")
        object.__setattr__(self, "left", lift(self.left))
        object.__setattr__(self, "right", lift(self.right))


@dataclass(frozen=True)
class ADiv(APred):
    """left divides right."""
    left: ATerm
    right: ATerm

    def __post_init__(self):
        object.__setattr__(self, "left", lift(self.left))
        object.__setattr__(self, "right", lift(self.right))


@dataclass(frozen=True)
class AMod(APred):
    """value mod modulus = rem (false when modulus is zero)."""
    value: ATerm
    modulus: ATerm
    rem: ATerm

    def __post_init__(self):
        for f in ("value", "modulus", "rem"):
            object.__setattr__(self, f, lift(getattr(self, f)))


@dataclass(frozen=True)
class ACall(APred):
    """A named relation on term values; it compiles to the macro of the same
    name applied to the term representations."""
    name: str
    args: tuple
    fn: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(lift(a) for a in self.args))


@dataclass(frozen=True)
class ANot(APred):
    body: APred


@dataclass(frozen=True)
class AAnd(APred):
    args: tuple


@dataclass(frozen=True)
class AOr(APred):
    args: tuple


@dataclass(frozen=True)
class AImplies(APred):
    left: APred
    right: APred


@dataclass(frozen=True)
class AIff(APred):
    left: APred
    right: APred


@dataclass(frozen=True)
class AExists(APred):
    """domain(env) optionally yields the values worth trying; it must contain
    every value for which the body can hold."""
    var: str
    body: APred
    domain: object = field(default=None, compare=False)


@dataclass(frozen=True)
class AForall(APred):
    """domain(env) must contain every value for which the body can fail."""
    var: str
    body: APred
    domain: object = field(default=None, compare=False)


def eq(a, b):
    return ACmp("=", a, b)


def lt(a, b):
    return ACmp("<", a, b)


def le(a, b):
    return ACmp("<=", a, b)


def a_and(*ps):
    return ps[0] if len(ps) == 1 else AAnd(tuple(ps))


def a_or(*ps):
    return ps[0] if len(ps) == 1 else AOr(tuple(ps))


def a_exists(vs, body, domain=None):
    for v in reversed(vs if isinstance(vs, (list, tuple)) else [vs]):
        body = AExists(v, body, domain)
        domain = None
    return body


def a_forall(vs, body, domain=None):
    for v in reversed(vs if isinstance(vs, (list, tuple)) else [vs]):
        body = AForall(v, body, domain)
        domain = None
    return body


def term_vars(t):
    if isinstance(t, AVar):
        return {t.name}
    if isinstance(t, AConst):
        return set()
    return term_vars(t.left) | term_vars(t.right)


def arith_free_vars(p):
    if isinstance(p, (ACmp, ADiv)):
        return term_vars(p.left) | term_vars(p.right)
    if isinstance(p, AMod):
        return term_vars(p.value) | term_vars(p.modulus) | term_vars(p.rem)
    if isinstance(p, ACall):
        return set().union(*(term_vars(a) for a in p.args))
    if isinstance(p, ANot):
        return arith_free_vars(p.body)
    if isinstance(p, (AAnd, AOr)):
        out = set()
        for a in p.args:
            out |= arith_free_vars(a)
        return out
    if isinstance(p, (AImplies, AIff)):
        return arith_free_vars(p.left) | arith_free_vars(p.right)
    if isinstance(p, (AExists, AForall)):
        return arith_free_vars(p.body) - {p.var}
    raise ArithError(f"not an arithmetic predicate: {p!r}")


def term_value(t, env):
    if isinstance(t, AConst):
        return t.value
    if isinstance(t, AVar):
        try:
            return env[t.name]
        except KeyError:
            raise ArithError(f"unbound arithmetic variable {t.name}") from None
    if isinstance(t, AAdd):
        return term_value(t.left, env) + term_value(t.right, env)
    return term_value(t.left, env) * term_value(t.right, env)


def arith_eval(p, env, bound=32):
    """Truth of p with free variables from env.  Quantifiers without a
    domain strategy range over 0..bound."""
    if isinstance(p, ACmp):
        a, b = term_value(p.left, env), term_value(p.right, env)
        return a == b if p.op == "=" else (a < b if p.op == "<" else a <= b)
    if isinstance(p, ADiv):
        a, b = term_value(p.left, env), term_value(p.right, env)
        return b == 0 if a == 0 else b % a == 0
    if isinstance(p, AMod):
        v, m, r = (term_value(t, env) for t in (p.value, p.modulus, p.rem))
        return m > 0 and v % m == r
    if isinstance(p, ACall):
        return bool(p.fn(*(term_value(a, env) for a in p.args)))
    if isinstance(p, ANot):
        return not arith_eval(p.body, env, bound)
    if isinstance(p, AAnd):
        return all(arith_eval(a, env, bound) for a in p.args)
    if isinstance(p, AOr):
        return any(arith_eval(a, env, bound) for a in p.args)
    if isinstance(p, AImplies):
        return (not arith_eval(p.left, env, bound)) or arith_eval(p.right, env, bound)
    if isinstance(p, AIff):
        return arith_eval(p.left, env, bound) == arith_eval(p.right, env, bound)
    if isinstance(p, (AExists, AForall)):
        dom = p.domain(env) if p.domain is not None else range(bound + 1)
        want = isinstance(p, AExists)
        for v in dom:
            sub = dict(env)
            sub[p.var] = v
            if arith_eval(p.body, sub, bound) == want:
                return want
        return not want
    raise ArithError(f"not an arithmetic predicate: {p!r}")


def to_text(p):
    """Concrete syntax of an arithmetic predicate or term."""
    if isinstance(p, AConst):
        return str(p.value)
    if isinstance(p, AVar):
        return p.name
    if isinstance(p, AAdd):
        return f"({to_text(p.left)} + {to_text(p.right)})"
    if isinstance(p, AMul):
        return f"({to_text(p.left)} * {to_text(p.right)})"
    if isinstance(p, ACmp):
        return f"({to_text(p.left)} {p.op} {to_text(p.right)})"
    if isinstance(p, ADiv):
        return f"div({to_text(p.left)}, {to_text(p.right)})"
    if isinstance(p, AMod):
        return f"mod({to_text(p.value)}, {to_text(p.modulus)}, {to_text(p.rem)})"
    if isinstance(p, ACall):
        return p.name + "(" + ", ".join(to_text(a) for a in p.args) + ")"
    if isinstance(p, ANot):
        return f"(not {to_text(p.body)})"
    if isinstance(p, AAnd):
        return "(" + " and ".join(to_text(a) for a in p.args) + ")"
    if isinstance(p, AOr):
        return "(" + " or ".join(to_text(a) for a in p.args) + ")"
    if isinstance(p, AImplies):
        return f"({to_text(p.left)} -> {to_text(p.right)})"
    if isinstance(p, AIff):
        return f"({to_text(p.left)} <-> {to_text(p.right)})"
    if isinstance(p, AExists):
        return f"(exists {p.var}. {to_text(p.body)})"
    if isinstance(p, AForall):
        return f"(forall {p.var}. {to_text(p.body)})"
    raise ArithError(f"not arithmetic: {p!r}")


# -- beta function and pairing -------------------------------------------


def godel_beta(b, c, i):
    return b % (c * (i + 1) + 1)


def cantor_pair(b, c):
    return (b + c) * (b + c + 1) // 2 + c


def cantor_unpair(r):
    s = (math.isqrt(8 * r + 1) - 1) // 2
    c = r - s * (s + 1) // 2
    return s - c, c


def godel_decode(r):
    """The finite sequence a code decodes to (may be empty)."""
    b, c = cantor_unpair(r)
    n = godel_beta(b, c, 0)
    return tuple(godel_beta(b, c, i) for i in range(1, n + 1))


@lru_cache(maxsize=256)
def _base_candidates(t0, t1, smax):
    """All (b, c) with b + c < smax, b mod (c+1) = t0 and b mod (2c+1) = t1.
    The two moduli are coprime and the inverse of c+1 modulo 2c+1 is 2."""
    cs = np.arange(smax, dtype=np.int64)
    ok = (t0 <= cs) & (t1 <= 2 * cs)
    cs = cs[ok]
    m1 = 2 * cs + 1
    x = t0 + (cs + 1) * ((2 * (t1 - t0)) % m1)
    period = (cs + 1) * m1
    big = period >= smax
    bs, cc = [x[big]], [cs[big]]
    # small c: several lifts of the base solution fit below smax
    for x0, c0, per in zip(x[~big].tolist(), cs[~big].tolist(), period[~big].tolist()):
        lifts = np.arange(x0, max(x0, smax - c0), per, dtype=np.int64)
        bs.append(lifts)
        cc.append(np.full(len(lifts), c0, dtype=np.int64))
    b = np.concatenate(bs)
    c = np.concatenate(cc)
    keep = b + c < smax
    return b[keep], c[keep]


def _candidates(target, smax):
    """All (b, c) with b + c < smax whose beta values are target."""
    b, c = _base_candidates(target[0], target[1], smax)
    for i in range(2, len(target)):
        mod = c * (i + 1) + 1
        keep = b % mod == target[i]
        b, c = b[keep], c[keep]
    return b, c


def _pairs_for(seq, smax):
    target = (len(seq),) + tuple(seq)
    if len(target) == 1:
        target = target + (None,)
    if target[1] is None:
        # empty sequence: b mod (c+1) = 0
        out = [(b, c) for s in range(smax) for c in range(s + 1) for b in [s - c] if b % (c + 1) == 0]
        return out
    b, c = _candidates(target, smax)
    return list(zip(b.tolist(), c.tolist()))


def godel_encode(seq):
    """Least r = pair(b, c) whose decoding is seq."""
    seq = tuple(int(a) for a in seq)
    if any(a < 0 for a in seq):
        raise ArithError("naturals only")
    return _encode(seq)


@lru_cache(maxsize=None)
def _encode(seq):
    smax = 64
    while True:
        found = _pairs_for(seq, smax)
        if found:
            return min(cantor_pair(b, c) for b, c in found)
        smax *= 2


def codes_below(seq, r):
    """Every code r' < r decoding to seq."""
    seq = tuple(seq)
    if r <= 4096:
        return [q for q in range(r) if godel_decode(q) == seq]
    s = cantor_unpair(r - 1)
    smax = sum(s) + 1
    return sorted(p for p in (cantor_pair(b, c) for b, c in _pairs_for(seq, smax)) if p < r)


# -- arithmetic definitions of decoding ----------------------------------


def pair_eq(b, c, r):
    """pair(b, c) = r, written without division."""
    b, c, r = lift(b), lift(c), lift(r)
    return eq(AConst(2) * r, (b + c) * (b + c + AConst(1)) + AConst(2) * c)


def beta_eq(b, c, i, x):
    """beta(b, c, i) = x."""
    b, c, i, x = lift(b), lift(c), lift(i), lift(x)
    return AMod(b, c * (i + AConst(1)) + AConst(1), x)


def decn_pred(r="r", i="i", a="a"):
    """i in [n] and a is the i-th entry of the sequence coded by r."""
    def bdom(env):
        return [cantor_unpair(env[r])[0]]

    def cdom(env):
        return [cantor_unpair(env[r])[1]]

    def tdom(env):
        b, c = env["b_"], env["c_"]
        return [godel_beta(b, c, 0)]

    body = AExists("t_", a_and(beta_eq("b_", "c_", 0, "t_"), le(1, i), le(i, "t_"), beta_eq("b_", "c_", i, a)), tdom)
    return AExists("b_", AExists("c_", a_and(pair_eq("b_", "c_", r), body), cdom), bdom)


def dec_pred(r="r", i="i", a="a"):
    """decn plus minimality of r among codes of the same sequence."""
    def rdom(env):
        return codes_below(godel_decode(env[r]), env[r])

    def idom(env):
        s1, s2 = godel_decode(env[r]), godel_decode(env["r2_"])
        return sorted({(j + 1, v) for j, v in enumerate(s1)} | {(j + 1, v) for j, v in enumerate(s2)})

    def i_only(env):
        return sorted({j for j, _ in idom(env)})

    def a_only(env):
        s1, s2 = godel_decode(env[r]), godel_decode(env["r2_"])
        j = env["i2_"]
        return sorted({s[j - 1] for s in (s1, s2) if 1 <= j <= len(s)})

    same = AForall("i2_", AForall("a2_", AIff(decn_pred(r, "i2_", "a2_"), decn_pred("r2_", "i2_", "a2_")), a_only), i_only)
    return a_and(decn_pred(r, i, a), AForall("r2_", AImplies(same, le(r, "r2_")), rdom))


def dec_oracle(r, i, a):
    s = godel_decode(r)
    return godel_encode(s) == r and 1 <= i <= len(s) and s[i - 1] == a
