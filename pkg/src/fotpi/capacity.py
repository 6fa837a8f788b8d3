"""Capacity-region formula Q_k of a joint source-channel Markov network.

compile_Qk writes the multi-letter operational definition of a k-terminal
network as one first-order formula: Goedel-coded nested sequences for the
block variables, an i.i.d. source, a Markov state, causal encoders, the
channel, decoders and a coupling bound on the error probability, all
under "for every nonnull event E there is a block length n and a scheme
with error at most P(E)".  Levels are computed compositionally per macro.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .formula import (And, Implies, Indep, MacroCall, NameSupply, Not, Var, conj, empty, exists, forall,
                      free_vars, join)
from .hierarchy import classify, level_of
from .model import FiniteModel


class NetworkError(ValueError):
    pass


def _frac(x):
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError):
        raise NetworkError(f"not a rational: {x!r}") from None


def _stochastic(rows, what):
    for key, row in rows.items():
        if any(p < 0 for p in row.values()) or sum(row.values()) != 1:
            raise NetworkError(f"{what} row {key} is not a probability vector")


class NetworkSpec:
    """k terminals; all laws exact.

    source: {w tuple: p}; decoding: {w tuple: {z tuple: p}};
    channel: {(x tuple, s): {(y tuple, s'): p}}; input_alphabets: k lists;
    initial_state: {s: p}.  The state alphabet is the support of
    initial_state together with every next state the channel can produce.
    """

    def __init__(self, k, source, channel, input_alphabets, initial_state, decoding):
        if k < 1:
            raise NetworkError("k must be at least 1")
        self.k = k
        self.source = {tuple(w): _frac(p) for w, p in source.items()}
        self.decoding = {tuple(w): {tuple(z): _frac(p) for z, p in row.items()} for w, row in decoding.items()}
        self.channel = {(tuple(x), s): {(tuple(y), s2): _frac(p) for (y, s2), p in row.items()}
                        for (x, s), row in channel.items()}
        self.input_alphabets = [list(a) for a in input_alphabets]
        self.initial_state = {s: _frac(p) for s, p in initial_state.items()}
        self.validate()

    def validate(self):
        k = self.k
        if len(self.input_alphabets) != k or any(not a for a in self.input_alphabets):
            raise NetworkError("need k nonempty input alphabets")
        if any(len(w) != k for w in self.source):
            raise NetworkError("source outcomes must have k components")
        _stochastic({"source": self.source}, "source")
        _stochastic({"initial state": self.initial_state}, "initial state")
        _stochastic(self.decoding, "decoding")
        _stochastic(self.channel, "channel")
        for w, p in self.source.items():
            if p and w not in self.decoding:
                raise NetworkError(f"no decoding row for source outcome {w}")
        if any(len(z) != k for row in self.decoding.values() for z in row):
            raise NetworkError("decoding outcomes must have k components")
        states = self.states()
        for x in product(*self.input_alphabets):
            for s in states:
                if (x, s) not in self.channel:
                    raise NetworkError(f"missing channel row for inputs {x} and state {s}")
        for (x, s), row in self.channel.items():
            if len(x) != k or any(len(y) != k for y, _ in row):
                raise NetworkError("channel inputs and outputs must have k components")
            if any(xi not in a for xi, a in zip(x, self.input_alphabets)):
                raise NetworkError(f"channel input {x} outside the alphabets")

    def states(self):
        out = set(self.initial_state)
        for row in self.channel.values():
            out.update(s2 for (_, s2), p in row.items() if p)
        return sorted(out)

    @classmethod
    def from_dict(cls, d):
        try:
            k = int(d["k"])
            source = {tuple(w): p for w, p in d["source"]}
            decoding = {}
            for w, z, p in d["decoding"]:
                decoding.setdefault(tuple(w), {})[tuple(z)] = p
            channel = {}
            for x, s, y, s2, p in d["channel"]:
                channel.setdefault((tuple(x), s), {})[(tuple(y), s2)] = p
            init = {s: p for s, p in d["initial_state"]}
            return cls(k, source, channel, d["input_alphabets"], init, decoding)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, NetworkError):
                raise
            raise NetworkError(f"malformed network spec: {e}") from None

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def broadcast_spec(channel=None):
    """Two-receiver broadcast channel p(y2, y3 | x1) as a k = 3 network:
    W1 = (M1, M2) with independent fair bits, Z2 = M1, Z3 = M2 and
    X2, X3, Y1, S degenerate.  The default channel is two clean copies."""
    if channel is None:
        channel = {x: {(x, x): 1} for x in (0, 1)}
    src = {(2 * m1 + m2, 0, 0): Fraction(1, 4) for m1 in (0, 1) for m2 in (0, 1)}
    dec = {w: {(0, w[0] >> 1, w[0] & 1): 1} for w in src}
    ch = {((x, 0, 0), 0): {((0, y2, y3), 0): p for (y2, y3), p in row.items()} for x, row in channel.items()}
    return NetworkSpec(3, src, ch, [sorted(channel), [0], [0]], {0: 1}, dec)


def point_to_point_spec(channel, message_pmf):
    """k = 1 with trivial state: W1 = M, Z1 = M, channel p(y | x)."""
    src = {(m,): _frac(p) for m, p in message_pmf.items()}
    dec = {w: {w: 1} for w in src}
    ch = {((x,), 0): {((y,), 0): p for y, p in row.items()} for x, row in channel.items()}
    return NetworkSpec(1, src, ch, [sorted(channel)], {0: 1}, dec)


# -- compilation ------------------------------------------------------------


def free_names(k):
    out = []
    for letter in "WXYZ":
        out += [f"{letter}{i}" for i in range(1, k + 1)]
    return out + ["S", "L_S", "S'", "L_S'"]


@dataclass
class CompiledCapacityFormula:
    formula: object
    k: int
    free: tuple
    input_anchor: str
    conjuncts: dict
    note: str = "no closure wrapper is emitted; the formula describes achievable points, not their closure"


class _Builder:
    def __init__(self, k):
        self.k = k
        self.sup = NameSupply(free_names(k))

    def v(self, base):
        return Var(self.sup.fresh(base))

    def c(self, name, *args):
        return MacroCall(name, tuple(args))

    def the(self, vs, defn, body):
        """body for the vs singled out by defn, in whichever of the
        existential and universal readings sits lower in the H hierarchy."""
        a = exists(vs, And((defn, body)))
        b = forall(vs, Implies(defn, body))
        la, lb = level_of(a, "H"), level_of(b, "H")
        return b if (min(lb), max(lb)) < (min(la), max(la)) else a

    def entry(self, seq, t, body):
        xb, lb, n = seq
        e, le = self.v("E"), self.v("LE")
        return self.the([e.name, le.name], self.c("entry", xb, lb, n, e, le, t), body(e, le))

    def prefix(self, seq, j, body):
        xb, lb, n = seq
        p, lp = self.v("P"), self.v("LP")
        return self.the([p.name, lp.name], self.c("prefix", xb, lb, n, p, lp, j), body(p, lp))

    def in_range(self, t, hi):
        return conj(self.c("isnat", t), self.c("n_le", self.ONE, t), self.c("n_le", t, hi))

    def column(self, seq, i, length, body):
        """Sequence of the i-th components of the first `length` entries."""
        c, lc, t = self.v("C"), self.v("LC"), self.v("T")

        def agree(a, la):
            return self.entry((a, la, self.K), self.I[i], lambda b, lb: self.entry(
                (c, lc, length), t, lambda d, ld: self.c("as_eq", b, lb, d, ld)))
        defn = conj(self.c("isseq", c, lc, length),
                    forall(t.name, Implies(self.in_range(t, length), self.entry(seq, t, agree))))
        return self.the([c.name, lc.name], defn, body(c, lc))

    def columns(self, parts, i, body):
        """Nested column() over [(seq, length)], collecting the codes."""
        def go(rest, acc):
            if not rest:
                return body(*acc)
            seq, length = rest[0]
            return self.column(seq, i, length, lambda c, lc: go(rest[1:], acc + [c]))
        return go(list(parts), [])

    def build(self):
        k = self.k
        K, ONE, N, N1 = self.v("K"), self.v("ONE"), self.v("N"), self.v("N")
        self.K, self.ONE = K, ONE
        self.I = {1: ONE}
        consts = [self.c("n_const", K, k), self.c("n_const", ONE, 1), self.c("isnat", N), self.c("n_add", N, ONE, N1)]
        for i in range(2, k + 1):
            self.I[i] = self.v("I")
            consts.append(self.c("n_const", self.I[i], i))
        comps = {L: [Var(f"{L}{i}") for i in range(1, k + 1)] for L in "WXYZ"}
        tup = {L: (self.v(L), self.v("L" + L)) for L in "WXYZ"}
        blk = {L: (self.v(L + "b"), self.v("L" + L + "b")) for L in ("W", "X", "Y", "Z", "Zh")}
        seq = {L: (v, lv, N) for L, (v, lv) in blk.items()}
        sb, lsb = self.v("Sb"), self.v("LSb")
        sseq = (sb, lsb, N1)
        S, LS, S2, LS2 = Var("S"), Var("L_S"), Var("S'"), Var("L_S'")
        parts = {}

        defs = []
        for L in "WXYZ":
            v, lv = tup[L]
            each = []
            for i, x in enumerate(comps[L], 1):
                lab = self.v("L")
                each.append(exists(lab.name, self.entry((v, lv, K), self.I[i], lambda e, le, x=x, lab=lab: self.c(
                    "as_eq", x, lab, e, le))))
            defs.append(conj(self.c("isseq", v, lv, K), *each))
        parts["defseq"] = conj(*defs)

        nest = []
        for L, (v, lv) in blk.items():
            t, e, le = self.v("T"), self.v("E"), self.v("LE")
            nest.append(conj(self.c("isseq", v, lv, N), forall(
                [t.name, e.name, le.name], Implies(self.c("entry", v, lv, N, e, le, t), self.c("isseq", e, le, K)))))
        parts["wnest"] = conj(*nest)

        W, LW = tup["W"]
        Z, LZ = tup["Z"]
        t, j = self.v("T"), self.v("J")

        def src_t(wt, lwt):
            def with_z(zt, lzt):
                past = exists(j.name, conj(self.c("n_add", j, ONE, t), self.prefix(seq["W"], j, lambda wp, lwp: self.prefix(
                    seq["Z"], j, lambda zp, lzp: Indep(join(wt, zt), join(wp, zp))))))
                return conj(self.c("deq", wt, lwt, W, LW), self.c("cdeq", wt, lwt, zt, lzt, W, LW, Z, LZ), past)
            return self.entry(seq["Z"], t, with_z)
        parts["w"] = forall(t.name, Implies(self.in_range(t, N), self.entry(seq["W"], t, src_t)))

        parts["s"] = conj(self.c("isseq", sb, lsb, N1), self.entry(
            sseq, ONE, lambda s1, ls1: conj(self.c("deq", s1, ls1, S, LS), Indep(s1, blk["W"][0]))))

        enc = []
        for i in range(1, k + 1):
            t, j = self.v("T"), self.v("J")

            def enc_t(xt, lxt, t=t, j=j, i=i):
                def given(xti):
                    return self.prefix(seq["X"], j, lambda xp, _: self.prefix(seq["Y"], j, lambda yp, _y: self.prefix(
                        sseq, t, lambda sp, _s: self.columns([(seq["W"], N), (seq["X"], j), (seq["Y"], j)], i, lambda wc, xc, yc: self.c(
                            "ci", xti, join(blk["W"][0], xp, yp, sp), join(wc, xc, yc))))))
                return self.entry((xt, lxt, K), self.I[i], lambda xti, _: given(xti))
            body = exists(j.name, conj(self.c("n_add", j, ONE, t), self.entry(seq["X"], t, enc_t)))
            enc.append(forall(t.name, Implies(self.in_range(t, N), body)))
        parts["x"] = conj(*enc)

        X, LX = tup["X"]
        Y, LY = tup["Y"]
        t, j, t1 = self.v("T"), self.v("J"), self.v("T")

        def chan(xt, lxt, yt, lyt, st, lst, st1, lst1):
            names = [self.v(b) for b in ("P", "LP", "P", "LP", "Q", "LQ", "Q", "LQ")]
            p1, lp1, p2, lp2, q1, lq1, q2, lq2 = names
            law = exists([v.name for v in names], conj(
                self.c("pairseq", p1, lp1, yt, lyt, st1, lst1), self.c("pairseq", p2, lp2, xt, lxt, st, lst),
                self.c("pairseq", q1, lq1, Y, LY, S2, LS2), self.c("pairseq", q2, lq2, X, LX, S, LS),
                self.c("cdeq", p2, lp2, p1, lp1, q2, lq2, q1, lq1)))
            markov = self.prefix(seq["X"], j, lambda xp, _: self.prefix(seq["Y"], j, lambda yp, _y: self.prefix(
                sseq, j, lambda sp, _s: self.c("ci", join(yt, st1), join(blk["W"][0], xp, yp, sp), join(xt, st)))))
            return conj(law, markov)

        body = self.entry(seq["X"], t, lambda xt, lxt: self.entry(seq["Y"], t, lambda yt, lyt: self.entry(
            sseq, t, lambda st, lst: self.entry(sseq, t1, lambda st1, lst1: chan(xt, lxt, yt, lyt, st, lst, st1, lst1)))))
        body = exists([j.name, t1.name], conj(self.c("n_add", j, ONE, t), self.c("n_add", t, ONE, t1), body))
        parts["y"] = forall(t.name, Implies(self.in_range(t, N), body))

        dec = []
        everything = join(blk["W"][0], blk["X"][0], blk["Y"][0], sb)
        for i in range(1, k + 1):
            dec.append(self.columns([(seq["Zh"], N), (seq["W"], N), (seq["X"], N), (seq["Y"], N)], i,
                                    lambda zc, wc, xc, yc: self.c("ci", zc, everything, join(wc, xc, yc))))
        parts["z"] = conj(*dec)

        e = Var("E")
        f = self.v("F")
        parts["pe"] = exists(f.name, conj(self.c("ev_neq", blk["Z"][0], blk["Z"][1], blk["Zh"][0], blk["Zh"][1], f),
                                          self.c("prle", f, e)))

        block = [N.name, N1.name, K.name, ONE.name] + [self.I[i].name for i in range(2, k + 1)]
        for L in "WXYZ":
            block += [tup[L][0].name, tup[L][1].name]
        for L in ("W", "X", "Y", "Z", "Zh"):
            block += [blk[L][0].name, blk[L][1].name]
        block += [sb.name, lsb.name]
        inner = exists(block, conj(*consts, *parts.values()))
        self.sup.add(["E"])
        q = forall("E", Implies(conj(self.c("isev", e), Not(empty(e))), inner))
        return q, parts


def compile_Qk(spec):
    """The formula Q_k of spec, with its H-hierarchy level.

    Only k enters the formula: the distributions are carried by the free
    variables, which must be given the source, decoding, input, state and
    channel laws of spec (see network_model)."""
    if not isinstance(spec, NetworkSpec):
        raise NetworkError("compile_Qk needs a NetworkSpec")
    spec.validate()
    q, parts = _Builder(spec.k).build()
    extra = set(free_vars(q)) ^ set(free_names(spec.k))
    if extra:
        raise NetworkError(f"internal error: free variables differ by {sorted(extra)}")
    anchor = ("X1..X{k} must have a law with full support on the product of the input alphabets; "
              "it is otherwise arbitrary").format(k=spec.k)
    c = CompiledCapacityFormula(q, spec.k, tuple(free_names(spec.k)), anchor, parts)
    c.level = level_report(c)
    return c


def level_report(c):
    f = c.formula if isinstance(c, CompiledCapacityFormula) else c
    return classify(f, "H", "sugared")


def _labels(values):
    """L | A = a uniform on 3 + (index of a) points: labels with distinct sizes."""
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return {v: 3 + i for v, i in order.items()}


def network_model(spec, input_pmf=None):
    """A finite model of the free variables of Q_k for spec.

    (W, Z) follow source and decoding law, independent of
    (X, S, Y, S') which follow input_pmf (uniform by default), the initial
    state and the channel.  Each component is a separate column; L_S and
    L_S' label states consistently.
    """
    k = spec.k
    xs = list(product(*spec.input_alphabets))
    if input_pmf is None:
        input_pmf = {x: Fraction(1, len(xs)) for x in xs}
    input_pmf = {tuple(x): _frac(p) for x, p in input_pmf.items()}
    if sum(input_pmf.values()) != 1 or any(input_pmf.get(x, 0) <= 0 for x in xs):
        raise NetworkError("input law must be positive on every input tuple")
    wz = [(w, z, p * q) for w, p in spec.source.items() if p for z, q in spec.decoding[w].items() if q]
    xsy = [(x, s, y, s2, px * ps * q) for x, px in input_pmf.items() for s, ps in spec.initial_state.items() if ps
           for (y, s2), q in spec.channel[(x, s)].items() if q]
    sizes = _labels(spec.states())
    masses, cols = [], {n: [] for n in free_names(k) if not n.startswith("L_")}
    for (w, z, p1), (x, s, y, s2, p2) in product(wz, xsy):
        masses.append(p1 * p2)
        for i in range(k):
            for L, val in zip("WXYZ", (w, x, y, z)):
                cols[f"{L}{i + 1}"].append(val[i])
        cols["S"].append(s)
        cols["S'"].append(s2)
    # L_S | S = s is uniform on sizes[s] points: refine every atom
    out_m, out_c = [], {n: [] for n in cols}
    out_c["L_S"], out_c["L_S'"] = [], []
    for a, p in enumerate(masses):
        n1, n2 = sizes[cols["S"][a]], sizes[cols["S'"][a]]
        for u in range(n1):
            for v in range(n2):
                out_m.append(p / (n1 * n2))
                for n in cols:
                    out_c[n].append(cols[n][a])
                out_c["L_S"].append(u)
                out_c["L_S'"].append(v)
    return FiniteModel(out_m, out_c)
