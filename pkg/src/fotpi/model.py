"""Finite probability spaces with exact rational masses.

A model is a list of atoms with Fraction masses and a set of named random
variables, each a tuple of integer labels (one label per atom).
"""
import json
import math
from collections import Counter, defaultdict
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import permutations

from sympy import factorint


class ModelError(ValueError):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ModelError(f"not an exact rational: {x!r}")


def term_names(t):
    """Variable names making up a term (Var, Join, str or iterable of str)."""
    if isinstance(t, str):
        return (t,)
    parts = getattr(t, "parts", None)
    if parts is not None:
        return tuple(p.name for p in parts)
    name = getattr(t, "name", None)
    if name is not None:
        return (name,)
    return tuple(t)


class FiniteModel:
    """Immutable finite model. masses sum to exactly one."""

    def __init__(self, masses, variables):
        masses = tuple(_frac(p) for p in masses)
        if not masses:
            raise ModelError("empty sample space")
        if any(p < 0 for p in masses):
            raise ModelError("negative mass")
        if sum(masses) != 1:
            raise ModelError(f"masses sum to {sum(masses)}, not 1")
        vs = {}
        for name, labels in variables.items():
            labels = tuple(int(v) for v in labels)
            if len(labels) != len(masses):
                raise ModelError(f"variable {name} has {len(labels)} labels for {len(masses)} atoms")
            if any(v < 0 for v in labels):
                raise ModelError(f"variable {name} has a negative label")
            vs[name] = labels
        self.masses = masses
        self.vars = vs
        den = reduce(math.lcm, (p.denominator for p in masses), 1)
        self.den = den
        self.weights = tuple(p.numerator * (den // p.denominator) for p in masses)
        self._cols = {}

    def __repr__(self):
        return f"FiniteModel({[str(p) for p in self.masses]}, {self.vars})"

    def __eq__(self, other):
        return isinstance(other, FiniteModel) and self.masses == other.masses and self.vars == other.vars

    def __hash__(self):
        return hash((self.masses, tuple(sorted(self.vars.items()))))

    @property
    def size(self):
        return len(self.masses)

    def names(self):
        return sorted(self.vars)

    def column(self, t):
        """Per-atom values of a term; joins give tuples, constants give 0."""
        names = term_names(t)
        key = tuple(sorted(set(names)))
        col = self._cols.get(key)
        if col is not None:
            return col
        for n in key:
            if n not in self.vars:
                raise ModelError(f"unknown variable {n}")
        if len(key) == 1:
            col = self.vars[key[0]]
        elif not key:
            col = (0,) * len(self.masses)
        else:
            col = tuple(zip(*(self.vars[n] for n in key)))
        self._cols[key] = col
        return col

    def dist(self, t):
        """Integer weights of each value (over self.den); zero-mass values omitted."""
        d = defaultdict(int)
        for v, w in zip(self.column(t), self.weights):
            if w:
                d[v] += w
        return dict(d)

    def pmf(self, t):
        return {v: Fraction(w, self.den) for v, w in self.dist(t).items()}

    def support(self, t):
        return set(self.dist(t))

    def support_size(self, t):
        return len(self.dist(t))

    def sorted_masses(self, t):
        return sorted(self.dist(t).values())

    # -- construction -----------------------------------------------------

    def _derived(self, vs):
        """Same atoms and masses, new variables (labels already checked)."""
        out = object.__new__(FiniteModel)
        out.masses, out.den, out.weights = self.masses, self.den, self.weights
        out.vars = vs
        out._cols = {}
        return out

    def with_var(self, name, labels):
        labels = tuple(int(v) for v in labels)
        if len(labels) != len(self.masses) or any(v < 0 for v in labels):
            raise ModelError(f"bad labels for variable {name}")
        vs = dict(self.vars)
        vs[name] = labels
        return self._derived(vs)

    def rename(self, mapping):
        return FiniteModel(self.masses, {mapping.get(k, k): v for k, v in self.vars.items()})

    def project(self, names):
        """Marginal model on the given variables with identical atoms merged."""
        names = sorted(set(names))
        for n in names:
            if n not in self.vars:
                raise ModelError(f"unknown variable {n}")
        acc = {}
        for i, w in enumerate(self.weights):
            if not w:
                continue
            key = tuple(self.vars[n][i] for n in names)
            acc[key] = acc.get(key, 0) + w
        keys = sorted(acc)
        masses = [Fraction(acc[k], self.den) for k in keys]
        return FiniteModel(masses, {n: [k[j] for k in keys] for j, n in enumerate(names)})

    def compress(self):
        return self.project(self.vars)

    def refine(self, k):
        """Split every atom into k equal parts."""
        if k < 1:
            raise ModelError("refinement factor must be >= 1")
        masses = [p / k for p in self.masses for _ in range(k)]
        return FiniteModel(masses, {n: [v for v in col for _ in range(k)] for n, col in self.vars.items()})

    def adjoin(self, name, rows):
        """Adjoin a new variable drawn from rows[i] (value -> prob) on atom i."""
        if name in self.vars:
            raise ModelError(f"variable {name} already present")
        if len(rows) != len(self.masses):
            raise ModelError("one kernel row per atom required")
        masses, newcol, src = [], [], []
        for i, (p, row) in enumerate(zip(self.masses, rows)):
            row = {int(v): _frac(q) for v, q in row.items()}
            if any(q < 0 for q in row.values()) or sum(row.values()) != 1:
                raise ModelError(f"kernel row {i} is not a probability vector")
            for v in sorted(row):
                if row[v]:
                    masses.append(p * row[v])
                    newcol.append(v)
                    src.append(i)
        vs = {n: [col[i] for i in src] for n, col in self.vars.items()}
        vs[name] = newcol
        return FiniteModel(masses, vs)

    def adjoin_given(self, name, given, table):
        """Adjoin a variable whose law depends on the value of a term."""
        col = self.column(given)
        return self.adjoin(name, [table[v] for v in col])

    def adjoin_independent(self, name, pmf):
        return self.adjoin(name, [pmf] * len(self.masses))

    def adjoin_function(self, name, fn):
        """Adjoin a deterministic variable; fn maps atom index to a label."""
        if name in self.vars:
            raise ModelError(f"variable {name} already present")
        return self.with_var(name, [fn(i) for i in range(len(self.masses))])

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return {"space": [str(p) for p in self.masses], "vars": {k: list(v) for k, v in sorted(self.vars.items())}}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "space" not in d or "vars" not in d:
            raise ModelError("model document needs 'space' and 'vars'")
        try:
            masses = [_frac(p) for p in d["space"]]
        except (ValueError, ZeroDivisionError) as e:
            raise ModelError(f"bad mass: {e}") from None
        return cls(masses, d["vars"])


def load_model(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return FiniteModel.from_dict(doc)


def dump_model(m, path):
    with open(path, "w") as fh:
        json.dump(m.to_dict(), fh, indent=2)


def uniform_model(**cols):
    """Equiprobable atoms with the given label columns."""
    n = len(next(iter(cols.values())))
    return FiniteModel([Fraction(1, n)] * n, cols)


# -- direct semantic checks ---------------------------------------------


def _joint(m, s, t):
    cs, ct = m.column(s), m.column(t)
    d = defaultdict(int)
    for a, b, w in zip(cs, ct, m.weights):
        if w:
            d[a, b] += w
    return d


def check_indep(m, s, t):
    ds, dt = m.dist(s), m.dist(t)
    joint = _joint(m, s, t)
    den = m.den
    for a, wa in ds.items():
        for b, wb in dt.items():
            if joint.get((a, b), 0) * den != wa * wb:
                return False
    return True


def check_ci(m, s, t, u):
    """s independent of t given u, on every positive-mass value of u."""
    cs, ct, cu = m.column(s), m.column(t), m.column(u)
    by_u = defaultdict(list)
    for a, b, c, w in zip(cs, ct, cu, m.weights):
        if w:
            by_u[c].append((a, b, w))
    for rows in by_u.values():
        tot = sum(w for _, _, w in rows)
        pa, pb, pab = defaultdict(int), defaultdict(int), defaultdict(int)
        for a, b, w in rows:
            pa[a] += w
            pb[b] += w
            pab[a, b] += w
        for a, wa in pa.items():
            for b, wb in pb.items():
                if pab.get((a, b), 0) * tot != wa * wb:
                    return False
    return True


def is_function_of(m, s, t):
    seen = {}
    for a, b, w in zip(m.column(s), m.column(t), m.weights):
        if w and seen.setdefault(b, a) != a:
            return False
    return True


def relabel_equal(m, s, t):
    return is_function_of(m, s, t) and is_function_of(m, t, s)


def same_dist_relabel(m, s, t):
    return m.sorted_masses(s) == m.sorted_masses(t)


def _kernel(m, target, conds):
    cy, cx = m.column(target), m.column(conds)
    rows = defaultdict(lambda: defaultdict(int))
    for y, x, w in zip(cy, cx, m.weights):
        if w:
            rows[x][y] += w
    out = {}
    for x, row in rows.items():
        tot = sum(row.values())
        out[x] = {y: Fraction(w, tot) for y, w in row.items()}
    return out


def cond_dist_relabel(m, lhs, rhs, cap=8):
    """lhs=(target, conds) r~ rhs=(target, conds).

    True iff there are injective relabellings of the lhs target and lhs
    conditioning values under which every positive-mass lhs kernel row equals
    the rhs kernel row at the image value (which must have positive mass).
    """
    ltarget, lconds = lhs
    rtarget, rconds = rhs
    lk = _kernel(m, ltarget, tuple(n for c in lconds for n in term_names(c)))
    rk = _kernel(m, rtarget, tuple(n for c in rconds for n in term_names(c)))
    ly = sorted({y for row in lk.values() for y in row}, key=repr)
    ry = sorted({y for row in rk.values() for y in row}, key=repr)
    if max(len(ly), len(ry)) > cap:
        raise ModelError(f"support exceeds relabelling cap {cap}")
    if len(ly) > len(ry) or len(lk) > len(rk):
        return False
    rsig = Counter(tuple(sorted(row.items(), key=repr)) for row in rk.values())
    for image in permutations(ry, len(ly)):
        psi = dict(zip(ly, image))
        need = Counter(tuple(sorted(((psi[y], q) for y, q in row.items()), key=repr)) for row in lk.values())
        if all(rsig[k] >= c for k, c in need.items()):
            return True
    return False


# -- exact entropy sign -------------------------------------------------


class EntropySign(Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    def __str__(self):
        return self.name.lower()


def _log_exponents(m, names):
    """H(X_S) * den as a map prime -> rational exponent of log(prime)."""
    exps = defaultdict(Fraction)
    den = m.den
    for w in m.dist(names).values():
        p = Fraction(w, den)
        # -p log p = p log(den) - p log(w)
        for q, e in factorint(den).items():
            exps[q] += p * e
        for q, e in factorint(w).items():
            exps[q] -= p * e
    return exps


def entropy_value_exponents(m, terms):
    """Sum of coeff * H(subset) as {prime: rational exponent}."""
    total = defaultdict(Fraction)
    for subset, coeff in terms.items():
        coeff = _frac(coeff)
        if not coeff:
            continue
        names = tuple(n for t in subset for n in term_names(t))
        for q, e in _log_exponents(m, names).items():
            total[q] += coeff * e
    return {q: e for q, e in total.items() if e}


def entropy_sign(m, terms):
    """Exact sign of sum_S a_S H(X_S).

    The sum equals sum_q E_q log q over primes q.  With common denominator D
    the sign is that of prod q^(D E_q) - 1, compared as two integers.
    """
    if not terms:
        raise ModelError("empty entropy expression")
    exps = entropy_value_exponents(m, terms)
    if not exps:
        return EntropySign.ZERO
    den = reduce(math.lcm, (e.denominator for e in exps.values()), 1)
    ints = {q: int(e * den) for q, e in exps.items()}
    g = reduce(math.gcd, (abs(v) for v in ints.values()))
    num = dnm = 1
    for q, v in ints.items():
        v //= g
        if v > 0:
            num *= q ** v
        else:
            dnm *= q ** (-v)
    if num == dnm:
        return EntropySign.ZERO
    return EntropySign.POSITIVE if num > dnm else EntropySign.NEGATIVE


def entropy_float(m, names):
    """Floating entropy in bits, for display only."""
    return -sum(float(p) * math.log2(p) for p in m.pmf(names).values())


# -- small-model corpus ---------------------------------------------------


def restricted_growth(n, maxval=None):
    """All labelings of n atoms in first-occurrence order."""
    if n == 0:
        yield ()
        return
    out = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(out)
            return
        hi = top + 1 if maxval is None else min(top + 1, maxval - 1)
        for v in range(hi + 1):
            out[i] = v
            yield from rec(i + 1, max(top, v))

    out[0] = 0
    yield from rec(1, 0)


def all_labelings(n, maxval):
    def rec(i):
        if i == n:
            yield ()
            return
        for rest in rec(i + 1):
            for v in range(maxval):
                yield (v,) + rest
    return rec(0)


def _relabel_first(col):
    seen = {}
    return tuple(seen.setdefault(v, len(seen)) for v in col)


def _canonical(cols):
    """Canonical form of equiprobable label columns up to atom order and
    per-variable relabelling."""
    n = len(cols[0])
    best = None
    for perm in permutations(range(n)):
        key = tuple(_relabel_first([c[i] for i in perm]) for c in cols)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def _corpus(names, max_atoms, max_values):
    """Equiprobable models on 1..max_atoms atoms with at most max_values
    distinct values per variable, one per class up to atom permutation and
    relabelling."""
    seen = set()
    out = []
    names = list(names)
    for m in range(1, max_atoms + 1):
        # with the atom order fixed, each per-variable relabelling class has
        # exactly one first-occurrence representative
        cols = [list(restricted_growth(m, max_values))] * len(names)

        def rec(i, acc):
            if i == len(names):
                yield acc
                return
            for c in cols[i]:
                yield from rec(i + 1, acc + [c])

        quick = set()
        for combo in rec(0, []):
            q = tuple(sorted(zip(*combo)))
            if q in quick:
                continue
            quick.add(q)
            key = _canonical(combo)
            if key in seen:
                continue
            seen.add(key)
            out.append(uniform_model(**dict(zip(names, combo))))
    return tuple(out)


def corpus(names, max_atoms=4, max_values=3):
    return list(_corpus(tuple(names), max_atoms, max_values))
