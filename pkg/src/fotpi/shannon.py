"""Shannon-type entropy inequalities decided by exact linear programming.

A goal sum_S c_S H(X_S) >= 0 is provable when it is a nonnegative
combination of elemental inequalities (plus any multiple of the given
equality constraints).  The feasibility problem is solved with an exact
rational simplex using Bland's rule.  When it is infeasible the final
simplex multipliers give a point of the Shannon cone that satisfies the
constraints and violates the goal.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .formula import EntropyLinear


class ShannonError(ValueError):
    pass


class Status(Enum):
    PROVABLE = "Provable"
    NOT_PROVABLE = "NotProvable"

    def __str__(self):
        return self.value


def _subsets(n):
    return range(1, 1 << n)


def elemental_inequalities(n):
    """[(label, {mask: coeff})] for the n monotonicity and the
    C(n,2) 2^(n-2) conditional mutual information inequalities."""
    full = (1 << n) - 1
    out = []
    for i in range(n):
        rest = full & ~(1 << i)
        vec = {full: Fraction(1)}
        if rest:
            vec[rest] = Fraction(-1)
        out.append((("H", i, ()), vec))
    for i, j in combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i, j)]
        for r in range(len(others) + 1):
            for ks in combinations(others, r):
                kmask = sum(1 << k for k in ks)
                vec = {}
                for mask, c in ((kmask | 1 << i, 1), (kmask | 1 << j, 1), (kmask | 1 << i | 1 << j, -1), (kmask, -1)):
                    if mask:
                        vec[mask] = vec.get(mask, 0) + Fraction(c)
                out.append((("I", i, j, ks), vec))
    return out


def label_text(label, names):
    if label[0] == "H":
        _, i, _ = label
        rest = [names[k] for k in range(len(names)) if k != i]
        return f"H({names[i]}|{''.join(rest)})" if rest else f"H({names[i]})"
    _, i, j, ks = label
    cond = "".join(names[k] for k in ks)
    return f"I({names[i]};{names[j]}|{cond})" if cond else f"I({names[i]};{names[j]})"


@dataclass
class ShannonProblem:
    """goal >= 0 subject to constraints == 0 over the listed variables.

    goal and constraints are EntropyLinear atoms or {tuple of names: coeff}.
    """
    goal: object
    constraints: tuple = ()
    names: tuple = None
    cap: int = 6

    def __post_init__(self):
        if isinstance(self.goal, EntropyLinear):
            if self.goal.cmp != ">=":
                raise ShannonError("the goal must be a >= 0 inequality")
        cons = []
        for c in self.constraints:
            if isinstance(c, EntropyLinear) and c.cmp != "=":
                raise ShannonError("constraints must be equalities")
            cons.append(c)
        self.constraints = tuple(cons)
        if self.names is None:
            seen = set()
            for e in (self.goal,) + self.constraints:
                for k in _terms(e):
                    seen.update(k)
            self.names = tuple(sorted(seen))
        self.names = tuple(self.names)
        if len(self.names) > self.cap:
            raise ShannonError(f"{len(self.names)} variables exceed the cap of {self.cap}")

    @property
    def n(self):
        return len(self.names)

    def vector(self, e):
        idx = {v: i for i, v in enumerate(self.names)}
        out = {}
        for k, c in _terms(e).items():
            try:
                mask = sum(1 << idx[v] for v in k)
            except KeyError as err:
                raise ShannonError(f"unknown variable {err.args[0]}") from None
            out[mask] = out.get(mask, 0) + Fraction(c)
        return {m: c for m, c in out.items() if c}


def _terms(e):
    if isinstance(e, EntropyLinear):
        return dict(e.terms)
    return {tuple(sorted(k if isinstance(k, tuple) else tuple(k))): v for k, v in e.items()}


@dataclass
class ShannonVerdict:
    status: Status
    names: tuple
    certificate: dict = field(default_factory=dict)
    constraint_multipliers: tuple = ()
    ray: dict = None

    @property
    def provable(self):
        return self.status is Status.PROVABLE

    def to_dict(self):
        out = {"status": str(self.status), "variables": list(self.names)}
        if self.provable:
            out["certificate"] = {label_text(k, self.names): str(v) for k, v in self.certificate.items()}
            if self.constraint_multipliers:
                out["constraint_multipliers"] = [str(v) for v in self.constraint_multipliers]
        else:
            out["dual_ray"] = {_mask_text(m, self.names): str(v) for m, v in sorted(self.ray.items())}
        return out


def _mask_text(mask, names):
    return "H(" + "".join(names[i] for i in range(len(names)) if mask >> i & 1) + ")"


# -- exact simplex --------------------------------------------------------


def _phase_one(cols, b):
    """Find x >= 0 with sum_j x_j cols[j] = b, or a Farkas vector.

    cols: list of dicts row -> value; b: list.  Returns ("feasible", x) or
    ("infeasible", z) with z.col >= 0 for every column and z.b < 0.
    """
    m = len(b)
    flip = [1 if bi >= 0 else -1 for bi in b]
    ncol = len(cols)
    # tableau rows: [x columns | artificials | rhs]
    T = []
    for i in range(m):
        row = [Fraction(0)] * (ncol + m + 1)
        for j, c in enumerate(cols):
            v = c.get(i)
            if v:
                row[j] = flip[i] * v
        row[ncol + i] = Fraction(1)
        row[-1] = flip[i] * b[i]
        T.append(row)
    basis = [ncol + i for i in range(m)]
    cost = [Fraction(0)] * ncol + [Fraction(1)] * m
    # reduced cost row: cost - c_B B^-1 A
    red = list(cost) + [Fraction(0)]
    for i in range(m):
        for j in range(ncol + m + 1):
            red[j] -= T[i][j]
    while True:
        enter = next((j for j in range(ncol + m) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ShannonError("phase one is unbounded, which cannot happen")
        r = best[1]
        piv = T[r][enter]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][enter]:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        f = red[enter]
        red = [a - f * c for a, c in zip(red, T[r])]
        basis[r] = enter
    if red[-1] == 0:
        x = [Fraction(0)] * ncol
        for i, j in enumerate(basis):
            if j < ncol:
                x[j] = T[i][-1]
        return "feasible", x
    # multipliers y_i = cost_art - red_art = 1 - red[ncol+i]; z = -y, unflipped
    z = [-(1 - red[ncol + i]) * flip[i] for i in range(m)]
    return "infeasible", z


def prove_shannon(problem, constraints=(), names=None, cap=6):
    """Decide whether the goal is implied by the Shannon inequalities and the
    equality constraints; the certificate is checked before returning."""
    if not isinstance(problem, ShannonProblem):
        problem = ShannonProblem(problem, tuple(constraints), names, cap)
    n = problem.n
    if n == 0:
        raise ShannonError("no variables")
    masks = list(_subsets(n))
    row = {mk: i for i, mk in enumerate(masks)}
    goal = problem.vector(problem.goal)
    elem = elemental_inequalities(n)
    cons = [problem.vector(c) for c in problem.constraints]
    cols = [{row[mk]: v for mk, v in vec.items()} for _, vec in elem]
    for c in cons:
        col = {row[mk]: v for mk, v in c.items()}
        cols.append(col)
        cols.append({i: -v for i, v in col.items()})
    b = [goal.get(mk, Fraction(0)) for mk in masks]
    kind, sol = _phase_one(cols, b)
    if kind == "feasible":
        lam = {elem[j][0]: sol[j] for j in range(len(elem)) if sol[j]}
        mu = tuple(sol[len(elem) + 2 * k] - sol[len(elem) + 2 * k + 1] for k in range(len(cons)))
        verdict = ShannonVerdict(Status.PROVABLE, problem.names, lam, mu)
        if not verify_certificate(problem, verdict):
            raise ShannonError("certificate failed to recombine to the goal")
        return verdict
    ray = {mk: sol[row[mk]] for mk in masks if sol[row[mk]]}
    verdict = ShannonVerdict(Status.NOT_PROVABLE, problem.names, ray=ray)
    if not verify_ray(problem, verdict):
        raise ShannonError("dual ray failed verification")
    return verdict


def verify_certificate(problem, verdict):
    """Exact recombination of the multipliers into the goal."""
    if any(v < 0 for v in verdict.certificate.values()):
        return False
    elem = dict(elemental_inequalities(problem.n))
    acc = {}
    for label, lam in verdict.certificate.items():
        for mk, v in elem[label].items():
            acc[mk] = acc.get(mk, 0) + lam * v
    for mu, c in zip(verdict.constraint_multipliers, problem.constraints):
        for mk, v in problem.vector(c).items():
            acc[mk] = acc.get(mk, 0) + mu * v
    acc = {mk: v for mk, v in acc.items() if v}
    return acc == problem.vector(problem.goal)


def _dot(vec, point):
    return sum(v * point.get(mk, 0) for mk, v in vec.items())


def verify_ray(problem, verdict):
    """The ray satisfies every elemental inequality and every constraint and
    makes the goal negative."""
    h = verdict.ray or {}
    if any(_dot(vec, h) < 0 for _, vec in elemental_inequalities(problem.n)):
        return False
    if any(_dot(problem.vector(c), h) != 0 for c in problem.constraints):
        return False
    return _dot(problem.vector(problem.goal), h) < 0


def zhang_yeung(a="A", b="B", c="C", d="D"):
    """2I(C;D) <= I(A;B) + I(A;CD) + 3I(C;D|A) + I(C;D|B) as an entropy atom."""
    def mi(x, y, z=()):
        # I(x;y|z) as {subset: coeff}
        out = {}
        for s, k in ((x + z, 1), (y + z, 1), (x + y + z, -1), (z, -1)):
            if s:
                key = tuple(sorted(set(s)))
                out[key] = out.get(key, 0) + k
        return out

    a, b, c, d = (a,), (b,), (c,), (d,)
    total = {}
    for part, k in ((mi(a, b), 1), (mi(a, c + d), 1), (mi(c, d, a), 3), (mi(c, d, b), 1), (mi(c, d), -2)):
        for s, v in part.items():
            total[s] = total.get(s, 0) + k * v
    return EntropyLinear({s: v for s, v in total.items() if v}, ">=")
