"""Normal forms: negation normal form, prenex form and join elimination."""
from .formula import (And, CondDistRel, Const, EntropyLinear, Exists, Forall, FormulaError, Iff,
                      Implies, Indep, Join, MacroCall, NameSupply, Not, Or, Var, all_names, contains_macros,
                      free_vars, rename_bound_apart)


def _no_macros(f):
    if contains_macros(f):
        raise FormulaError("expand macro calls first")


def to_nnf(f):
    """Negations on atoms only; implications and equivalences removed."""
    _no_macros(f)
    return _nnf(f, True)


def _nnf(f, pos):
    if isinstance(f, Const):
        return f if pos else Const(not f.value)
    if isinstance(f, (Indep, EntropyLinear, CondDistRel)):
        return f if pos else Not(f)
    if isinstance(f, Not):
        return _nnf(f.body, not pos)
    if isinstance(f, (And, Or)):
        kind = type(f) if pos else (Or if isinstance(f, And) else And)
        return kind(tuple(_nnf(a, pos) for a in f.args))
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.left), f.right)), pos)
    if isinstance(f, Iff):
        return _nnf(And((Implies(f.left, f.right), Implies(f.right, f.left))), pos)
    if isinstance(f, (Exists, Forall)):
        kind = type(f) if pos else (Forall if isinstance(f, Exists) else Exists)
        return kind(f.vars, _nnf(f.body, pos), f.hint)
    raise FormulaError(f"not a formula: {f!r}")


def to_prenex(f):
    """Prenex form of an NNF formula.

    Binders are renamed apart first.  Quantifier blocks of sibling
    subformulae are merged greedily: equal-kind heads fuse; otherwise the
    side with more remaining blocks goes first, and on a tie the
    existential block goes first.  Vacuous variables are dropped.
    """
    _no_macros(f)
    g = rename_bound_apart(_nnf(f, True))
    blocks, matrix = _prenex(g)
    used = free_vars(matrix)
    out = matrix
    for kind, vs in reversed(blocks):
        vs = tuple(v for v in vs if v in used)
        if vs:
            out = kind(vs, out)
    return out


def _prenex(f):
    if isinstance(f, (Exists, Forall)):
        blocks, m = _prenex(f.body)
        kind = type(f)
        if blocks and blocks[0][0] is kind:
            blocks = [(kind, tuple(f.vars) + blocks[0][1])] + blocks[1:]
        else:
            blocks = [(kind, tuple(f.vars))] + blocks
        return blocks, m
    if isinstance(f, (And, Or)):
        parts = [_prenex(a) for a in f.args]
        blocks = []
        for b, _ in parts:
            blocks = _merge(blocks, b)
        return blocks, type(f)(tuple(m for _, m in parts))
    return [], f


def _merge(a, b):
    a, b = list(a), list(b)
    out = []
    while a or b:
        if not a or not b:
            head = (a or b).pop(0)
        elif a[0][0] is b[0][0]:
            head = (a[0][0], a[0][1] + b[0][1])
            a.pop(0)
            b.pop(0)
        elif len(a) != len(b):
            head = (a if len(a) > len(b) else b).pop(0)
        else:
            head = (a if a[0][0] is Exists else b).pop(0)
        if out and out[-1][0] is head[0]:
            out[-1] = (head[0], out[-1][1] + head[1])
        else:
            out.append(head)
    return out


# -- join elimination ------------------------------------------------------


def _joins(f, scopes, depth, pos, out):
    """Collect (join, scope var, depth, polarity of first occurrence)."""
    if isinstance(f, Indep):
        for t in (f.left, f.right):
            if isinstance(t, Join):
                best = (0, None, None)
                for n in t.names():
                    if n in scopes:
                        d, key, kind = scopes[n]
                        if d > best[0]:
                            best = (d, key, kind)
                k = (t.names(), best[1])
                if k not in out:
                    out[k] = (t, best[1], best[0], pos, best[2])
        return
    if isinstance(f, (EntropyLinear, CondDistRel)):
        raise FormulaError("strict pi mode admits independence atoms only")
    if isinstance(f, (Const, MacroCall)):
        return
    if isinstance(f, Not):
        _joins(f.body, scopes, depth, not pos, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _joins(a, scopes, depth, pos, out)
    elif isinstance(f, Implies):
        _joins(f.left, scopes, depth, not pos, out)
        _joins(f.right, scopes, depth, pos, out)
    elif isinstance(f, Iff):
        _joins(f.left, scopes, depth, pos, out)
        _joins(f.right, scopes, depth, pos, out)
    elif isinstance(f, (Exists, Forall)):
        inner = dict(scopes)
        for v in f.vars:
            inner[v] = (depth + 1, f.vars[0], type(f))
        _joins(f.body, inner, depth + 1, pos, out)
    else:
        raise FormulaError(f"not a formula: {f!r}")


def _replace(f, names, w):
    if isinstance(f, Indep):
        l = w if isinstance(f.left, Join) and f.left.names() == names else f.left
        r = w if isinstance(f.right, Join) and f.right.names() == names else f.right
        return Indep(l, r) if (l, r) != (f.left, f.right) else f
    if isinstance(f, Not):
        return Not(_replace(f.body, names, w))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_replace(a, names, w) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_replace(f.left, names, w), _replace(f.right, names, w))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.vars, _replace(f.body, names, w), f.hint)
    return f


def _wrap(body, kind, w, joint):
    hint = ("join", tuple(Var(n) for n in joint[1]))
    if kind is Exists:
        return Exists((w,), And((joint[0], body)), hint)
    return Forall((w,), Implies(joint[0], body), hint)


def _at_scope(f, key, fn):
    if key is None:
        return fn(f)
    if isinstance(f, (Exists, Forall)):
        if f.vars[0] == key:
            return type(f)(f.vars, fn(f.body), f.hint)
        return type(f)(f.vars, _at_scope(f.body, key, fn), f.hint)
    if isinstance(f, Not):
        return Not(_at_scope(f.body, key, fn))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_at_scope(a, key, fn) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_at_scope(f.left, key, fn), _at_scope(f.right, key, fn))
    return f


def eliminate_joins(f, mode="strict_pi", registry=None, expand_joint=True):
    """Replace join terms by fresh variables constrained by the joint macro.

    Each join is introduced right below the deepest binder of its parts
    (or at the top), innermost first.  The new binder is existential (with
    a conjunction) or universal (with an implication), whichever gives the
    whole formula the lower level; ties follow the enclosing binder's kind,
    or at the top the polarity of the first occurrence.
    """
    if mode == "sugared":
        return f
    if mode != "strict_pi":
        raise FormulaError(f"unknown join elimination mode {mode!r}")
    _no_macros(f)
    from .hierarchy import level_of
    if registry is None:
        from .macros import REGISTRY as registry
    g = rename_bound_apart(f)
    supply = NameSupply(all_names(g), prefix="W")
    while True:
        g = rename_bound_apart(g)
        supply.add(all_names(g))
        found = {}
        _joins(g, {}, 0, True, found)
        if not found:
            break
        term, key, depth, pos, kind = max(found.values(), key=lambda x: (x[2], len(x[0].names())))
        w = supply.fresh("W")
        jf = MacroCall("joint", (Var(w),) + term.parts)
        if expand_joint:
            jf = registry.expand_all(jf, "pi")
        joint = (jf, term.names())
        options = []
        for qk in (Exists, Forall):
            cand = _at_scope(g, key, lambda body: _wrap(_replace(body, term.names(), Var(w)), qk, w, joint))
            s, p = level_of(cand, "pi", registry)
            pref = kind if kind is not None else (Exists if pos else Forall)
            options.append(((min(s, p), max(s, p), qk is not pref), cand))
        options.sort(key=lambda o: o[0])
        g = options[0][1]
    return rename_bound_apart(g)
