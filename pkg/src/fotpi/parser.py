"""Concrete syntax: tokenizer, recursive-descent parser and printer.

    formula  := iff
    iff      := imp ("<->" imp)*
    imp      := or ("->" imp)?
    or       := and ("or" and)*
    and      := unary ("and" unary)*
    unary    := "not" unary | ("exists"|"forall") ids "." formula | primary
    primary  := "(" formula ")" | "true" | "false" | "indep(" term "," term ")"
              | "cdrel(" term "|" terms "~" term "|" terms ")"
              | linear cmp linear | ident "(" args ")"
    term     := ident | "join(" term ("," term)* ")"
    linear   := ["-"] mono (("+"|"-") mono)*    mono := [rat "*"] "H(" terms ")" | rat
    args     := arg ("," arg)*    arg := term | nat | "\\" ids "." formula | "#{" arith "}"
"""
import re
from fractions import Fraction

from . import arith as A
from .formula import (FALSE, TRUE, CondDistRel, Const, EntropyLinear, Exists, Forall, Iff, Implies,
                      Indep, Join, Lambda, MacroCall, Not, Or, And, Var, join)


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg, self.line, self.col = msg, line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^{\n][^\n]*)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><->|->|>=|<=|\#\{|[()<>=,.|~*+\-\\}])
""", re.X)

KEYWORDS = {"not", "and", "or", "exists", "forall", "true", "false", "indep", "join", "cdrel", "div", "mod"}


class Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def tokenize(src):
    out = []
    i = 0
    while i < len(src):
        m = TOKEN.match(src, i)
        if not m:
            raise ParseError(f"unexpected character {src[i]!r}", *_linecol(src, i))
        if m.lastgroup != "ws":
            out.append(Tok(m.lastgroup, m.group(), i))
        i = m.end()
    out.append(Tok("eof", "", len(src)))
    return out


def _linecol(src, pos):
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class Parser:
    def __init__(self, src, registry=None, check_macros=True):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.registry = registry
        self.check = check_macros

    # -- helpers

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, *_linecol(self.src, tok.pos))

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("op", "id")

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def ident(self):
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            raise self.error(f"expected identifier, got {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def idents(self):
        out = [self.ident()]
        while self.accept(","):
            out.append(self.ident())
        return out

    # -- formulae

    def parse(self):
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self):
        left = self.imp()
        while self.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self):
        args = [self.conj()]
        while self.accept("or"):
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self):
        args = [self.unary()]
        while self.accept("and"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        if self.accept("not"):
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            kind = Exists if self.tok.text == "exists" else Forall
            self.i += 1
            vs = self.idents()
            self.expect(".")
            return kind(tuple(vs), self.formula())
        return self.primary()

    def primary(self):
        t = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("indep"):
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Indep(a, b)
        if self.accept("cdrel"):
            return self.cdrel()
        if t.kind == "num" or t.text == "-" or (t.text == "H" and self.peek().text == "("):
            return self.linear_atom()
        if t.kind == "id" and t.text not in KEYWORDS and self.peek().text == "(":
            return self.macro()
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def term(self):
        if self.accept("join"):
            self.expect("(")
            parts = [self.term()]
            while self.accept(","):
                parts.append(self.term())
            self.expect(")")
            return join(*parts)
        return Var(self.ident())

    def terms_until(self, stop):
        out = []
        if self.at(stop):
            return out
        out.append(self.term())
        while self.accept(","):
            out.append(self.term())
        return out

    def cdrel(self):
        self.expect("(")
        lt = self.term()
        self.expect("|")
        lc = self.terms_until("~")
        self.expect("~")
        rt = self.term()
        self.expect("|")
        rc = self.terms_until(")")
        self.expect(")")
        if len(lc) != len(rc):
            raise self.error("conditional relation needs equally many conditions on both sides")
        return CondDistRel(tuple(lc), lt, tuple(rc), rt)

    # -- linear entropy atoms

    def rational(self):
        t = self.tok
        if t.kind != "num":
            raise self.error("expected a number")
        self.i += 1
        try:
            return Fraction(t.text)
        except ZeroDivisionError:
            raise self.error("zero denominator", t) from None

    def linear(self):
        acc = {}
        sign = 1
        if self.accept("-"):
            sign = -1
        while True:
            coeff = Fraction(1)
            key = None
            if self.tok.kind == "num":
                coeff = self.rational()
                if self.accept("*"):
                    key = self.h_term()
            else:
                key = self.h_term()
            if key is None:
                if coeff:
                    acc[None] = acc.get(None, 0) + sign * coeff
            else:
                acc[key] = acc.get(key, 0) + sign * coeff
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return acc

    def h_term(self):
        if not (self.tok.text == "H" and self.peek().text == "("):
            raise self.error("expected H(...)")
        self.i += 2
        names = set()
        for t in self.terms_until(")"):
            names.update(t.names())
        self.expect(")")
        if not names:
            raise self.error("entropy of no variables")
        return tuple(sorted(names))

    def linear_atom(self):
        start = self.tok
        lhs = self.linear()
        op = self.tok.text
        if op not in (">=", ">", "=", "<=", "<"):
            raise self.error("expected a comparison after a linear entropy expression")
        self.i += 1
        rhs = self.linear()
        if op in ("<=", "<"):
            lhs, rhs = rhs, lhs
            op = ">=" if op == "<=" else ">"
        total = dict(lhs)
        for k, v in rhs.items():
            total[k] = total.get(k, 0) - v
        if total.pop(None, 0):
            raise self.error("constant terms are not allowed in entropy atoms", start)
        total = {k: v for k, v in total.items() if v}
        if not total:
            raise self.error("entropy atom with no nonzero coefficient", start)
        return EntropyLinear(total, op)

    # -- macros

    def macro(self):
        t = self.tok
        name = self.ident()
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.arg())
            while self.accept(","):
                args.append(self.arg())
        self.expect(")")
        if self.check:
            reg = self.registry
            if reg is None:
                from .macros import REGISTRY as reg
            try:
                reg.check_call(name, args)
            except Exception as e:
                raise ParseError(str(e), *_linecol(self.src, t.pos)) from None
        return MacroCall(name, tuple(args))

    def arg(self):
        t = self.tok
        if t.kind == "num":
            if "/" in t.text:
                raise self.error("natural number expected")
            self.i += 1
            return int(t.text)
        if self.accept("\\"):
            ps = self.idents()
            self.expect(".")
            return Lambda(tuple(ps), self.formula())
        if self.accept("#{"):
            p = ArithParser(self).pred()
            self.expect("}")
            return p
        return self.term()


class ArithParser:
    """Arithmetic predicates inside #{...}, sharing the token stream."""

    def __init__(self, outer):
        self.o = outer

    def pred(self):
        o = self.o
        left = self.imp()
        while o.accept("<->"):
            left = A.AIff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.o.accept("->"):
            return A.AImplies(left, self.imp())
        return left

    def disj(self):
        args = [self.conj()]
        while self.o.accept("or"):
            args.append(self.conj())
        return args[0] if len(args) == 1 else A.AOr(tuple(args))

    def conj(self):
        args = [self.unary()]
        while self.o.accept("and"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else A.AAnd(tuple(args))

    def unary(self):
        o = self.o
        if o.accept("not"):
            return A.ANot(self.unary())
        if o.at("exists") or o.at("forall"):
            kind = A.AExists if o.tok.text == "exists" else A.AForall
            o.i += 1
            vs = o.idents()
            o.expect(".")
            body = self.pred()
            for v in reversed(vs):
                body = kind(v, body)
            return body
        if o.accept("div"):
            o.expect("(")
            a = self.term()
            o.expect(",")
            b = self.term()
            o.expect(")")
            return A.ADiv(a, b)
        if o.accept("mod"):
            o.expect("(")
            a = self.term()
            o.expect(",")
            m = self.term()
            o.expect(",")
            r = self.term()
            o.expect(")")
            return A.AMod(a, m, r)
        save = o.i
        if o.at("("):
            # either a parenthesised predicate or a term starting a comparison
            try:
                return self.comparison()
            except ParseError:
                o.i = save
            o.expect("(")
            p = self.pred()
            o.expect(")")
            return p
        return self.comparison()

    def comparison(self):
        o = self.o
        a = self.term()
        op = o.tok.text
        if op not in ("=", "<", "<="):
            raise o.error("expected =, < or <=")
        o.i += 1
        return A.ACmp(op, a, self.term())

    def term(self):
        left = self.prod()
        while self.o.accept("+"):
            left = A.AAdd(left, self.prod())
        return left

    def prod(self):
        left = self.atom()
        while self.o.accept("*"):
            left = A.AMul(left, self.atom())
        return left

    def atom(self):
        o = self.o
        t = o.tok
        if t.kind == "num":
            if "/" in t.text:
                raise o.error("natural number expected")
            o.i += 1
            return A.AConst(int(t.text))
        if o.accept("("):
            x = self.term()
            o.expect(")")
            return x
        return A.AVar(o.ident())


def parse(text, registry=None, check_macros=True):
    """Parse DSL text into a formula."""
    return Parser(text, registry, check_macros).parse()


# -- printing -------------------------------------------------------------


def _term(t):
    return str(t)


def _coeff(c, first):
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    body = "" if a == 1 else f"{a}*"
    return sign, body


def _linear(f):
    out = []
    for i, (k, c) in enumerate(f.terms):
        sign, body = _coeff(c, i == 0)
        h = "H(" + ", ".join(k) + ")"
        if i == 0:
            out.append(f"{sign}{body}{h}")
        else:
            out.append(f"{sign} {body}{h}")
    return " ".join(out) + f" {f.cmp} 0"


def _arg(a):
    if isinstance(a, bool):
        raise ValueError("boolean macro argument")
    if isinstance(a, int):
        return str(a)
    if isinstance(a, (Var, Join)):
        return _term(a)
    if isinstance(a, Lambda):
        return "\\" + ", ".join(a.params) + ". " + to_text(a.body)
    if isinstance(a, A.APred):
        return "#{" + A.to_text(a) + "}"
    raise ValueError(f"unprintable macro argument {a!r}")


def to_text(f):
    """Fully parenthesised concrete syntax; parse(to_text(f)) == f."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Indep):
        return f"indep({_term(f.left)}, {_term(f.right)})"
    if isinstance(f, EntropyLinear):
        return _linear(f)
    if isinstance(f, CondDistRel):
        lc = ", ".join(_term(t) for t in f.lhs_cond)
        rc = ", ".join(_term(t) for t in f.rhs_cond)
        return f"cdrel({_term(f.lhs_target)} | {lc} ~ {_term(f.rhs_target)} | {rc})".replace("|  ~", "| ~").replace("| )", "|)")
    if isinstance(f, Not):
        return f"(not {to_text(f.body)})"
    if isinstance(f, And):
        return "(" + " and ".join(to_text(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " or ".join(to_text(a) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"({to_text(f.left)} -> {to_text(f.right)})"
    if isinstance(f, Iff):
        return f"({to_text(f.left)} <-> {to_text(f.right)})"
    if isinstance(f, (Exists, Forall)):
        q = "exists" if isinstance(f, Exists) else "forall"
        return f"({q} {', '.join(f.vars)}. {to_text(f.body)})"
    if isinstance(f, MacroCall):
        return f"{f.name}(" + ", ".join(_arg(a) for a in f.args) + ")"
    raise ValueError(f"not a formula: {f!r}")
