"""fotpi command line.

Exit codes: 0 true or success, 1 false, 2 unknown, 3 usage or input error.
"""
import argparse
import json
import sys

from .capacity import NetworkError, NetworkSpec, compile_Qk
from .evaluator import Budget, BudgetExhausted, eval_formula, find_counterexample
from .formula import EntropyLinear, FormulaError, Indep, free_vars
from .hierarchy import classify
from .implication import ImplicationError, decide_indep_implication, statement, statements_from_formula
from .macros import REGISTRY, MacroError
from .model import ModelError, load_model
from .parser import ParseError, parse, to_text
from .shannon import ShannonError, prove_shannon

OK, FALSE, UNKNOWN, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def _formula(args):
    if args.expr is not None:
        text, where = args.expr, "<expr>"
    elif args.file is not None:
        text, where = _read(args.file), args.file
    else:
        raise UsageError("give a formula file or --expr")
    try:
        return parse(text)
    except (ParseError, MacroError, FormulaError) as e:
        raise UsageError(f"{where}: {e}") from None


def _json_file(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _emit(args, report, text):
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    elif text:
        print(text)


def _budget(args):
    try:
        return Budget(max_refine=args.refine, max_support=args.support, max_denominator=args.denom,
                      max_candidates=args.candidates, use_witness_hints=not args.no_hints, max_atoms=args.atoms)
    except ValueError as e:
        raise UsageError(str(e)) from None


# -- commands -------------------------------------------------------------


def cmd_parse(args):
    f = _formula(args)
    _emit(args, {"formula": to_text(f), "free": sorted(free_vars(f))}, to_text(f))
    return OK


def cmd_expand(args):
    text = f"{args.name}({', '.join(args.args)})"
    try:
        call = parse(text)
        if args.full:
            out = REGISTRY.expand_all(call, args.form)
        else:
            out = REGISTRY.expand(call.name, call.args, args.form)
    except (ParseError, MacroError, FormulaError, AttributeError) as e:
        raise UsageError(f"{text}: {e}") from None
    _emit(args, {"call": text, "expansion": to_text(out)}, to_text(out))
    return OK


def cmd_classify(args):
    f = _formula(args)
    try:
        lv = classify(f, args.hierarchy, args.mode)
    except (MacroError, FormulaError) as e:
        raise UsageError(str(e)) from None
    _emit(args, lv.to_dict(), str(lv))
    return OK


def cmd_eval(args):
    f = _formula(args)
    try:
        m = load_model(args.model)
    except OSError as e:
        raise UsageError(f"{args.model}: {e.strerror}") from None
    except ModelError as e:
        raise UsageError(f"{args.model}: {e}") from None
    try:
        r = eval_formula(f, m, args.mode, _budget(args))
    except BudgetExhausted as e:
        _emit(args, {"verdict": "unknown", "budget_exhausted": True, "note": str(e)}, f"unknown ({e})")
        return UNKNOWN
    except (FormulaError, ModelError) as e:
        raise UsageError(str(e)) from None
    _emit(args, r.to_dict(), str(r.verdict) + (f" ({r.note})" if r.note else ""))
    return {"true": OK, "false": FALSE, "unknown": UNKNOWN}[str(r.verdict)]


def _entropy(text, what):
    try:
        f = parse(text)
    except (ParseError, MacroError) as e:
        raise UsageError(f"{what}: {e}") from None
    if not isinstance(f, EntropyLinear):
        raise UsageError(f"{what}: expected a linear entropy inequality or equality")
    return f


def cmd_prove(args):
    goal = _entropy(args.inequality, "inequality")
    cons = [_entropy(c, "constraint") for c in args.constraint]
    if goal.cmp == ">":
        raise UsageError("strict inequalities are not Shannon-type goals")
    goals = [goal]
    if goal.cmp == "=":
        goals = [EntropyLinear(goal.terms, ">="), EntropyLinear(tuple((k, -v) for k, v in goal.terms), ">=")]
    try:
        verdicts = [prove_shannon(g, cons, args.vars.split(",") if args.vars else None) for g in goals]
    except ShannonError as e:
        raise UsageError(str(e)) from None
    ok = all(v.provable for v in verdicts)
    report = verdicts[0].to_dict() if len(verdicts) == 1 else {"status": "Provable" if ok else "NotProvable",
                                                                "parts": [v.to_dict() for v in verdicts]}
    _emit(args, report, "Provable" if ok else "NotProvable")
    return OK if ok else FALSE


def _statement(x, names, where):
    if isinstance(x, str):
        try:
            f = parse(x)
        except (ParseError, MacroError) as e:
            raise UsageError(f"{where}: {e}") from None
        if isinstance(f, Indep):
            return statements_from_formula(f, names)
        raise UsageError(f"{where}: expected indep(...)")
    if isinstance(x, list) and len(x) == 2:
        idx = {v: i for i, v in enumerate(names)}
        try:
            return statement([idx[v] for v in x[0]], [idx[v] for v in x[1]])
        except KeyError as e:
            raise UsageError(f"{where}: unknown variable {e.args[0]}") from None
    raise UsageError(f"{where}: a statement is indep(...) text or a pair of variable lists")


def cmd_imply(args):
    doc = _json_file(args.file)
    try:
        names = list(doc["variables"])
        ants = [_statement(a, names, f"{args.file}: antecedent {i + 1}") for i, a in enumerate(doc["antecedents"])]
        cons = _statement(doc["consequent"], names, f"{args.file}: consequent")
        holds = decide_indep_implication(ants, cons, n=len(names))
    except (KeyError, TypeError) as e:
        raise UsageError(f"{args.file}: missing or malformed field {e}") from None
    except ImplicationError as e:
        raise UsageError(f"{args.file}: {e}") from None
    report = {"implies": holds, "antecedents": [s.text(names) for s in ants], "consequent": cons.text(names)}
    _emit(args, report, "implied" if holds else "not implied")
    return OK if holds else FALSE


def cmd_compile_net(args):
    try:
        spec = NetworkSpec.from_dict(_json_file(args.spec))
        c = compile_Qk(spec)
    except NetworkError as e:
        raise UsageError(f"{args.spec}: {e}") from None
    report = {"k": c.k, "free": list(c.free), "input_anchor": c.input_anchor, "note": c.note}
    lines = []
    if args.emit in ("formula", "both"):
        report["formula"] = to_text(c.formula)
        lines.append(report["formula"])
    if args.emit in ("level", "both"):
        report["level"] = c.level.to_dict()
        lines.append(f"H-hierarchy level: {c.level}")
    _emit(args, report, "\n".join(lines))
    return OK


def cmd_search_cx(args):
    doc = _json_file(args.file)
    try:
        ants = [parse(a) for a in doc.get("antecedents", [])]
        cons = parse(doc["consequent"])
        names = doc.get("variables")
    except (KeyError, TypeError, AttributeError) as e:
        raise UsageError(f"{args.file}: missing or malformed field {e}") from None
    except (ParseError, MacroError) as e:
        raise UsageError(f"{args.file}: {e}") from None
    try:
        m = find_counterexample(ants, cons, _budget(args), names, args.max_atoms, args.max_values,
                                seed=args.seed, restarts=args.restarts, jobs=args.jobs)
    except (FormulaError, ModelError) as e:
        raise UsageError(f"{args.file}: {e}") from None
    if m is None:
        _emit(args, {"counterexample": None, "verdict": "unknown"}, "no counterexample found")
        return UNKNOWN
    _emit(args, {"counterexample": m.to_dict(), "verdict": "false"}, json.dumps(m.to_dict()))
    return FALSE


# -- argument parsing -----------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1)

    budget = _Parser(add_help=False)
    budget.add_argument("--refine", type=int, default=2)
    budget.add_argument("--support", type=int, default=4)
    budget.add_argument("--denom", type=int, default=4)
    budget.add_argument("--candidates", type=int, default=200000)
    budget.add_argument("--atoms", type=int, default=8)
    budget.add_argument("--no-hints", action="store_true")

    src = _Parser(add_help=False)
    src.add_argument("file", nargs="?")
    src.add_argument("-e", "--expr", help="formula text instead of a file")

    p = _Parser(prog="fotpi", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("parse", parents=[common, src], help="parse and pretty-print a formula")
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("expand", parents=[common], help="expand a macro call")
    s.add_argument("name")
    s.add_argument("args", nargs="*")
    s.add_argument("--form", choices=("pi", "H"), default="pi")
    s.add_argument("--full", action="store_true", help="expand recursively")
    s.set_defaults(run=cmd_expand)

    s = sub.add_parser("classify", parents=[common, src], help="hierarchy level")
    s.add_argument("--hierarchy", choices=("pi", "H"), default="pi")
    s.add_argument("--mode", choices=("strict", "sugared"), default="strict")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("eval", parents=[common, budget], help="evaluate a formula on a model")
    s.add_argument("file", help="formula file, or the model file when --expr is given")
    s.add_argument("model", nargs="?")
    s.add_argument("-e", "--expr", default=None)
    s.add_argument("--mode", choices=("sound", "bounded"), default="bounded")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("prove", parents=[common], help="Shannon-type inequality prover")
    s.add_argument("inequality")
    s.add_argument("--constraint", action="append", default=[])
    s.add_argument("--vars", default=None, help="comma-separated variable order")
    s.set_defaults(run=cmd_prove)

    s = sub.add_parser("imply", parents=[common], help="marginal independence implication")
    s.add_argument("file")
    s.set_defaults(run=cmd_imply)

    s = sub.add_parser("compile-net", parents=[common], help="capacity-region formula of a network")
    s.add_argument("spec")
    s.add_argument("--emit", choices=("formula", "level", "both"), default="both")
    s.set_defaults(run=cmd_compile_net)

    s = sub.add_parser("search-cx", parents=[common, budget], help="counterexample search for an implication")
    s.add_argument("file")
    s.add_argument("--max-atoms", type=int, default=4)
    s.add_argument("--max-values", type=int, default=3)
    s.add_argument("--restarts", type=int, default=100)
    s.set_defaults(run=cmd_search_cx)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        if args.command == "eval":
            if args.expr is not None and args.model is None:
                args.model, args.file = args.file, None
            elif args.model is None:
                raise UsageError("eval needs a formula and a model")
        return args.run(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except SystemExit as e:
        # --help
        return OK if e.code in (0, None) else USAGE


if __name__ == "__main__":
    sys.exit(main())
