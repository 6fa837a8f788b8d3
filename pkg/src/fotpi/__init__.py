"""First-order logic of probabilistic independence over finite models.

Formula syntax, a library of derived predicates, hierarchy levels, exact
three-valued evaluation, a Shannon-type inequality prover, marginal
independence implication and the capacity-region compiler.
"""
from .formula import (And, CondDistRel, Const, EntropyLinear, Exists, Forall, Formula, FormulaError, Iff, Implies,
                      Indep, Join, Lambda, MacroCall, Not, Or, Var, free_vars, join)
from .parser import ParseError, parse, to_text
from .hierarchy import HierarchyLevel, classify, level_of
from .model import FiniteModel, ModelError, corpus, entropy_sign, EntropySign, load_model
from .macros import REGISTRY, MacroError, compile_arith
from .evaluator import (Budget, BudgetExhausted, TruthValue3, Verdict, eval_formula, evaluate, find_counterexample,
                        register_witness_constructor)
from .shannon import ShannonProblem, Status, prove_shannon, zhang_yeung
from .implication import IndepStatement, decide_indep_implication, statement
from .capacity import CompiledCapacityFormula, NetworkSpec, compile_Qk, level_report

__version__ = "0.1.0"

__all__ = [
    "And", "Budget", "BudgetExhausted", "CompiledCapacityFormula", "CondDistRel", "Const", "EntropyLinear",
    "EntropySign", "Exists", "FiniteModel", "Forall", "Formula", "FormulaError", "HierarchyLevel", "Iff",
    "Implies", "Indep", "IndepStatement", "Join", "Lambda", "MacroCall", "MacroError", "ModelError",
    "NetworkSpec", "Not", "Or", "ParseError", "REGISTRY", "ShannonProblem", "Status", "TruthValue3", "Var",
    "Verdict", "classify", "compile_Qk", "compile_arith", "corpus", "decide_indep_implication", "entropy_sign",
    "eval_formula", "evaluate", "find_counterexample", "free_vars", "join", "level_of", "level_report",
    "load_model", "parse", "prove_shannon", "register_witness_constructor", "statement", "to_text",
    "zhang_yeung",
]
