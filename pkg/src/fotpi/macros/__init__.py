"""Registry of derived predicates.

Importing this package registers every macro, its entropy-hierarchy form,
its direct oracle and the witness constructors used by the evaluator.
"""
from .registry import REGISTRY, Ctx, MacroDef, MacroError, Registry
from . import core, integers, rationals, events, arithmetic, sequences, continuous  # noqa: F401
from . import witnesses  # noqa: F401
from .arithmetic import compile_arith

__all__ = ["REGISTRY", "Ctx", "MacroDef", "MacroError", "Registry", "compile_arith"]
