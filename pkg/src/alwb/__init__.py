"""Algorithmic logic workbench: syntax, semantics, models and a proof checker."""
from .models import NSN, NSNValue, StdNat, structure
from .parser import ParseError, parse
from .printer import render
from .semantics import (
    BudgetExhausted, EvalConfig, Halted, RunError, TruthValue, Valuation,
    bounded_validate, eval_formula, evaluate, run_program,
)

__version__ = "0.1.0"

__all__ = [
    "NSN", "NSNValue", "StdNat", "structure", "ParseError", "parse", "render",
    "BudgetExhausted", "EvalConfig", "Halted", "RunError", "TruthValue", "Valuation",
    "bounded_validate", "eval_formula", "evaluate", "run_program",
]
