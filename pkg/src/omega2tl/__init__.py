"""Temporal logic over two-level time: rows of infinitely many micro steps.

Public surface: formula AST/parser (:mod:`omega2tl.formula`), ultimately
periodic models (:mod:`omega2tl.model`), model checking
(:mod:`omega2tl.checker`), satisfiability/validity
(:mod:`omega2tl.solver`) and the transition kit
(:mod:`omega2tl.transitions`).
"""

from omega2tl.checker import check_theory, holds, holds_oracle, label
from omega2tl.formula import Formula, ParseError, closure, desugar, parse, render
from omega2tl.model import (LassoRow, ModelFormatError, PeriodicModel,
                            TimeInstant, constant_model, load, save, validate)
from omega2tl.solver import (Sat, SatResult, SolverBounds, Unsat,
                             UnsatWithinBounds, entails, sat, valid)
from omega2tl.transitions import (TransitionReport, check_transition_discipline,
                                  noncompactness_family, noncompactness_witness,
                                  tr_instances)

__version__ = "0.1.0"

__all__ = [
    "Formula", "ParseError", "parse", "render", "desugar", "closure",
    "LassoRow", "PeriodicModel", "TimeInstant", "constant_model",
    "load", "save", "validate", "ModelFormatError",
    "holds", "holds_oracle", "label", "check_theory",
    "SolverBounds", "SatResult", "Sat", "Unsat", "UnsatWithinBounds",
    "sat", "valid", "entails",
    "TransitionReport", "check_transition_discipline", "tr_instances",
    "noncompactness_family", "noncompactness_witness",
    "__version__",
]
