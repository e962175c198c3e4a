"""Explain surprising JavaScript type-coercion results.

The package models a JavaScript subset whose interpreter can be switched,
flag by flag, into the erroneous semantics a confused user believes in.
Inference searches those flag sets for mental models under which the
asked-about program produces a different result, and the explanation
module corrects the inferred misconceptions selectively.
"""

from .config import Config, from_sources
from .explain import Explanation, explain
from .diagnostics import (
    DiagnosticQuestion,
    build_inventory,
    synthesize_diagnostic,
    verify_diagnostic,
)
from .inference import (
    Candidate,
    ClarificationSet,
    UnknownExpectationError,
    clarify,
    infer_all,
    infer_map,
    resolve,
    resolve_display,
)
from .misconceptions import (
    EMPTY,
    Misconception,
    MisconceptionSet,
    PriorModel,
    registry,
)
from .parser import JsSyntaxError, UnsupportedConstructError, parse
from .semantics import EvalOutcome, TraceStep, consulted_closure, evaluate
from .syntax import Program, unparse, unparse_program
from .values import JsValue, display, same_value

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "ClarificationSet",
    "Config",
    "DiagnosticQuestion",
    "EMPTY",
    "EvalOutcome",
    "Explanation",
    "JsSyntaxError",
    "JsValue",
    "Misconception",
    "MisconceptionSet",
    "PriorModel",
    "Program",
    "TraceStep",
    "UnknownExpectationError",
    "UnsupportedConstructError",
    "build_inventory",
    "clarify",
    "consulted_closure",
    "display",
    "evaluate",
    "explain",
    "from_sources",
    "infer_all",
    "infer_map",
    "parse",
    "registry",
    "resolve",
    "resolve_display",
    "same_value",
    "synthesize_diagnostic",
    "unparse",
    "unparse_program",
    "verify_diagnostic",
]
