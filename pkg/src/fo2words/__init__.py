"""Workbench for two-variable first-order logic on finite words.

Evaluate formulas over words with numerical predicates, solve bounded
two-pebble games, compute finite-degree neighborhoods and well-typed
position sets, and run the order-collapse constructions with
machine-checked verification at desk scale.
"""

__version__ = "0.1.0"

from .formula import parse, to_text, to_nnf, metrics  # noqa: F401
from .predicates import builtin, parse_signature, Signature  # noqa: F401
from .evaluator import evaluate, evaluate_open, LanguageOracle  # noqa: F401
