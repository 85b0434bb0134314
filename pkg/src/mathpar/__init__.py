"""Mathpar: a computer-algebra kernel for the Mathpar language.

Parse and evaluate Mathpar programs over exact and approximate number sets,
polynomials, matrices, tropical algebras, and linear ODE systems, locally or
over HTTP.
"""

from . import domains, errors, lde, matrix, polynomial, runtime, syntax, tropical
from .runtime import EvalOutcome, Session, evaluate
from .syntax import parse, parse_expression, render, render_value

__version__ = "1.0.0"

__all__ = [
    "Session", "EvalOutcome", "evaluate",
    "parse", "parse_expression", "render", "render_value",
    "domains", "errors", "lde", "matrix", "polynomial",
    "runtime", "syntax", "tropical",
    "__version__",
]
