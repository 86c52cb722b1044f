"""Quiver moves, exact Leavitt path algebra arithmetic, and replayable
certificates that collapsed quivers give singularly equivalent
radical-square-zero algebras."""

from .equivalence import (
    check_collapse_preconditions,
    express_in_corner,
    substitute,
    verify_fullness,
    verify_q_prime_family,
)
from .expr import eval_text, evaluate, parse
from .grading import GradingInfeasible, solve_collapse_grading
from .leavitt import QQ, GF, Element, Field, Grading, Monomial, degree, multiply, normal_form, star
from .moves import CollapseResult, Partition, collapse
from .quiver import Path, Quiver, QuiverError, PreconditionError, is_isomorphic

__version__ = "0.1.0"

__all__ = [
    "CollapseResult",
    "Element",
    "Field",
    "GF",
    "Grading",
    "GradingInfeasible",
    "Monomial",
    "Partition",
    "Path",
    "PreconditionError",
    "QQ",
    "Quiver",
    "QuiverError",
    "check_collapse_preconditions",
    "collapse",
    "degree",
    "eval_text",
    "evaluate",
    "express_in_corner",
    "is_isomorphic",
    "multiply",
    "normal_form",
    "parse",
    "solve_collapse_grading",
    "star",
    "substitute",
    "verify_fullness",
    "verify_q_prime_family",
]
