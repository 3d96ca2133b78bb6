"""Exact computation for the coupled rational difference system

    x_{n+1} = x_n y_{n-1} / (y_n (a_n + b_n x_n y_{n-1}))
    y_{n+1} = x_{n-1} y_n / (x_n (c_n + d_n x_{n-1} y_n))

direct iteration, closed-form solutions, reduction to linear recurrences
and verification of its scaling symmetries, all in exact rational
arithmetic.
"""
from .closed_form import (
    auto_family,
    forbidden_scan,
    solve,
    solve_constant,
    solve_general,
    solve_neg_unit,
    solve_nonunit,
    solve_unit,
)
from .coefficients import CoefficientQuad, CoefficientSeq, coeff_at, product_range
from .engine import InitialState, Trajectory, scale_action, simulate, step
from .errors import (
    DomainError,
    ForbiddenInstanceError,
    HorizonError,
    ParseError,
    RadexError,
    SingularArithmeticError,
)
from .numeric import DualScalar, ExactRational, rational, rational_parse, to_string
from .reduction import (
    InvariantSeq,
    invariants_by_recurrence,
    invariants_closed_form,
    invariants_from_trajectory,
    reconstruct,
)
from .symmetry import X1_CORRECTED, X1_PAPER, X2, GeneratorSpec

__version__ = "0.1.0"

__all__ = [
    "CoefficientQuad",
    "CoefficientSeq",
    "DomainError",
    "DualScalar",
    "ExactRational",
    "ForbiddenInstanceError",
    "GeneratorSpec",
    "HorizonError",
    "InitialState",
    "InvariantSeq",
    "ParseError",
    "RadexError",
    "SingularArithmeticError",
    "Trajectory",
    "X1_CORRECTED",
    "X1_PAPER",
    "X2",
    "auto_family",
    "coeff_at",
    "forbidden_scan",
    "invariants_by_recurrence",
    "invariants_closed_form",
    "invariants_from_trajectory",
    "product_range",
    "rational",
    "rational_parse",
    "reconstruct",
    "scale_action",
    "simulate",
    "solve",
    "solve_constant",
    "solve_general",
    "solve_neg_unit",
    "solve_nonunit",
    "solve_unit",
    "step",
    "to_string",
]
