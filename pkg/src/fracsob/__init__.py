"""Fractional Sobolev semi-norms, their closed-form constants and endpoint limits."""

__version__ = "0.1.0"

from .domains import Domain, ball, box, full_space, parse_domain, scale_map  # noqa: E402
from .errors import DomainError, EvaluationError, UnsupportedFunctionError, UsageError  # noqa: E402
from .funcspace import (TestFunction, affine, constant, derivative, evaluate,  # noqa: E402
                        fourier_transform, gaussian, parse_function, poly_gaussian)
from .quad import Estimate, QuadSpec, integrate_gagliardo_double, integrate_nd  # noqa: E402
from .seminorms import (FracOrder, SeminormResult, dini_seminorm, gagliardo_seminorm,  # noqa: E402
                        integer_seminorm)
from .specfun import constant_G, constant_K, constant_M, limit_constant  # noqa: E402

__all__ = [
    "Domain", "ball", "box", "full_space", "parse_domain", "scale_map",
    "DomainError", "EvaluationError", "UnsupportedFunctionError", "UsageError",
    "TestFunction", "affine", "constant", "derivative", "evaluate", "fourier_transform",
    "gaussian", "parse_function", "poly_gaussian",
    "Estimate", "QuadSpec", "integrate_gagliardo_double", "integrate_nd",
    "FracOrder", "SeminormResult", "dini_seminorm", "gagliardo_seminorm", "integer_seminorm",
    "constant_G", "constant_K", "constant_M", "limit_constant",
]
