"""Exact vertex-algebra calculus over Q(k) and a Z2-orbifold toolkit."""

from .coefficients import K, ONE, ZERO, Scalar, ScalarError, scalar_arith, scalar_eval, scalar_poles
from .kernel import (
    MIXED,
    AlgebraSpec,
    Field,
    GeneratorSymbol,
    SpecError,
    conformal_weight,
    derive,
    iterated_wick,
    nproduct,
    ope,
    wick,
)

__all__ = [
    "K",
    "ONE",
    "ZERO",
    "Scalar",
    "ScalarError",
    "scalar_arith",
    "scalar_eval",
    "scalar_poles",
    "MIXED",
    "AlgebraSpec",
    "Field",
    "GeneratorSymbol",
    "SpecError",
    "conformal_weight",
    "derive",
    "iterated_wick",
    "nproduct",
    "ope",
    "wick",
]
