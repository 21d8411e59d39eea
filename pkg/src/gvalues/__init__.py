"""Values of G-series: exact series constructions with certified ball enclosures."""

__version__ = "0.1.0"

from .balls import ComplexBall, working_precision
from .errors import GValuesError
from .qi import GaussianRational, QiPolynomial, RationalFunction
from .series import GSeries

__all__ = [
    "__version__",
    "ComplexBall",
    "GSeries",
    "GValuesError",
    "GaussianRational",
    "QiPolynomial",
    "RationalFunction",
    "working_precision",
]
