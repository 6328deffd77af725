"""Exact and numeric asymptotics of ``int_0^1 (x^n + (1-x)^n)^(1/n) dx`` and of p-norm moments."""

__version__ = "0.1.0"

from .combinatorics import MzvIndex, WeightedStarIndex
from .numeric import ConvergenceError, PrecisionContext, mzv_numeric, quad_I, zeta_value
from .series import AsymptoticSeries, MomentSpec, i_series, ip_alt_form, ip_poly_form
from .zeta_algebra import FormalCombination, ZetaPolynomial, reduce_height_one

__all__ = [
    "__version__",
    "MzvIndex",
    "WeightedStarIndex",
    "ZetaPolynomial",
    "FormalCombination",
    "reduce_height_one",
    "PrecisionContext",
    "ConvergenceError",
    "zeta_value",
    "mzv_numeric",
    "quad_I",
    "AsymptoticSeries",
    "MomentSpec",
    "i_series",
    "ip_alt_form",
    "ip_poly_form",
]
