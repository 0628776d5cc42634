"""Anderson-Stark units, log-algebraicity and Carlitz L-series over F_q[theta]."""

from .algebra import Frac, MultiPoly, PolyRing, ThetaPoly, ZSeries, get_field, parse_poly
from .carlitz import carlitz_action, exp_tau_approx, exp_z, log_z, twist
from .errors import StarkUnitsError, UsageError, VerificationError
from .logalg import L_k, Z_k, log_algebraic, negative_L_via_derivative, special_poly
from .lseries import L_series, L_value_approx, log_Nz, polylog_decompose, power_sum, scalar_power_sum
from .norms import NormValue, dot_action, gauss_norm, h_expand, h_poly, sup_norm
from .stark import StarkUnit, compare_routes, sigma, sigma_via_exp, sigma_via_extraction, stark_unit

__version__ = "0.1.0"

__all__ = [
    "Frac", "MultiPoly", "PolyRing", "ThetaPoly", "ZSeries", "get_field", "parse_poly",
    "carlitz_action", "exp_tau_approx", "exp_z", "log_z", "twist",
    "StarkUnitsError", "UsageError", "VerificationError",
    "L_k", "Z_k", "log_algebraic", "negative_L_via_derivative", "special_poly",
    "L_series", "L_value_approx", "log_Nz", "polylog_decompose", "power_sum", "scalar_power_sum",
    "NormValue", "dot_action", "gauss_norm", "h_expand", "h_poly", "sup_norm",
    "StarkUnit", "compare_routes", "sigma", "sigma_via_exp", "sigma_via_extraction", "stark_unit",
]
