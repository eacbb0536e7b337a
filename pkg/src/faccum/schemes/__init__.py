"""The ten distribution schemes: specs, factorial moments, limits, decompositions."""

from .asymptotics import AsymptoticConstants, asymptotic_constants, mean_scale, variance_scale
from .decomposition import DecompositionData, decomposition, decomposition_residual
from .moments import factorial_moment, factorial_moments, is_exact, mean_and_variance
from .regimes import DEFAULT_REGIMES, lam_of, spec_for_n
from .spec import CLASSICAL, FAMILIES, GAS, GIAS, SchemeSpec, family_params

__all__ = [
    "AsymptoticConstants",
    "CLASSICAL",
    "DEFAULT_REGIMES",
    "DecompositionData",
    "FAMILIES",
    "GAS",
    "GIAS",
    "SchemeSpec",
    "asymptotic_constants",
    "decomposition",
    "decomposition_residual",
    "factorial_moment",
    "factorial_moments",
    "family_params",
    "is_exact",
    "lam_of",
    "mean_and_variance",
    "mean_scale",
    "spec_for_n",
    "variance_scale",
]
