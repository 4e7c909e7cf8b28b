"""Chatterjee's xi and Spearman's footrule for copulas."""

import json

from ._xipsi import (
    ConvergenceError,
    InfeasibleError,
    boundary,
    cdown_measures,
    gaussian_measures,
    grid_measures,
    kkt_residual_upper,
    mu_of_y,
    path_params,
    qp_solve,
    region_check,
    si_region_check,
    strip_density,
    strip_measures,
    strip_partial,
    upper_psi_max,
)
from ._xipsi import measures_json as _measures_json


def measures(descriptor, grid_n=400, quad_tol=1e-6):
    """xi and psi of a descriptor given as a dict or a JSON string."""
    if not isinstance(descriptor, str):
        descriptor = json.dumps(descriptor)
    return _measures_json(descriptor, grid_n, quad_tol)


__all__ = [
    "ConvergenceError",
    "InfeasibleError",
    "boundary",
    "cdown_measures",
    "gaussian_measures",
    "grid_measures",
    "kkt_residual_upper",
    "measures",
    "mu_of_y",
    "path_params",
    "qp_solve",
    "region_check",
    "si_region_check",
    "strip_density",
    "strip_measures",
    "strip_partial",
    "upper_psi_max",
]
