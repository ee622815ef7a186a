"""helipoly: binormal-flow dynamics of regular helical polygons.

Exact algebraic reconstruction of the polygon at rational times via
generalized quadratic Gauss sums, a pseudo-spectral solver for the induced
Schrodinger map on the sphere with M-fold symmetry reduction, multifractal
corner-trajectory analysis, and the self-similar one-corner matching.
"""

from .geometry import CurveSample, PolygonConfig, polygon_config
from .gauss import DeltaTrain, RationalTime, delta_train, gauss_sum, rational_time
from .algebraic import (
    AlgebraicCurve,
    FrameSet,
    algebraic_solution,
    center_speed,
    fit_z_rotation,
    place_vertical,
    reconstruct_curve,
    reconstruct_frames,
    rho_q,
    scaled_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicCurve",
    "CurveSample",
    "DeltaTrain",
    "FrameSet",
    "PolygonConfig",
    "RationalTime",
    "algebraic_solution",
    "center_speed",
    "delta_train",
    "fit_z_rotation",
    "gauss_sum",
    "place_vertical",
    "polygon_config",
    "rational_time",
    "reconstruct_curve",
    "reconstruct_frames",
    "rho_q",
    "scaled_coefficients",
    "__version__",
]
