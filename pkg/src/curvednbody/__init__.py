"""Gravitational n-body dynamics in spaces of constant nonzero curvature."""

from .geometry import (
    Curvature,
    ManifoldPoint,
    TangentVector,
    distance,
    extended_distance,
    inner,
)

__version__ = "0.1.0"

__all__ = [
    "Curvature",
    "ManifoldPoint",
    "TangentVector",
    "distance",
    "extended_distance",
    "inner",
    "__version__",
]
