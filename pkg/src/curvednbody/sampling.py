"""Random nonsingular configurations for property suites."""

from __future__ import annotations

import numpy as np

from .dynamics import PhaseState, detect_singularity
from .geometry import Curvature, inner


def random_positions(n, curvature: Curvature, rng, spread=1.0, min_margin=0.05):
    """n points on the manifold with every pair margin above min_margin."""
    k = curvature.kappa
    for _ in range(1000):
        if k > 0:
            v = rng.standard_normal((n, 4))
            q = v / np.linalg.norm(v, axis=1)[:, None] / np.sqrt(k)
        else:
            wxy = spread * rng.standard_normal((n, 3))
            z = np.sqrt((wxy * wxy).sum(axis=1) - 1.0 / k)
            q = np.column_stack([wxy, z])
        verdict = detect_singularity(q, curvature)
        if verdict.margin >= min_margin:
            return q
    raise RuntimeError("could not sample a nonsingular configuration")


def random_state(n, curvature: Curvature, rng, spread=1.0, vel_scale=0.3,
                 min_margin=0.05, masses=None) -> PhaseState:
    """Random nonsingular phase state with tangent velocities."""
    q = random_positions(n, curvature, rng, spread, min_margin)
    d = vel_scale * rng.standard_normal((n, 4))
    v = d - curvature.kappa * inner(q, d, curvature)[:, None] * q
    if masses is None:
        masses = rng.uniform(0.5, 2.0, n)
    return PhaseState.from_arrays(curvature.kappa, masses, q, v)
