"""Force function, equations of motion, first integrals and singularities.

The pairwise force function is the curvature cotangent of the geodesic
distance.  Its Cartesian form, the gradient, and the second-order equations
of motion all live here; the per-pair sums are evaluated by the kernels
module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, SingularityError
from .geometry import EPS_MANIFOLD, Curvature, ctn, extended_distance, inner

# Width of the singularity band on |1 - (kappa <q_i,q_j>)^2|; the force law's
# 3/2-power denominators amplify noise below this scale.
EPS_SING = 1e-9


@dataclass(frozen=True)
class Body:
    """A point mass."""

    mass: float

    def __post_init__(self):
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise DomainError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class FirstIntegrals:
    """Energy plus the six angular-momentum constants."""

    h: float
    c_wx: float
    c_wy: float
    c_wz: float
    c_xy: float
    c_xz: float
    c_yz: float

    COMPONENTS = ("wx", "wy", "wz", "xy", "xz", "yz")

    def angular(self) -> np.ndarray:
        return np.array([self.c_wx, self.c_wy, self.c_wz,
                         self.c_xy, self.c_xz, self.c_yz])


@dataclass(frozen=True)
class SingularityVerdict:
    """Closest pair to a singular configuration.

    kind is 'none', 'collision' (coincident bodies) or 'antipodal'
    (opposite points, positive curvature only); margin is the minimum of
    |1 - (kappa <q_i,q_j>)^2| over pairs.
    """

    kind: str
    i: int
    j: int
    margin: float

    def __bool__(self):
        return self.kind != "none"


@dataclass(frozen=True, eq=False)
class PhaseState:
    """Masses, on-manifold positions and tangent velocities at one time."""

    curvature: Curvature
    bodies: list[Body]
    q: np.ndarray
    v: np.ndarray
    t: float = 0.0
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.q, dtype=float))
        v = np.atleast_2d(np.asarray(self.v, dtype=float))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "v", v)
        n = len(self.bodies)
        if n < 1 or q.shape != (n, 4) or v.shape != (n, 4):
            raise DomainError(f"need n>=1 bodies with matching (n,4) position "
                              f"and velocity arrays, got {q.shape}, {v.shape}")
        if self._skip_checks:
            return
        k = self.curvature.kappa
        s = k * inner(q, q, self.curvature)
        # roundoff scale of the (possibly cancelling) quadratic forms
        qnorm2 = (q * q).sum(axis=1)
        if np.any(np.abs(s - 1.0) > EPS_MANIFOLD * np.maximum(1.0, abs(k) * qnorm2)):
            raise DomainError("positions are off the manifold")
        if k < 0 and np.any(q[:, 3] <= 0):
            raise DomainError("hyperbolic positions must have z > 0")
        tang = k * inner(q, v, self.curvature)
        scale = np.maximum(1.0, abs(k) * np.sqrt(qnorm2) * np.linalg.norm(v, axis=1))
        if np.any(np.abs(tang) > EPS_MANIFOLD * scale):
            raise DomainError("velocities are not tangent to the manifold")

    @classmethod
    def from_arrays(cls, kappa, masses, q, v, t=0.0):
        curv = kappa if isinstance(kappa, Curvature) else Curvature(kappa)
        return cls(curv, [Body(float(m)) for m in np.atleast_1d(masses)],
                   q, v, float(t))

    @property
    def n(self) -> int:
        return len(self.bodies)

    @property
    def masses(self) -> np.ndarray:
        return np.array([b.mass for b in self.bodies])

    @property
    def kappa(self) -> float:
        return self.curvature.kappa

    def metric_signs(self) -> np.ndarray:
        return self.curvature.metric_signs()


def detect_singularity(positions, curvature: Curvature) -> SingularityVerdict:
    """Report the pair nearest to a collision or antipodal configuration.

    Collisions (kappa <q_i,q_j> = 1) occur for either curvature sign;
    antipodal pairs (kappa <q_i,q_j> = -1) only on the sphere.
    """
    q = np.atleast_2d(np.asarray(positions, dtype=float))
    k = curvature.kappa
    g = curvature.metric_signs()
    margin, i, j = kernels.pair_margin(q, k, g)
    if margin >= EPS_SING:
        return SingularityVerdict("none", -1, -1, margin)
    p = k * inner(q[i], q[j], curvature)
    if p > 0:
        return SingularityVerdict("collision", i, j, margin)
    return SingularityVerdict("antipodal", i, j, margin)


def _require_nonsingular(state: PhaseState):
    verdict = detect_singularity(state.q, state.curvature)
    if verdict:
        raise SingularityError(verdict.kind, verdict.i, verdict.j, verdict.margin)


def potential(state: PhaseState) -> float:
    """Force function U of the configuration (potential energy is -U)."""
    _require_nonsingular(state)
    if state.n == 1:
        return 0.0
    return kernels.potential(state.q, state.masses, state.kappa,
                             state.metric_signs())


def potential_via_distance(state: PhaseState) -> float:
    """Definitional form of U: sum of m_i m_j ctn(distance) over pairs.

    Independent of the Cartesian kernel; used as a cross-check oracle.
    """
    _require_nonsingular(state)
    total = 0.0
    k = state.kappa
    m = state.masses
    for i in range(state.n):
        for j in range(i + 1, state.n):
            d = extended_distance(state.q[i], state.q[j], state.curvature)
            total += m[i] * m[j] * ctn(k, d)
    return total


def gradient(state: PhaseState, i: int) -> np.ndarray:
    """Sign-adjusted gradient of U with respect to body i's position.

    Uses the scale-invariant form, which is the one that may be
    differentiated again.
    """
    return gradients(state)[i]


def gradients(state: PhaseState) -> np.ndarray:
    """Gradient of U for every body, shape (n, 4)."""
    _require_nonsingular(state)
    zero_v = np.zeros_like(state.q)
    interact = kernels.accelerations(state.q, zero_v, state.masses, state.kappa,
                                     state.metric_signs(), homogeneous=True)
    return state.masses[:, None] * interact


def gradient_simplified(state: PhaseState, i: int) -> np.ndarray:
    """Gradient in the simplified on-manifold form (cross-check only)."""
    _require_nonsingular(state)
    k = state.kappa
    sigma = float(state.curvature.sigma)
    k32 = abs(k) ** 1.5
    q = state.q
    m = state.masses
    out = np.zeros(4)
    for j in range(state.n):
        if j == i:
            continue
        u = k * inner(q[i], q[j], state.curvature)
        den = (sigma - sigma * u * u) ** 1.5
        out += m[i] * m[j] * k32 * (q[j] - u * q[i]) / den
    return out


def acceleration(state: PhaseState, i: int) -> np.ndarray:
    """Second derivative of body i's position under the equations of motion."""
    return accelerations(state)[i]


def accelerations(state: PhaseState) -> np.ndarray:
    """Accelerations of all bodies, shape (n, 4)."""
    _require_nonsingular(state)
    return kernels.accelerations(state.q, state.v, state.masses, state.kappa,
                                 state.metric_signs())


def kinetic_energy(state: PhaseState) -> float:
    """(1/2) sum m_i <v_i,v_i> (kappa <q_i,q_i>).

    The last factor equals 1 on the manifold; it is kept so off-manifold
    drift shows up consistently in diagnostics.
    """
    curv = state.curvature
    vv = inner(state.v, state.v, curv)
    qq = curv.kappa * inner(state.q, state.q, curv)
    return float(0.5 * np.sum(state.masses * vv * qq))


def first_integrals(state: PhaseState) -> FirstIntegrals:
    """Energy and the six angular-momentum constants of the state."""
    h = kinetic_energy(state) - potential(state)
    m = state.masses
    q, v = state.q, state.v
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    c = [float(np.sum(m * (q[:, a] * v[:, b] - v[:, a] * q[:, b])))
         for a, b in pairs]
    return FirstIntegrals(h, *c)
