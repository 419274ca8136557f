"""Isometric rotations of the curved 3-manifolds and rigid-orbit generators.

Six one- or two-parameter rotation families exist: two for positive curvature
(single and double circular rotation) and four for negative curvature (single
circular, single hyperbolic, mixed circular-hyperbolic, and parabolic).  Each
relative-equilibrium class is the orbit of one family applied to a fixed
initial configuration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ClassMismatchError, DomainError


class RotationKind(enum.Enum):
    POS_ELLIPTIC = "pos_elliptic"
    POS_ELLIPTIC_ELLIPTIC = "pos_elliptic_elliptic"
    NEG_ELLIPTIC = "neg_elliptic"
    NEG_HYPERBOLIC = "neg_hyperbolic"
    NEG_ELLIPTIC_HYPERBOLIC = "neg_elliptic_hyperbolic"
    NEG_PARABOLIC = "neg_parabolic"

    @property
    def curvature_sign(self) -> int:
        return 1 if self.value.startswith("pos") else -1

    @property
    def doubly_rotating(self) -> bool:
        return self in (RotationKind.POS_ELLIPTIC_ELLIPTIC,
                        RotationKind.NEG_ELLIPTIC_HYPERBOLIC)


@dataclass(frozen=True)
class RotationParams:
    """Parameters of one rotation: a circular angle plus a second circular
    angle, hyperbolic parameter, or parabolic shift, depending on the kind."""

    theta: float = 0.0
    s_or_phi: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.theta) and np.isfinite(self.s_or_phi)):
            raise DomainError("rotation parameters must be finite")

    def __add__(self, other: "RotationParams") -> "RotationParams":
        return RotationParams(self.theta + other.theta,
                              self.s_or_phi + other.s_or_phi)


def _double_circular(theta, phi):
    c1, s1 = np.cos(theta), np.sin(theta)
    c2, s2 = np.cos(phi), np.sin(phi)
    return np.array([[c1, -s1, 0.0, 0.0],
                     [s1, c1, 0.0, 0.0],
                     [0.0, 0.0, c2, -s2],
                     [0.0, 0.0, s2, c2]])


def _circular_hyperbolic(theta, s):
    c1, s1 = np.cos(theta), np.sin(theta)
    ch, sh = np.cosh(s), np.sinh(s)
    return np.array([[c1, -s1, 0.0, 0.0],
                     [s1, c1, 0.0, 0.0],
                     [0.0, 0.0, ch, sh],
                     [0.0, 0.0, sh, ch]])


def _parabolic(xi):
    x2 = 0.5 * xi * xi
    return np.array([[1.0, 0.0, 0.0, 0.0],
                     [0.0, 1.0, -xi, xi],
                     [0.0, xi, 1.0 - x2, x2],
                     [0.0, xi, -x2, 1.0 + x2]])


def rotation_matrix(kind: RotationKind, params: RotationParams) -> np.ndarray:
    """4x4 matrix of the isometry; unit determinant, preserves the matching
    sign-adjusted inner product."""
    if kind is RotationKind.POS_ELLIPTIC:
        return _double_circular(params.theta, 0.0)
    if kind is RotationKind.POS_ELLIPTIC_ELLIPTIC:
        return _double_circular(params.theta, params.s_or_phi)
    if kind is RotationKind.NEG_ELLIPTIC:
        return _circular_hyperbolic(params.theta, 0.0)
    if kind is RotationKind.NEG_HYPERBOLIC:
        return _circular_hyperbolic(0.0, params.s_or_phi)
    if kind is RotationKind.NEG_ELLIPTIC_HYPERBOLIC:
        return _circular_hyperbolic(params.theta, params.s_or_phi)
    if kind is RotationKind.NEG_PARABOLIC:
        return _parabolic(params.s_or_phi)
    raise DomainError(f"unknown rotation kind {kind!r}")


def rotation_params_at(kind: RotationKind, alpha, beta, t) -> RotationParams:
    """Group parameters reached at time t by an orbit with frequencies alpha, beta."""
    a = 0.0 if alpha is None else alpha
    b = 0.0 if beta is None else beta
    if kind in (RotationKind.POS_ELLIPTIC, RotationKind.NEG_ELLIPTIC):
        return RotationParams(a * t, 0.0)
    if kind is RotationKind.POS_ELLIPTIC_ELLIPTIC:
        return RotationParams(a * t, b * t)
    if kind is RotationKind.NEG_HYPERBOLIC:
        return RotationParams(0.0, b * t)
    if kind is RotationKind.NEG_ELLIPTIC_HYPERBOLIC:
        return RotationParams(a * t, b * t)
    if kind is RotationKind.NEG_PARABOLIC:
        return RotationParams(0.0, t)
    raise DomainError(f"unknown rotation kind {kind!r}")


def _check_kind(kind: RotationKind, kappa: float):
    if kind.curvature_sign != (1 if kappa > 0 else -1):
        raise ClassMismatchError(f"{kind.value} requires curvature of sign "
                                 f"{kind.curvature_sign:+d}, got kappa={kappa}")


def propagate(coords0: np.ndarray, kind: RotationKind, alpha, beta, kappa, t):
    """Positions, velocities and accelerations of the rigid orbit at time t.

    `coords0` holds the initial positions, one 4-vector per row.  Velocities
    and accelerations come from differentiating the closed form, never from
    finite differences, so velocities are exactly tangent.

    Returns (q, v, a), each of shape (n, 4).
    """
    _check_kind(kind, kappa)
    q0 = np.asarray(coords0, dtype=float)
    n = q0.shape[0]
    alpha = 0.0 if alpha is None else float(alpha)
    beta = 0.0 if beta is None else float(beta)

    if kind is RotationKind.NEG_PARABOLIC:
        # w const; x linear; y, z quadratic in t
        cw, cx, cy, cz = q0.T
        slope = cz - cy
        q = np.column_stack([cw,
                             cx + slope * t,
                             cy + cx * t + 0.5 * slope * t * t,
                             cz + cx * t + 0.5 * slope * t * t])
        v = np.column_stack([np.zeros(n), slope, cx + slope * t, cx + slope * t])
        acc = np.column_stack([np.zeros(n), np.zeros(n), slope, slope])
        return q, v, acc

    q = np.empty_like(q0)
    v = np.zeros_like(q0)
    acc = np.zeros_like(q0)

    if kind is RotationKind.NEG_HYPERBOLIC:
        q[:, :2] = q0[:, :2]
    else:
        c, s = np.cos(alpha * t), np.sin(alpha * t)
        w0, x0 = q0[:, 0], q0[:, 1]
        q[:, 0] = w0 * c - x0 * s
        q[:, 1] = w0 * s + x0 * c
        v[:, 0] = -alpha * q[:, 1]
        v[:, 1] = alpha * q[:, 0]
        acc[:, :2] = -alpha * alpha * q[:, :2]

    if kind in (RotationKind.POS_ELLIPTIC, RotationKind.NEG_ELLIPTIC):
        q[:, 2:] = q0[:, 2:]
    elif kind is RotationKind.POS_ELLIPTIC_ELLIPTIC:
        c, s = np.cos(beta * t), np.sin(beta * t)
        y0, z0 = q0[:, 2], q0[:, 3]
        q[:, 2] = y0 * c - z0 * s
        q[:, 3] = y0 * s + z0 * c
        v[:, 2] = -beta * q[:, 3]
        v[:, 3] = beta * q[:, 2]
        acc[:, 2:] = -beta * beta * q[:, 2:]
    else:  # hyperbolic rotation in the yz plane
        ch, sh = np.cosh(beta * t), np.sinh(beta * t)
        y0, z0 = q0[:, 2], q0[:, 3]
        q[:, 2] = y0 * ch + z0 * sh
        q[:, 3] = y0 * sh + z0 * ch
        v[:, 2] = beta * q[:, 3]
        v[:, 3] = beta * q[:, 2]
        acc[:, 2:] = beta * beta * q[:, 2:]

    return q, v, acc


def generate_trajectory(spec, t):
    """Phase state of a relative-equilibrium description at time t.

    `spec` is an :class:`~curvednbody.equilibria.RESpec`; positions satisfy
    the manifold constraints and velocities are tangent by construction.
    """
    from .dynamics import PhaseState  # deferred to avoid an import cycle

    q, v, _ = propagate(spec.coords0, spec.kind, spec.alpha, spec.beta,
                        spec.kappa, t)
    return PhaseState.from_arrays(spec.kappa, spec.masses, q, v, t=t)
