"""Relative-equilibrium descriptions, existence-criterion residuals,
closed-form frequencies, the positive-mass solver for great-circle shapes,
the orbit catalog, and the parabolic nonexistence check.

A rigid orbit is described by its rotation class, the initial coordinates of
every body, the masses, and one or two frequencies.  Each class has a system
of 4n algebraic conditions; an orbit of that class exists iff they hold.  The
residual evaluators transcribe those systems directly, so they provide a
route to existence that is independent of the equations of motion.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field

import numpy as np

from .dynamics import PhaseState, detect_singularity
from .errors import (
    ClassMismatchError,
    ConstraintError,
    DomainError,
    SingularConfigurationError,
    SingularityError,
)
from .geometry import EPS_MANIFOLD, Curvature, inner
from .isometry import RotationKind, generate_trajectory, propagate

# Absolute residual tolerance: criterion terms are O(1) for unit curvature
# and unit masses.
EPS_CRITERION = 1e-9

_EQUILATERAL = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])


@dataclass(frozen=True, eq=False)
class RESpec:
    """A relative-equilibrium candidate.

    `coords0` holds the initial position of every body (one row each); the
    per-class constants (circle radii, phases, hyperbolic offsets) are
    derived from it on demand.  Frequencies that a class does not use stay
    None.
    """

    kind: RotationKind
    kappa: float
    masses: np.ndarray
    coords0: np.ndarray
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "masses",
                           np.atleast_1d(np.asarray(self.masses, dtype=float)))
        object.__setattr__(self, "coords0",
                           np.atleast_2d(np.asarray(self.coords0, dtype=float)))
        curv = Curvature(self.kappa)
        if self.kind.curvature_sign != curv.sigma:
            raise ClassMismatchError(
                f"{self.kind.value} requires curvature sign "
                f"{self.kind.curvature_sign:+d}, got kappa={self.kappa}")
        n = self.masses.shape[0]
        if self.coords0.shape != (n, 4):
            raise ConstraintError("masses and coordinates disagree in length")
        if np.any(self.masses <= 0):
            raise ConstraintError("masses must be positive")
        for name in ("alpha", "beta"):
            f = getattr(self, name)
            if f is not None:
                if not np.isfinite(f) or f == 0.0:
                    raise ConstraintError(f"{name} must be finite and nonzero")
                object.__setattr__(self, name, float(f))
        if self.kind is not RotationKind.NEG_PARABOLIC:
            s = self.kappa * inner(self.coords0, self.coords0, curv)
            scale = abs(self.kappa) * (self.coords0 ** 2).sum(axis=1)
            if np.any(np.abs(s - 1.0) > EPS_MANIFOLD * np.maximum(1.0, scale)):
                raise ConstraintError("class radius constraints violated: "
                                      "initial coordinates are off the manifold")
            if self.kappa < 0 and np.any(self.coords0[:, 3] <= 0):
                raise ConstraintError("hyperbolic coordinates must have z > 0")

    @property
    def n(self) -> int:
        return self.masses.shape[0]

    @property
    def curvature(self) -> Curvature:
        return Curvature(self.kappa)

    # -- per-class constants ---------------------------------------------

    def polar_wx(self):
        """Circle radii r_i and phases a_i of the wx-plane rotation."""
        w, x = self.coords0[:, 0], self.coords0[:, 1]
        r = np.hypot(w, x)
        a = np.where(r > 0, np.arctan2(x, w), 0.0)
        return r, a

    def polar_yz(self):
        """Circle radii rho_i and phases b_i of the yz-plane rotation."""
        y, z = self.coords0[:, 2], self.coords0[:, 3]
        rho = np.hypot(y, z)
        b = np.where(rho > 0, np.arctan2(z, y), 0.0)
        return rho, b

    def hyperbolic_yz(self):
        """Hyperbola scales eta_i and offsets b_i of the yz-plane boost."""
        y, z = self.coords0[:, 2], self.coords0[:, 3]
        eta = np.sqrt(z * z - y * y)
        b = np.arctanh(y / z)
        return eta, b

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "kappa": self.kappa,
               "masses": self.masses.tolist(), "coords0": self.coords0.tolist()}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.beta is not None:
            out["beta"] = self.beta
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RESpec":
        return cls(RotationKind(d["kind"]), float(d["kappa"]),
                   np.asarray(d["masses"], dtype=float),
                   np.asarray(d["coords0"], dtype=float),
                   d.get("alpha"), d.get("beta"))


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of one criterion system: one 4-vector per body."""

    criterion: str
    residuals: np.ndarray
    max_abs: float
    passed: bool
    condition: str | None = None

    def to_dict(self) -> dict:
        return {"criterion": self.criterion,
                "residuals": self.residuals.tolist(),
                "max_abs": self.max_abs,
                "passed": bool(self.passed),
                "condition": self.condition}


def initial_state(spec: RESpec) -> PhaseState:
    """Phase state of the orbit at t = 0."""
    return generate_trajectory(spec, 0.0)


def pair_cosines(spec: RESpec) -> np.ndarray:
    """Pairwise invariants of the class (the inner products of the initial
    positions, written through the per-class constants), shape (n, n)."""
    kind = spec.kind
    if kind in (RotationKind.POS_ELLIPTIC, RotationKind.NEG_ELLIPTIC):
        r, a = spec.polar_wx()
        y, z = spec.coords0[:, 2], spec.coords0[:, 3]
        sz = 1.0 if kind is RotationKind.POS_ELLIPTIC else -1.0
        return (np.outer(r, r) * np.cos(a[:, None] - a[None, :])
                + np.outer(y, y) + sz * np.outer(z, z))
    if kind is RotationKind.POS_ELLIPTIC_ELLIPTIC:
        r, a = spec.polar_wx()
        rho, b = spec.polar_yz()
        return (np.outer(r, r) * np.cos(a[:, None] - a[None, :])
                + np.outer(rho, rho) * np.cos(b[:, None] - b[None, :]))
    if kind is RotationKind.NEG_HYPERBOLIC:
        w, x = spec.coords0[:, 0], spec.coords0[:, 1]
        eta, b = spec.hyperbolic_yz()
        return (np.outer(w, w) + np.outer(x, x)
                - np.outer(eta, eta) * np.cosh(b[:, None] - b[None, :]))
    if kind is RotationKind.NEG_ELLIPTIC_HYPERBOLIC:
        r, a = spec.polar_wx()
        eta, b = spec.hyperbolic_yz()
        return (np.outer(r, r) * np.cos(a[:, None] - a[None, :])
                - np.outer(eta, eta) * np.cosh(b[:, None] - b[None, :]))
    raise ClassMismatchError(f"no pairwise invariant for {kind.value}")


def _interaction_sums(spec: RESpec) -> np.ndarray:
    """Left-hand sides of the criterion systems: the 4n force sums, one row
    per body, evaluated from the per-class constants."""
    nu = pair_cosines(spec)
    k = spec.kappa
    verdict = detect_singularity(spec.coords0, spec.curvature)
    if verdict:
        raise SingularityError(verdict.kind, verdict.i, verdict.j, verdict.margin)
    sigma = 1.0 if k > 0 else -1.0
    den = sigma - sigma * (k * nu) ** 2
    np.fill_diagonal(den, 1.0)
    den **= 1.5
    wmat = spec.masses[None, :] / den
    np.fill_diagonal(wmat, 0.0)
    k32 = abs(k) ** 1.5
    q0 = spec.coords0
    return k32 * (wmat @ q0 - k * (wmat * nu).sum(axis=1)[:, None] * q0)


def _require_frequencies(spec: RESpec):
    kind = spec.kind
    if kind in (RotationKind.POS_ELLIPTIC, RotationKind.NEG_ELLIPTIC):
        if spec.alpha is None:
            raise ConstraintError("this class needs a nonzero frequency alpha")
    elif kind is RotationKind.NEG_HYPERBOLIC:
        if spec.beta is None:
            raise ConstraintError("this class needs a nonzero frequency beta")
    elif kind.doubly_rotating:
        if spec.alpha is None or spec.beta is None:
            raise ConstraintError("this class needs two nonzero frequencies")


def _centrifugal_terms(spec: RESpec) -> np.ndarray:
    """Right-hand sides of the criterion systems, one row per body."""
    k = spec.kappa
    q0 = spec.coords0
    kind = spec.kind
    out = np.empty_like(q0)
    if kind in (RotationKind.POS_ELLIPTIC, RotationKind.NEG_ELLIPTIC):
        r, _ = spec.polar_wx()
        a2 = spec.alpha ** 2
        out[:, :2] = ((k * r * r - 1.0) * a2)[:, None] * q0[:, :2]
        out[:, 2:] = (k * a2 * r * r)[:, None] * q0[:, 2:]
    elif kind is RotationKind.POS_ELLIPTIC_ELLIPTIC:
        r, _ = spec.polar_wx()
        rho, _ = spec.polar_yz()
        a2, b2 = spec.alpha ** 2, spec.beta ** 2
        common = k * a2 * r * r + k * b2 * rho * rho
        out[:, :2] = (common - a2)[:, None] * q0[:, :2]
        out[:, 2:] = (common - b2)[:, None] * q0[:, 2:]
    elif kind is RotationKind.NEG_HYPERBOLIC:
        eta, _ = spec.hyperbolic_yz()
        b2 = spec.beta ** 2
        out[:, :2] = (k * b2 * eta * eta)[:, None] * q0[:, :2]
        out[:, 2:] = ((k * eta * eta + 1.0) * b2)[:, None] * q0[:, 2:]
    elif kind is RotationKind.NEG_ELLIPTIC_HYPERBOLIC:
        r, _ = spec.polar_wx()
        eta, _ = spec.hyperbolic_yz()
        a2, b2 = spec.alpha ** 2, spec.beta ** 2
        common = k * a2 * r * r + k * b2 * eta * eta
        out[:, :2] = (common - a2)[:, None] * q0[:, :2]
        out[:, 2:] = (common + b2)[:, None] * q0[:, 2:]
    else:
        raise ClassMismatchError(f"no criterion for {kind.value}")
    return out


_CRITERION_NAME = {
    RotationKind.POS_ELLIPTIC: "pos-elliptic",
    RotationKind.POS_ELLIPTIC_ELLIPTIC: "pos-elliptic-elliptic",
    RotationKind.NEG_ELLIPTIC: "neg-elliptic",
    RotationKind.NEG_HYPERBOLIC: "neg-hyperbolic",
    RotationKind.NEG_ELLIPTIC_HYPERBOLIC: "neg-elliptic-hyperbolic",
}


def criterion_residual(spec: RESpec) -> ResidualReport:
    """Evaluate the 4n existence conditions of the spec's class.

    The report passes iff the candidate really is a relative equilibrium of
    that class (max absolute residual below EPS_CRITERION).
    """
    if spec.kind is RotationKind.NEG_PARABOLIC:
        raise ClassMismatchError("the parabolic class admits no relative "
                                 "equilibria; use parabolic_nonexistence_check")
    _require_frequencies(spec)
    res = _interaction_sums(spec) - _centrifugal_terms(spec)
    max_abs = float(np.max(np.abs(res)))
    return ResidualReport(_CRITERION_NAME[spec.kind], res, max_abs,
                          max_abs < EPS_CRITERION)


def _fixed_point_condition(spec: RESpec) -> str | None:
    tol = 1e-9 * spec.curvature.radius
    R = spec.curvature.radius
    if spec.kind is RotationKind.POS_ELLIPTIC:
        r, _ = spec.polar_wx()
        if np.all(np.abs(r - R) < tol):
            return "r_i = kappa^(-1/2) for all i"
        zero = np.abs(r) < tol
        great = np.abs(r - R) < tol
        if np.all(zero | great) and zero.any() and great.any():
            return "partition into r=0 and r=kappa^(-1/2)"
        return None
    r, _ = spec.polar_wx()
    rho, _ = spec.polar_yz()
    on_yz = np.abs(r) < tol       # rho = R
    on_wx = np.abs(rho) < tol     # r = R
    if np.all(on_yz | on_wx) and on_yz.any() and on_wx.any():
        return "complementary partition"
    if spec.alpha is not None and spec.beta is not None and \
            abs(abs(spec.alpha) - abs(spec.beta)) < 1e-12 * abs(spec.alpha):
        return "|alpha|=|beta|"
    return None


def fixed_point_residual(spec: RESpec) -> ResidualReport:
    """Evaluate only the force sums (the fixed-point systems).

    Applies to the two positive-curvature classes, whose orbits can be
    generated from fixed-point configurations.  The report also names which
    structural condition makes the configuration rotate consistently.
    """
    if spec.kind not in (RotationKind.POS_ELLIPTIC,
                         RotationKind.POS_ELLIPTIC_ELLIPTIC):
        raise ClassMismatchError("fixed points exist only in positive curvature")
    res = _interaction_sums(spec)
    max_abs = float(np.max(np.abs(res)))
    name = "fixed-point-" + _CRITERION_NAME[spec.kind]
    return ResidualReport(name, res, max_abs, max_abs < EPS_CRITERION,
                          condition=_fixed_point_condition(spec))


# -- closed-form frequencies ---------------------------------------------

def lagrangian_frequency(m, r, kappa):
    """Frequencies of the equal-mass equilateral triangle rotating on a
    circle of radius r; the two signs are the two senses of rotation."""
    kappa = float(kappa)
    if m <= 0:
        raise DomainError("mass must be positive")
    if r <= 0 or (kappa > 0 and r >= 1.0 / np.sqrt(kappa)):
        raise DomainError("circle radius outside the class domain")
    poly = 4.0 - 3.0 * kappa * r * r
    if poly <= 0:
        raise DomainError("4 - 3 kappa r^2 must be positive")
    alpha = np.sqrt(8.0 * m / (np.sqrt(3.0) * r ** 3 * poly ** 1.5))
    return alpha, -alpha


def hyperbolic_frequency(eta, kappa, m=1.0):
    """Frequencies of the three-body simply-hyperbolic orbit with outer
    bodies at hyperbola scale eta.

    The closed form is linear in the common mass; it is validated against
    the residual system of its class in the tests.
    """
    kappa = float(kappa)
    if kappa >= 0:
        raise DomainError("hyperbolic orbits need kappa < 0")
    if m <= 0 or eta <= 0:
        raise DomainError("mass and eta must be positive")
    if abs(kappa) * eta * eta <= 1.0:
        raise DomainError("|kappa| eta^2 must exceed 1")
    rad = m * (1.0 - 4.0 * kappa * eta * eta)
    den = 4.0 * eta ** 3 * (abs(kappa) * eta * eta - 1.0) ** 1.5
    beta = np.sqrt(rad / den)
    return beta, -beta


def elliptic_hyperbolic_frequencies(m, r, eta, kappa):
    """Frequency constraint of the three-body mixed-rotation orbit.

    Any pair (alpha, beta) with alpha^2 + beta^2 = S and both nonzero works.
    Returns (S, sampler) where sampler(theta) picks the pair
    (sqrt(S) cos theta, sqrt(S) sin theta).
    """
    kappa = float(kappa)
    if kappa >= 0:
        raise DomainError("mixed rotations need kappa < 0")
    if m <= 0 or eta <= 0:
        raise DomainError("mass and eta must be positive")
    if abs(r * r - eta * eta - 1.0 / kappa) > EPS_MANIFOLD * max(1.0, abs(1.0 / kappa)):
        raise DomainError("radii must satisfy r^2 - eta^2 = 1/kappa")
    if -kappa * eta * eta - 1.0 <= 0:
        raise DomainError("|kappa| eta^2 must exceed 1")
    total = m * (4.0 * abs(kappa) * eta * eta + 1.0) / (
        4.0 * eta ** 3 * (-kappa * eta * eta - 1.0) ** 1.5)

    def sample(theta):
        alpha = np.sqrt(total) * np.cos(theta)
        beta = np.sqrt(total) * np.sin(theta)
        if abs(alpha) < 1e-15 or abs(beta) < 1e-15:
            raise DomainError("both frequencies must be nonzero for this class")
        return alpha, beta

    return total, sample


# -- positive masses for great-circle shapes -------------------------------

def masses_for_great_circle_shape(angles, kappa):
    """Masses that make the given great-circle configuration a fixed point.

    The force sums restricted to a great circle are linear and homogeneous
    in the masses; this solves for a strictly positive nullspace vector,
    normalized to m_1 = 1.  Returns None when no such vector exists.
    """
    kappa = float(kappa)
    if kappa <= 0:
        raise DomainError("great-circle fixed points need kappa > 0")
    a = np.asarray(angles, dtype=float)
    n = a.shape[0]
    if n < 2:
        raise DomainError("at least two bodies required")
    R = 1.0 / np.sqrt(kappa)
    # reject coincident or antipodal phase pairs
    for i in range(n):
        for j in range(i + 1, n):
            gap = np.cos(a[i] - a[j])
            if abs(abs(gap) - 1.0) < 1e-12:
                raise SingularConfigurationError(
                    f"bodies {i} and {j} are coincident or antipodal")
    nu = R * R * np.cos(a[:, None] - a[None, :])
    den = (1.0 - (kappa * nu) ** 2) ** 1.5
    np.fill_diagonal(den, 1.0)
    k32 = kappa ** 1.5
    w0 = R * np.cos(a)
    x0 = R * np.sin(a)
    rows = np.zeros((2 * n, n))
    for i in range(n):
        cw = k32 * (w0 - kappa * nu[i] * w0[i]) / den[i]
        cx = k32 * (x0 - kappa * nu[i] * x0[i]) / den[i]
        cw[i] = cx[i] = 0.0
        rows[2 * i] = cw
        rows[2 * i + 1] = cx
    _, svals, vt = np.linalg.svd(rows)
    if svals[-1] >= 1e-10 * max(1.0, svals[0]):
        return None
    m = vt[-1]
    m = m * np.sign(m[np.argmax(np.abs(m))])
    if np.any(m <= 1e-12):
        return None
    return m / m[0]


# -- orbit catalog ----------------------------------------------------------

def _phases_to_circle(radius, phases, plane):
    """Columns of coordinates for bodies on a circle in the wx or yz plane."""
    n = len(phases)
    q = np.zeros((n, 4))
    c0 = 0 if plane == "wx" else 2
    q[:, c0] = radius * np.cos(phases)
    q[:, c0 + 1] = radius * np.sin(phases)
    return q


def _cat_lagrangian_s3(kappa=1.0, m=1.0, r=0.5, alpha=None):
    """Equal-mass equilateral triangle on a circle of a great sphere (single
    rotation, positive curvature)."""
    R = 1.0 / np.sqrt(kappa)
    if not 0 < r <= R:
        raise DomainError("need 0 < r <= kappa^(-1/2)")
    if alpha is None:
        alpha = lagrangian_frequency(m, r, kappa)[0] if r < R else 1.0
    q = _phases_to_circle(r, _EQUILATERAL, "wx")
    q[:, 3] = np.sqrt(max(R * R - r * r, 0.0))
    return RESpec(RotationKind.POS_ELLIPTIC, kappa, np.full(3, m), q, alpha)


def _cat_scalene_great_circle(kappa=1.0, angles=(0.0, 1.9, 4.0), alpha=1.0):
    """Scalene triangle of solver-determined masses on a great circle."""
    masses = masses_for_great_circle_shape(angles, kappa)
    if masses is None:
        raise DomainError("no positive masses fix this triangle shape")
    q = _phases_to_circle(1.0 / np.sqrt(kappa), np.asarray(angles), "wx")
    return RESpec(RotationKind.POS_ELLIPTIC, kappa, masses, q, alpha)


def _cat_six_mixed_fixed_rotating(kappa=1.0, m=1.0, alpha=1.0):
    """Three equal masses rotating on a great circle while three more sit
    fixed on the complementary great circle."""
    R = 1.0 / np.sqrt(kappa)
    q = np.vstack([_phases_to_circle(R, _EQUILATERAL, "wx"),
                   _phases_to_circle(R, _EQUILATERAL, "yz")])
    return RESpec(RotationKind.POS_ELLIPTIC, kappa, np.full(6, m), q, alpha)


def _cat_six_mixed_scalene(kappa=1.0, angles_rotating=(0.0, 1.9, 4.0),
                           angles_fixed=(0.4, 2.3, 4.2), alpha=1.0):
    """Scalene version of the mixed fixed/rotating six-body candidate.

    Each triangle gets the solver masses that fix it on its own circle.
    Note: every body also feels the cross-circle force
    kappa^(3/2) * sum(m_j q_j) over the opposite triangle, which vanishes
    only when that triangle's mass-weighted vertex sum is zero; with three
    bodies per circle that forces the equilateral equal-mass shape, so the
    scalene candidate fails its criterion (see the residual report).
    """
    m1 = masses_for_great_circle_shape(angles_rotating, kappa)
    m2 = masses_for_great_circle_shape(angles_fixed, kappa)
    if m1 is None or m2 is None:
        raise DomainError("no positive masses fix one of the triangle shapes")
    R = 1.0 / np.sqrt(kappa)
    q = np.vstack([_phases_to_circle(R, np.asarray(angles_rotating), "wx"),
                   _phases_to_circle(R, np.asarray(angles_fixed), "yz")])
    return RESpec(RotationKind.POS_ELLIPTIC, kappa, np.concatenate([m1, m2]),
                  q, alpha)


def _cat_triangle_double(kappa=1.0, m=1.0, r=None, alpha=1.0, beta=None):
    """Equal-mass equilateral triangle carried by a double rotation of equal
    frequency magnitudes; the bodies share one flat torus."""
    R = 1.0 / np.sqrt(kappa)
    if r is None:
        r = R / np.sqrt(2.0)
    if not 0 < r < R:
        raise DomainError("need 0 < r < kappa^(-1/2)")
    rho = np.sqrt(R * R - r * r)
    if beta is None:
        beta = alpha
    if abs(abs(alpha) - abs(beta)) > 1e-12 * abs(alpha):
        raise DomainError("this orbit requires |alpha| = |beta|")
    q = (_phases_to_circle(r, _EQUILATERAL, "wx")
         + _phases_to_circle(rho, _EQUILATERAL, "yz"))
    return RESpec(RotationKind.POS_ELLIPTIC_ELLIPTIC, kappa, np.full(3, m),
                  q, alpha, beta)


def _cat_tetrahedron_double(kappa=1.0, m=1.0, alpha=1.0, beta=None):
    """Four equal masses at a regular tetrahedron, doubly rotating with
    equal frequency magnitudes."""
    if beta is None:
        beta = alpha
    if abs(abs(alpha) - abs(beta)) > 1e-12 * abs(alpha):
        raise DomainError("this orbit requires |alpha| = |beta|")
    R = 1.0 / np.sqrt(kappa)
    q = R * np.array([
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 2.0 * np.sqrt(2.0) / 3.0, -1.0 / 3.0],
        [0.0, -np.sqrt(6.0) / 3.0, -np.sqrt(2.0) / 3.0, -1.0 / 3.0],
        [0.0, np.sqrt(6.0) / 3.0, -np.sqrt(2.0) / 3.0, -1.0 / 3.0],
    ])
    return RESpec(RotationKind.POS_ELLIPTIC_ELLIPTIC, kappa, np.full(4, m),
                  q, alpha, beta)


def _cat_pentatope_double(kappa=1.0, m=1.0, alpha=1.0, beta=None):
    """Five equal masses at a regular 4-simplex, doubly rotating with equal
    frequency magnitudes; this configuration fits on no 2-sphere."""
    if beta is None:
        beta = alpha
    if abs(abs(alpha) - abs(beta)) > 1e-12 * abs(alpha):
        raise DomainError("this orbit requires |alpha| = |beta|")
    R = 1.0 / np.sqrt(kappa)
    s5 = np.sqrt(5.0)
    q = R * np.array([
        [1.0, 0.0, 0.0, 0.0],
        [-0.25, np.sqrt(15.0) / 4.0, 0.0, 0.0],
        [-0.25, -s5 / (4.0 * np.sqrt(3.0)), s5 / np.sqrt(6.0), 0.0],
        [-0.25, -s5 / (4.0 * np.sqrt(3.0)), -s5 / (2.0 * np.sqrt(6.0)),
         s5 / (2.0 * np.sqrt(2.0))],
        [-0.25, -s5 / (4.0 * np.sqrt(3.0)), -s5 / (2.0 * np.sqrt(6.0)),
         -s5 / (2.0 * np.sqrt(2.0))],
    ])
    return RESpec(RotationKind.POS_ELLIPTIC_ELLIPTIC, kappa, np.full(5, m),
                  q, alpha, beta)


def _cat_six_double(kappa=1.0, m=1.0, alpha=1.0, beta=np.sqrt(2.0)):
    """Two equal-mass equilateral triangles rotating on complementary great
    circles with independent frequencies (quasiperiodic in general)."""
    R = 1.0 / np.sqrt(kappa)
    q = np.vstack([_phases_to_circle(R, _EQUILATERAL, "wx"),
                   _phases_to_circle(R, _EQUILATERAL, "yz")])
    return RESpec(RotationKind.POS_ELLIPTIC_ELLIPTIC, kappa, np.full(6, m),
                  q, alpha, beta)


def _cat_six_double_scalene(kappa=1.0, angles_wx=(0.0, 1.9, 4.0),
                            angles_yz=(0.4, 2.3, 4.2), alpha=1.0,
                            beta=np.sqrt(2.0)):
    """Scalene version of the doubly rotating complementary-circle candidate.

    Subject to the same cross-circle balance obstruction as
    six_mixed_scalene: only the equilateral equal-mass triangles make the
    opposing force sums vanish, so this candidate fails its criterion.
    """
    m1 = masses_for_great_circle_shape(angles_wx, kappa)
    m2 = masses_for_great_circle_shape(angles_yz, kappa)
    if m1 is None or m2 is None:
        raise DomainError("no positive masses fix one of the triangle shapes")
    R = 1.0 / np.sqrt(kappa)
    q = np.vstack([_phases_to_circle(R, np.asarray(angles_wx), "wx"),
                   _phases_to_circle(R, np.asarray(angles_yz), "yz")])
    return RESpec(RotationKind.POS_ELLIPTIC_ELLIPTIC, kappa,
                  np.concatenate([m1, m2]), q, alpha, beta)


def _cat_lagrangian_h3(kappa=-1.0, m=1.0, r=1.0, alpha=None):
    """Equal-mass equilateral triangle rotating on a circle of a hyperbolic
    2-surface (single circular rotation, negative curvature)."""
    if r <= 0:
        raise DomainError("need r > 0")
    if alpha is None:
        alpha = lagrangian_frequency(m, r, kappa)[0]
    q = _phases_to_circle(r, _EQUILATERAL, "wx")
    q[:, 3] = np.sqrt(r * r - 1.0 / kappa)
    return RESpec(RotationKind.NEG_ELLIPTIC, kappa, np.full(3, m), q, alpha)


def _cat_hyperbolic_h3(kappa=-1.0, m=1.0, eta=np.sqrt(2.0), beta=None):
    """Three bodies carried by a hyperbolic boost: one on the geodesic, two
    symmetric about it."""
    if abs(kappa) * eta * eta <= 1.0:
        raise DomainError("need |kappa| eta^2 > 1")
    x = np.sqrt(1.0 / kappa + eta * eta)
    if beta is None:
        beta = hyperbolic_frequency(eta, kappa, m)[0]
    R = 1.0 / np.sqrt(-kappa)
    q = np.array([[0.0, 0.0, 0.0, R],
                  [0.0, x, 0.0, eta],
                  [0.0, -x, 0.0, eta]])
    return RESpec(RotationKind.NEG_HYPERBOLIC, kappa, np.full(3, m), q,
                  beta=beta)


def _cat_elliptic_hyperbolic_h3(kappa=-1.0, m=1.0, eta=np.sqrt(2.0),
                                alpha=None, beta=None, angle=np.pi / 4.0):
    """Three bodies carried by a mixed circular/hyperbolic rotation: two on
    a cylinder, one on the geodesic it surrounds."""
    if abs(kappa) * eta * eta <= 1.0:
        raise DomainError("need |kappa| eta^2 > 1")
    r = np.sqrt(1.0 / kappa + eta * eta)
    if alpha is None or beta is None:
        _, sample = elliptic_hyperbolic_frequencies(m, r, eta, kappa)
        alpha, beta = sample(angle)
    R = 1.0 / np.sqrt(-kappa)
    q = np.array([[0.0, 0.0, 0.0, R],
                  [r, 0.0, 0.0, eta],
                  [-r, 0.0, 0.0, eta]])
    return RESpec(RotationKind.NEG_ELLIPTIC_HYPERBOLIC, kappa, np.full(3, m),
                  q, alpha, beta)


CATALOG = {
    "lagrangian_s3": _cat_lagrangian_s3,
    "scalene_great_circle": _cat_scalene_great_circle,
    "six_mixed_fixed_rotating": _cat_six_mixed_fixed_rotating,
    "six_mixed_scalene": _cat_six_mixed_scalene,
    "triangle_double": _cat_triangle_double,
    "tetrahedron_double": _cat_tetrahedron_double,
    "pentatope_double": _cat_pentatope_double,
    "six_double": _cat_six_double,
    "six_double_scalene": _cat_six_double_scalene,
    "lagrangian_h3": _cat_lagrangian_h3,
    "hyperbolic_h3": _cat_hyperbolic_h3,
    "elliptic_hyperbolic_h3": _cat_elliptic_hyperbolic_h3,
}


def catalog(name: str, **params) -> RESpec:
    """Build a named orbit from the catalog; see catalog_defaults(name)."""
    try:
        builder = CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown catalog orbit {name!r}; "
                          f"choices: {', '.join(sorted(CATALOG))}") from None
    return builder(**params)


def catalog_defaults(name: str) -> dict:
    """Default parameters of a catalog entry."""
    sig = inspect.signature(CATALOG[name])
    return {k: p.default for k, p in sig.parameters.items()}


# -- parabolic nonexistence -------------------------------------------------

@dataclass(frozen=True)
class ParabolicEvidence:
    """Evidence that a parabolic ansatz is not a solution.

    Either the yz angular momentum drifts linearly in time (drift_rate != 0,
    with |drift_rate| = sum of m_i (gamma_i - delta_i)^2), or demanding a
    conserved momentum forces gamma_i = delta_i and with it the impossible
    constraint alpha_i^2 + beta_i^2 = 1/kappa < 0.
    """

    drift_rate: float
    quadratic_mass_sum: float
    constraint_contradiction: bool
    eom_residual_t0: float | None
    conclusion: str

    def to_dict(self) -> dict:
        return {"drift_rate": self.drift_rate,
                "quadratic_mass_sum": self.quadratic_mass_sum,
                "constraint_contradiction": self.constraint_contradiction,
                "eom_residual_t0": self.eom_residual_t0,
                "conclusion": self.conclusion}


def random_parabolic_spec(n, kappa, rng, spread=1.0) -> RESpec:
    """Random valid parabolic ansatz (bodies on the manifold)."""
    if kappa >= 0:
        raise DomainError("parabolic ansatz needs kappa < 0")
    wxy = spread * rng.standard_normal((n, 3))
    z = np.sqrt((wxy * wxy).sum(axis=1) - 1.0 / kappa)
    coords = np.column_stack([wxy, z])
    return RESpec(RotationKind.NEG_PARABOLIC, kappa, np.ones(n), coords)


def parabolic_nonexistence_check(spec: RESpec) -> ParabolicEvidence:
    """Certify that the given parabolic ansatz cannot solve the equations.

    Samples the yz angular momentum of the ansatz at several times and
    extracts its linear drift; a nonzero drift violates conservation.  If
    the drift vanishes (gamma_i = delta_i for all i), the manifold
    constraint itself is unsatisfiable.
    """
    if spec.kind is not RotationKind.NEG_PARABOLIC:
        raise ClassMismatchError("expected a parabolic ansatz")
    m = spec.masses
    gamma = spec.coords0[:, 2]
    delta = spec.coords0[:, 3]
    quad = float(np.sum(m * (gamma - delta) ** 2))

    ts = np.linspace(0.0, 2.0, 5)
    c_yz = []
    for t in ts:
        q, v, _ = propagate(spec.coords0, spec.kind, None, None, spec.kappa, t)
        c_yz.append(np.sum(m * (q[:, 2] * v[:, 3] - v[:, 2] * q[:, 3])))
    drift = float(np.polyfit(ts, c_yz, 1)[0])

    contradiction = quad < 1e-14
    if contradiction:
        conclusion = ("conservation forces gamma_i = delta_i, leaving "
                      "alpha_i^2 + beta_i^2 = 1/kappa < 0: no such points exist")
    else:
        conclusion = "yz angular momentum drifts linearly: not a solution"

    eom_res = None
    curv = spec.curvature
    s = spec.kappa * inner(spec.coords0, spec.coords0, curv)
    if np.all(np.abs(s - 1.0) < 1e-9) and np.all(spec.coords0[:, 3] > 0):
        from . import kernels
        q, v, acc = propagate(spec.coords0, spec.kind, None, None, spec.kappa, 0.0)
        model = kernels.accelerations(q, v, m, spec.kappa, curv.metric_signs())
        eom_res = float(np.max(np.abs(acc - model)))

    return ParabolicEvidence(drift, quad, contradiction, eom_res, conclusion)
