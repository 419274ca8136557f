"""Constant-curvature ambient geometry.

Points live on the 3-dimensional manifold of curvature kappa != 0 embedded in
R^4: the sphere w^2+x^2+y^2+z^2 = 1/kappa for kappa > 0, or the upper sheet
(z > 0) of the hyperboloid w^2+x^2+y^2-z^2 = 1/kappa for kappa < 0.  All
operations carry the curvature explicitly so computations at different
curvatures can run side by side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Relative tolerance for every on-manifold / tangency check.
EPS_MANIFOLD = 1e-12


@dataclass(frozen=True)
class Curvature:
    """Nonzero curvature with its derived sign."""

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not np.isfinite(k) or k == 0.0:
            raise DomainError(f"curvature must be finite and nonzero, got {self.kappa}")
        object.__setattr__(self, "kappa", k)

    @property
    def sigma(self) -> int:
        return 1 if self.kappa > 0 else -1

    @property
    def inv(self) -> float:
        """1/kappa, the squared (pseudo-)radius of the manifold."""
        return 1.0 / self.kappa

    @property
    def radius(self) -> float:
        """|kappa|^(-1/2), the length scale of the manifold."""
        return 1.0 / np.sqrt(abs(self.kappa))

    def metric_signs(self) -> np.ndarray:
        """Signature (1, 1, 1, sigma) of the ambient inner product."""
        return np.array([1.0, 1.0, 1.0, float(self.sigma)])


def inner(a, b, curvature: Curvature):
    """Sign-adjusted ambient inner product a_w b_w + a_x b_x + a_y b_y + sigma a_z b_z.

    Accepts arrays of 4-vectors in the last axis; bilinear and symmetric.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (a[..., :3] * b[..., :3]).sum(axis=-1) + curvature.sigma * a[..., 3] * b[..., 3]


def _as_vec4(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (4,):
        raise DomainError(f"expected a 4-vector, got shape {v.shape}")
    return v


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A point of the curvature-kappa manifold, validated on construction."""

    v: np.ndarray
    curvature: Curvature

    def __post_init__(self):
        v = _as_vec4(self.v).copy()
        v.flags.writeable = False
        object.__setattr__(self, "v", v)
        s = self.curvature.kappa * inner(v, v, self.curvature)
        # the scale of roundoff in the (possibly cancelling) quadratic form
        scale = abs(self.curvature.kappa) * float(v @ v)
        if abs(s - 1.0) > EPS_MANIFOLD * max(1.0, scale):
            raise DomainError(f"point is off the manifold: kappa*<v,v> = {s!r}")
        if self.curvature.kappa < 0 and v[3] <= 0:
            raise DomainError("hyperbolic points must have z > 0")


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A vector attached to a manifold point, orthogonal to it."""

    base: ManifoldPoint
    d: np.ndarray

    def __post_init__(self):
        d = _as_vec4(self.d).copy()
        d.flags.writeable = False
        object.__setattr__(self, "d", d)
        ip = inner(self.base.v, d, self.base.curvature)
        scale = max(1.0, float(np.linalg.norm(self.base.v) * np.linalg.norm(d)))
        if abs(ip) > EPS_MANIFOLD * scale:
            raise DomainError(f"vector is not tangent: <q,d> = {ip!r}")


def _clamped_arc(arg, curvature: Curvature, tol=EPS_MANIFOLD):
    """Clamp the distance argument to its valid range, or reject it.

    For kappa > 0 the argument of arccos must lie in [-1, 1]; for kappa < 0
    the argument of arccosh must lie in [1, inf).  Overshoots within `tol`
    (collision/antipodal rounding) are clamped, larger ones signal
    off-manifold input.
    """
    arg = float(arg)
    bound_tol = tol * max(1.0, abs(arg))
    if curvature.kappa > 0:
        if abs(arg) > 1.0 + bound_tol:
            raise DomainError(f"arc argument {arg!r} outside [-1, 1]")
        return min(1.0, max(-1.0, arg))
    if arg < 1.0 - bound_tol:
        raise DomainError(f"area argument {arg!r} below 1")
    return max(1.0, arg)


def distance(a: ManifoldPoint, b: ManifoldPoint) -> float:
    """Geodesic distance between two points of the same manifold."""
    if a.curvature != b.curvature:
        raise DomainError("points lie on manifolds of different curvature")
    curv = a.curvature
    arg = _clamped_arc(curv.kappa * inner(a.v, b.v, curv), curv)
    if curv.kappa > 0:
        return float(np.arccos(arg)) / np.sqrt(curv.kappa)
    return float(np.arccosh(arg)) / np.sqrt(-curv.kappa)


def extended_distance(a, b, curvature: Curvature) -> float:
    """Distance extended to the ambient space.

    Both arguments are normalized onto the manifold before the arc length is
    taken, so the result is invariant under positive rescaling of either
    argument and coincides with :func:`distance` on the manifold itself.
    """
    a = _as_vec4(a)
    b = _as_vec4(b)
    k = curvature.kappa
    sa = k * inner(a, a, curvature)
    sb = k * inner(b, b, curvature)
    if sa <= 0 or sb <= 0:
        raise DomainError("argument is null or its norm sign is incompatible "
                          "with the curvature")
    arg = _clamped_arc(k * inner(a, b, curvature) / np.sqrt(sa * sb), curvature)
    if k > 0:
        return float(np.arccos(arg)) / np.sqrt(k)
    return float(np.arccosh(arg)) / np.sqrt(-k)


# -- unified trigonometry ----------------------------------------------------

def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not np.isfinite(kappa) or kappa == 0.0:
        raise DomainError(f"kappa must be finite and nonzero, got {kappa}")
    return kappa


def sn(kappa, x):
    """Curvature sine: sin for kappa > 0, sinh for kappa < 0, both rescaled."""
    kappa = _check_kappa(kappa)
    x = np.asarray(x, dtype=float)
    if kappa > 0:
        rk = np.sqrt(kappa)
        out = np.sin(rk * x) / rk
    else:
        rk = np.sqrt(-kappa)
        out = np.sinh(rk * x) / rk
    return out if out.ndim else float(out)


def csn(kappa, x):
    """Curvature cosine: cos for kappa > 0, cosh for kappa < 0."""
    kappa = _check_kappa(kappa)
    x = np.asarray(x, dtype=float)
    out = np.cos(np.sqrt(kappa) * x) if kappa > 0 else np.cosh(np.sqrt(-kappa) * x)
    return out if out.ndim else float(out)


def tn(kappa, x):
    """Curvature tangent sn/csn."""
    c = np.asarray(csn(kappa, x))
    if np.any(np.abs(c) <= EPS_MANIFOLD):
        raise DomainError("tangent undefined: csn vanishes")
    out = np.asarray(sn(kappa, x)) / c
    return out if out.ndim else float(out)


def ctn(kappa, x):
    """Curvature cotangent csn/sn."""
    kappa = _check_kappa(kappa)
    s = np.asarray(sn(kappa, x))
    if np.any(np.abs(s) <= EPS_MANIFOLD / np.sqrt(abs(kappa))):
        raise DomainError("cotangent undefined: sn vanishes")
    out = np.asarray(csn(kappa, x)) / s
    return out if out.ndim else float(out)


# -- projections and canonical surfaces ---------------------------------------

def stereographic(p: ManifoldPoint) -> np.ndarray:
    """Project a manifold point to the hyperplane z = 0.

    The projection center is the north pole (0, 0, 0, sigma*R).  For
    kappa < 0 the image lies in the open ball of radius |kappa|^(-1/2).
    """
    curv = p.curvature
    R = curv.radius
    den = R - curv.sigma * p.v[3]
    if abs(den) <= EPS_MANIFOLD * R:
        raise DomainError("stereographic projection undefined at the north pole")
    return R * p.v[:3] / den


def stereographic_inverse(wxy, curvature: Curvature) -> ManifoldPoint:
    """Inverse of :func:`stereographic`."""
    wxy = np.asarray(wxy, dtype=float)
    if wxy.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {wxy.shape}")
    R = curvature.radius
    sig = curvature.sigma
    rho2 = float(wxy @ wxy)
    den = R * R + sig * rho2
    if abs(den) <= EPS_MANIFOLD * R * R:
        raise DomainError("image point is outside the range of the projection")
    v = np.empty(4)
    v[:3] = 2.0 * R * R * wxy / den
    v[3] = R * (rho2 - sig * R * R) / den
    return ManifoldPoint(v, curvature)


def hopf_map(p: ManifoldPoint) -> np.ndarray:
    """Map a point of the 3-sphere to the 2-sphere of radius 1/kappa.

    Every circle of the single-rotation family collapses to one image point.
    """
    if p.curvature.kappa <= 0:
        raise DomainError("the circle-to-point map requires kappa > 0")
    w, x, y, z = p.v
    return np.array([w * w + x * x - y * y - z * z,
                     2.0 * (w * z + x * y),
                     2.0 * (x * z - w * y)])


def clifford_point(r, rho, theta, phi, curvature: Curvature) -> ManifoldPoint:
    """Point of the flat torus {w^2+x^2 = r^2, y^2+z^2 = rho^2} in the 3-sphere."""
    if curvature.kappa <= 0:
        raise DomainError("the flat torus lives in positive curvature")
    if abs(r * r + rho * rho - curvature.inv) > EPS_MANIFOLD * abs(curvature.inv):
        raise DomainError("torus radii must satisfy r^2 + rho^2 = 1/kappa")
    v = np.array([r * np.cos(theta), r * np.sin(theta),
                  rho * np.cos(phi), rho * np.sin(phi)])
    return ManifoldPoint(v, curvature)


def cylinder_point(r, eta, theta, xi, curvature: Curvature) -> ManifoldPoint:
    """Point of the cylinder {w^2+x^2 = r^2, z^2-y^2 = eta^2} in hyperbolic space."""
    if curvature.kappa >= 0:
        raise DomainError("the cylinder lives in negative curvature")
    if abs(r * r - eta * eta - curvature.inv) > EPS_MANIFOLD * abs(curvature.inv):
        raise DomainError("cylinder radii must satisfy r^2 - eta^2 = 1/kappa")
    v = np.array([r * np.cos(theta), r * np.sin(theta),
                  eta * np.sinh(xi), eta * np.cosh(xi)])
    return ManifoldPoint(v, curvature)


def project_to_manifold(v, curvature: Curvature) -> ManifoldPoint:
    """Rescale an ambient vector onto the manifold (idempotent)."""
    v = _as_vec4(v)
    s = curvature.kappa * inner(v, v, curvature)
    if s <= 0:
        raise DomainError("vector norm sign is incompatible with the curvature")
    if curvature.kappa < 0 and v[3] <= 0:
        raise DomainError("hyperbolic points must have z > 0")
    return ManifoldPoint(v / np.sqrt(s), curvature)


def project_to_tangent(p: ManifoldPoint, d) -> TangentVector:
    """Remove the component of d along p (idempotent)."""
    d = _as_vec4(d)
    curv = p.curvature
    return TangentVector(p, d - curv.kappa * inner(p.v, d, curv) * p.v)
