"""Qualitative trajectory classification and linear-stability scanning.

A rigid orbit confines each body to a coordinate-aligned surface: a point, a
circle, a flat torus (positive curvature), or a hyperbola / hyperbolic
cylinder (negative curvature).  `classify` fits those surfaces to trajectory
samples.  `monodromy` propagates the variational flow of a periodic
single-rotation orbit over one period, restricts it to the constraint-tangent
subspace, and classifies the spectrum; `stability_scan` locates the radii
where the equal-mass triangle family changes between totally elliptic and
complex-saddle behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import FirstIntegrals, first_integrals
from .equilibria import RESpec, catalog
from .errors import ClassMismatchError, DomainError, InsufficientSamplesError
from .integrator import IntegratorConfig, constraint_tangent_basis, variational_flow
from .isometry import RotationKind, generate_trajectory

# band around +1 that absorbs the unit multipliers forced by the first
# integrals, the constraints, and phase shift
DELTA_TRIVIAL = 1e-5
# tolerance on |multiplier| - 1 for calling a multiplier elliptic
DELTA_UNIT = 1e-5

# surface-fit tolerances
_RADIUS_TOL = 1e-7
_FIXED_TOL = 1e-9
_PATTERN_TOL = 1e-9


@dataclass(frozen=True)
class BodySurface:
    """Per-body residence surface: kind plus the two radius parameters
    (circle radius and torus/cylinder second radius)."""

    kind: str
    r: float
    second: float


@dataclass(frozen=True)
class TrajectoryClass:
    tag: str
    per_body: tuple[BodySurface, ...]
    momentum_pattern: frozenset[str]


@dataclass(frozen=True)
class StabilityVerdict:
    multipliers: np.ndarray
    n_trivial: int
    classification: str
    max_off_unit: float


@dataclass(frozen=True)
class BifurcationScan:
    r: np.ndarray
    max_off_unit: np.ndarray
    classifications: tuple[str, ...]
    transitions: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]


def _fit_body(qs, vs, kappa):
    """Classify one body's sampled path; qs, vs have one sample per row."""
    spread = np.max(qs.max(axis=0) - qs.min(axis=0))
    if spread < _FIXED_TOL:
        return BodySurface("fixed", float(np.hypot(qs[0, 0], qs[0, 1])),
                           _second_radius(qs[0], kappa))
    r2 = qs[:, 0] ** 2 + qs[:, 1] ** 2
    s2 = (qs[:, 2] ** 2 + qs[:, 3] ** 2 if kappa > 0
          else qs[:, 3] ** 2 - qs[:, 2] ** 2)
    if np.ptp(r2) > _RADIUS_TOL or np.ptp(s2) > _RADIUS_TOL:
        return BodySurface("unclassified", float("nan"), float("nan"))
    r = float(np.sqrt(np.mean(r2)))
    second = float(np.sqrt(max(np.mean(s2), 0.0)))
    wx_moves = np.max(np.ptp(qs[:, :2], axis=0)) > _FIXED_TOL
    yz_moves = np.max(np.ptp(qs[:, 2:], axis=0)) > _FIXED_TOL
    if kappa > 0:
        if wx_moves and yz_moves:
            return BodySurface("torus", r, second)
        if wx_moves:
            return BodySurface("circle_wx", r, second)
        return BodySurface("circle_yz", r, second)
    if yz_moves:
        kind = ("geodesic_hyperbola" if r < 1e-7 else "hyperbolic_cylinder")
        return BodySurface(kind, r, second)
    return BodySurface("circle_wx", r, second)


def _second_radius(q, kappa):
    return float(np.sqrt(q[2] ** 2 + q[3] ** 2) if kappa > 0
                 else np.sqrt(max(q[3] ** 2 - q[2] ** 2, 0.0)))


def _momentum_pattern(integrals: FirstIntegrals) -> frozenset:
    values = integrals.angular()
    return frozenset(name for name, v in zip(FirstIntegrals.COMPONENTS, values)
                     if abs(v) > _PATTERN_TOL)


def classify(samples) -> TrajectoryClass:
    """Map trajectory samples to the rigid-orbit taxonomy.

    Fits, per body, the constancy of (w^2+x^2, y^2+z^2) for positive
    curvature or (w^2+x^2, z^2-y^2) for negative curvature, detects fixed
    bodies, and reports which angular-momentum components are active.
    """
    if len(samples) < 8:
        raise InsufficientSamplesError(
            f"need at least 8 samples, got {len(samples)}")
    kappa = samples[0].state.kappa
    n = samples[0].state.n
    qs = np.stack([s.state.q for s in samples])   # (n_samples, n, 4)
    vs = np.stack([s.state.v for s in samples])
    bodies = tuple(_fit_body(qs[:, i, :], vs[:, i, :], kappa)
                   for i in range(n))
    kinds = {b.kind for b in bodies}
    if "unclassified" in kinds:
        tag = "unclassified"
    elif kappa > 0:
        if kinds == {"fixed"}:
            tag = "fixed_point"
        elif "torus" in kinds:
            tag = "clifford_torus"
        elif len(kinds) > 1:
            tag = "complementary_mixed"
        else:
            tag = "circle_motion"
    else:
        if kinds <= {"circle_wx"}:
            tag = "circle_motion"
        elif kinds == {"geodesic_hyperbola"}:
            tag = "geodesic_hyperbola"
        elif kinds <= {"geodesic_hyperbola", "hyperbolic_cylinder", "circle_wx"}:
            tag = "hyperbolic_cylinder"
        else:
            tag = "fixed_point" if kinds == {"fixed"} else "unclassified"
    return TrajectoryClass(tag, bodies, _momentum_pattern(samples[0].integrals))


def _monodromy_config(config):
    if config is not None:
        return config
    return IntegratorConfig(rel_tol=1e-12, abs_tol=1e-12)


def _reduced_system(state):
    """Drop a coordinate that stays identically zero, if any.

    Single-rotation orbits confined to a great 2-sphere evolve in a 3-
    dimensional ambient space (the invariant-surface property of the
    equations of motion), which shrinks the variational system from 8n to
    6n dimensions.
    """
    for c in (2, 3):
        if np.max(np.abs(state.q[:, c])) < 1e-13 and \
                np.max(np.abs(state.v[:, c])) < 1e-13:
            keep = [k for k in range(4) if k != c]
            return state.q[:, keep], state.v[:, keep], np.ones(3)
    return None


def _classify_spectrum(multipliers):
    dist_to_one = np.abs(multipliers - 1.0)
    trivial = dist_to_one < DELTA_TRIVIAL
    n_trivial = int(np.sum(trivial))
    rest = multipliers[~trivial]
    if rest.size == 0:
        return n_trivial, 0.0, "TotallyElliptic"
    off = np.abs(np.abs(rest) - 1.0)
    max_off = float(np.max(off))
    if max_off < DELTA_UNIT:
        return n_trivial, max_off, "TotallyElliptic"
    outside = rest[np.abs(rest) > 1.0 + DELTA_UNIT]
    if outside.size and np.any(np.abs(np.angle(outside)) > 1e-3):
        return n_trivial, max_off, "ComplexSaddle"
    return n_trivial, max_off, "Mixed"


def monodromy(spec: RESpec, config: IntegratorConfig | None = None,
              reduced: bool = True) -> StabilityVerdict:
    """Floquet multipliers of a periodic single-rotation orbit.

    Integrates the variational flow over one period T = 2 pi / |alpha| and
    restricts the resulting matrix to the constraint-tangent subspace (an
    exact invariant of the linearized flow), which removes the directions
    normal to the position/velocity constraints.  Unit multipliers forced by
    the first integrals and phase shift are counted and excluded; the
    classification comes from the remaining spectrum.
    """
    if spec.kind is not RotationKind.POS_ELLIPTIC or spec.kappa <= 0:
        raise ClassMismatchError("monodromy expects a periodic simply "
                                 "rotating positive-curvature orbit")
    cfg = _monodromy_config(config)
    period = 2.0 * np.pi / abs(spec.alpha)
    state0 = generate_trajectory(spec, 0.0)
    reduced_arrays = _reduced_system(state0) if reduced else None
    if reduced_arrays is not None:
        q0, v0, g = reduced_arrays
    else:
        q0, v0, g = state0.q, state0.v, state0.metric_signs()
    _, _, phi = variational_flow(q0, v0, spec.masses, spec.kappa, g, 0.0,
                                 period, cfg)
    basis = constraint_tangent_basis(q0, v0, spec.kappa, g)
    multipliers = np.linalg.eigvals(basis.T @ phi @ basis)
    n_trivial, max_off, label = _classify_spectrum(multipliers)
    return StabilityVerdict(multipliers, n_trivial, label, max_off)


def _lagrangian_indicator(r, kappa, m, config):
    verdict = monodromy(catalog("lagrangian_s3", kappa=kappa, m=m, r=r),
                        config=config)
    return verdict, verdict.max_off_unit - DELTA_UNIT


def stability_scan(r_min, r_max, steps, kappa=1.0, m=1.0,
                   config: IntegratorConfig | None = None,
                   refine_width=1e-6) -> BifurcationScan:
    """Scan the equal-mass triangle family for stability transitions.

    Evaluates the monodromy on a radius grid, brackets every sign change of
    (max_off_unit - DELTA_UNIT), and refines each bracket by bisection (the
    stability index is continuous but not smooth where multipliers collide,
    so no derivative-based root finding).
    """
    R = 1.0 / np.sqrt(kappa)
    if not (0.0 < r_min < r_max < R):
        raise DomainError("need 0 < r_min < r_max < kappa^(-1/2): the family "
                          "degenerates to a geodesic at the upper bound")
    steps = int(steps)
    if steps < 8:
        raise DomainError("at least 8 grid points required to bracket "
                          "transitions")
    cfg = _monodromy_config(config)
    grid = np.linspace(r_min, r_max, steps)
    verdicts = [_lagrangian_indicator(r, kappa, m, cfg) for r in grid]
    indicator = np.array([ind for _, ind in verdicts])
    transitions = []
    brackets = []
    for k in range(steps - 1):
        if np.sign(indicator[k]) == np.sign(indicator[k + 1]):
            continue
        lo, hi = grid[k], grid[k + 1]
        f_lo = indicator[k]
        while hi - lo > refine_width:
            mid = 0.5 * (lo + hi)
            _, f_mid = _lagrangian_indicator(mid, kappa, m, cfg)
            if np.sign(f_mid) == np.sign(f_lo):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        transitions.append(0.5 * (lo + hi))
        brackets.append((lo, hi))
    return BifurcationScan(grid,
                           np.array([v.max_off_unit for v, _ in verdicts]),
                           tuple(v.classification for v, _ in verdicts),
                           tuple(transitions), tuple(brackets))


def classify_trajectory_samples(states, masses=None):
    """Classify raw (t, PhaseState) pairs; convenience for file ingestion."""
    from .integrator import TrajectorySample
    samples = [TrajectorySample(s.t, s, first_integrals(s)) for s in states]
    return classify(samples)
