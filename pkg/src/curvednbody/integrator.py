"""Adaptive constrained integration of the equations of motion.

An embedded Dormand-Prince 5(4) pair with PI step-size control integrates the
second-order system.  The exact flow keeps positions on the manifold and
velocities tangent, so after every accepted step the state is re-projected
(a roundoff-size correction) and the pairwise singularity margin is checked.
The same stepper jointly propagates the first variational flow for stability
work, using the analytic Jacobian of the scale-invariant right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dynamics import FirstIntegrals, PhaseState, first_integrals
from .errors import DomainError, SingularityApproach, SingularityError, StepSizeUnderflow
from .geometry import inner

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th- and embedded 4th-order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200,
               22 / 525, -1 / 40])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents (error^-alpha * previous_error^beta)
_PI_ALPHA = 0.17
_PI_BETA = 0.04


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    h_init: float = 1e-3
    h_min: float = 1e-13
    project_every_step: bool = True
    singularity_margin_stop: float = 1e-6

    def __post_init__(self):
        if not (0 < self.h_min <= self.h_init):
            raise DomainError("need 0 < h_min <= h_init")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("tolerances must be positive")


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: PhaseState
    integrals: FirstIntegrals


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """First variational flow Phi(t1, t0) of the full 8n-dimensional system."""

    phi: np.ndarray
    t0: float
    t1: float

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise DomainError("transition matrix must be square")
        object.__setattr__(self, "phi", phi)


def _rk_step(f, t, y, h):
    """One 5(4) step; returns the 5th-order solution and the error vector."""
    k = np.empty((7, y.shape[0]))
    k[0] = f(t, y)
    for s in range(1, 7):
        k[s] = f(t + _C[s] * h, y + h * (_A[s] @ k[:s]))
    y5 = y + h * (_B5 @ k)
    return y5, h * (_E @ k)


class _AdaptiveLoop:
    """Shared step-size machinery for plain and variational integration."""

    def __init__(self, f, t0, y0, config):
        self.f = f
        self.t = float(t0)
        self.y = np.asarray(y0, dtype=float).copy()
        self.cfg = config
        self.h = config.h_init
        self.err_prev = 1.0

    def advance_to(self, t_target):
        """Step until t_target, yielding (t, y) after each accepted step."""
        cfg = self.cfg
        while self.t < t_target - 1e-14 * max(1.0, abs(t_target)):
            h = min(self.h, t_target - self.t)
            if h < cfg.h_min:
                raise StepSizeUnderflow(self.t, h, cfg.h_min)
            y5, err_vec = _rk_step(self.f, self.t, self.y, h)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(self.y),
                                                           np.abs(y5))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if not np.isfinite(err) or err > 1.0:
                fac = _MIN_FACTOR if not np.isfinite(err) else max(
                    _MIN_FACTOR, _SAFETY * err ** -0.2)
                self.h = h * fac
                continue
            self.t = self.t + h
            self.y = y5
            fac = _SAFETY * (err + 1e-300) ** -_PI_ALPHA * \
                (self.err_prev + 1e-300) ** _PI_BETA
            self.h = h * min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
            self.err_prev = max(err, 1e-10)
            yield self.t, self.y


def _project_arrays(q, v, kappa, g):
    """Rescale positions onto the manifold, remove normal velocity parts."""
    s = kappa * ((q * g) * q).sum(axis=1)
    q = q / np.sqrt(s)[:, None]
    v = v - kappa * ((q * g) * v).sum(axis=1)[:, None] * q
    return q, v


def integrate(state0: PhaseState, t_end, config: IntegratorConfig | None = None,
              sample_times=None) -> list[TrajectorySample]:
    """Integrate the equations of motion, sampling at the requested times.

    Positions are re-projected onto the manifold (and velocities onto the
    tangent spaces) after every accepted step.  When any pair's margin
    |1 - (kappa <q_i,q_j>)^2| drops below the configured stop threshold the
    integration raises SingularityApproach carrying the samples collected so
    far.

    Returns one TrajectorySample (state plus first integrals) per sample
    time; t0 is included only if listed.
    """
    cfg = config or IntegratorConfig()
    t0 = state0.t
    t_end = float(t_end)
    if t_end <= t0:
        raise DomainError("t_end must exceed the state's time")
    if sample_times is None:
        sample_times = [t_end]
    times = np.sort(np.unique(np.asarray(sample_times, dtype=float)))
    if times[0] < t0 or times[-1] > t_end + 1e-12:
        raise DomainError("sample times must lie in [t0, t_end]")

    from .dynamics import detect_singularity
    verdict = detect_singularity(state0.q, state0.curvature)
    if verdict:
        raise SingularityError(verdict.kind, verdict.i, verdict.j, verdict.margin)

    n = state0.n
    kappa = state0.kappa
    g = state0.metric_signs()
    masses = state0.masses

    def f(t, y):
        return kernels.rhs(y, n, 4, masses, kappa, g)

    samples: list[TrajectorySample] = []

    def emit(t, q, v):
        state = PhaseState(state0.curvature, state0.bodies, q, v, t)
        samples.append(TrajectorySample(t, state, first_integrals(state)))

    if times[0] == t0:
        emit(t0, state0.q.copy(), state0.v.copy())
        times = times[1:]

    loop = _AdaptiveLoop(f, t0, np.concatenate([state0.q.ravel(),
                                                state0.v.ravel()]), cfg)
    for target in times:
        for t, y in loop.advance_to(target):
            q = y[:4 * n].reshape(n, 4)
            v = y[4 * n:].reshape(n, 4)
            if cfg.project_every_step:
                q, v = _project_arrays(q, v, kappa, g)
                loop.y = np.concatenate([q.ravel(), v.ravel()])
            margin, i, j = kernels.pair_margin(q, kappa, g)
            if margin < cfg.singularity_margin_stop:
                raise SingularityApproach(i, j, t, margin, samples)
        emit(target, loop.y[:4 * n].reshape(n, 4).copy(),
             loop.y[4 * n:].reshape(n, 4).copy())
    return samples


def variational_flow(q0, v0, masses, kappa, g, t0, t_end,
                     config: IntegratorConfig | None = None):
    """Propagate state and first variational flow in d ambient dimensions.

    Works for the full 4-coordinate system or for motion restricted to an
    invariant great 2-surface (3 coordinates).  No projection is applied, so
    the returned matrix is the exact linearization of the integrated flow.

    Returns (q1, v1, phi) with phi of shape (2nd, 2nd).
    """
    cfg = config or IntegratorConfig()
    q0 = np.asarray(q0, dtype=float)
    n, d = q0.shape
    dim = 2 * n * d
    masses = np.asarray(masses, dtype=float)
    g = np.asarray(g, dtype=float)

    def f(t, Y):
        return kernels.variational_rhs(Y, n, d, masses, kappa, g)

    Y0 = np.concatenate([q0.ravel(), np.asarray(v0, float).ravel(),
                         np.eye(dim).ravel()])
    loop = _AdaptiveLoop(f, t0, Y0, cfg)
    for _ in loop.advance_to(float(t_end)):
        pass
    y = loop.y
    q1 = y[:n * d].reshape(n, d)
    v1 = y[n * d:dim].reshape(n, d)
    phi = y[dim:].reshape(dim, dim)
    return q1, v1, phi


def integrate_variational(state0: PhaseState, t_end,
                          config: IntegratorConfig | None = None):
    """Integrate state and 8n x 8n transition matrix jointly.

    Returns (final PhaseState, TransitionMatrix).  The right-hand side used
    here is the scale-invariant form, whose Jacobian is the correct
    linearization; on the manifold it coincides with the plain form.
    """
    from .dynamics import detect_singularity
    verdict = detect_singularity(state0.q, state0.curvature)
    if verdict:
        raise SingularityError(verdict.kind, verdict.i, verdict.j, verdict.margin)
    t_end = float(t_end)
    if t_end == state0.t:
        dim = 8 * state0.n
        return state0, TransitionMatrix(np.eye(dim), state0.t, t_end)
    if t_end < state0.t:
        raise DomainError("t_end must not precede the state's time")
    q1, v1, phi = variational_flow(state0.q, state0.v, state0.masses,
                                   state0.kappa, state0.metric_signs(),
                                   state0.t, t_end, config)
    # the flow conserves the constraints only to integration accuracy; a
    # final projection makes the returned state a valid PhaseState
    q1, v1 = _project_arrays(q1, v1, state0.kappa, state0.metric_signs())
    state = PhaseState(state0.curvature, state0.bodies, q1, v1, t_end)
    return state, TransitionMatrix(phi, state0.t, t_end)


def constraint_tangent_basis(q, v, kappa, g):
    """Orthonormal basis of the constraint-tangent subspace at (q, v).

    The constraints are <q_i,q_i> = 1/kappa and <q_i,v_i> = 0; their
    differentials span the normal space, and the variational flow maps the
    tangent space to itself exactly.  Returns a (2nd, 2nd-2n) matrix with
    orthonormal columns.
    """
    q = np.asarray(q, dtype=float)
    n, d = q.shape
    nd = n * d
    rows = np.zeros((2 * n, 2 * nd))
    for i in range(n):
        gq = g * q[i]
        gv = g * v[i]
        rows[2 * i, i * d:(i + 1) * d] = 2.0 * gq
        rows[2 * i + 1, i * d:(i + 1) * d] = gv
        rows[2 * i + 1, nd + i * d:nd + (i + 1) * d] = gq
    _, _, vt = np.linalg.svd(rows)
    return vt[2 * n:].T
