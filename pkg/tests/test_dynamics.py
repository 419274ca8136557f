import numpy as np
import pytest

from curvednbody.dynamics import (
    Body,
    PhaseState,
    acceleration,
    accelerations,
    detect_singularity,
    first_integrals,
    gradient,
    gradient_simplified,
    gradients,
    kinetic_energy,
    potential,
    potential_via_distance,
)
from curvednbody.equilibria import catalog, lagrangian_frequency
from curvednbody.errors import DomainError, SingularityError
from curvednbody.geometry import Curvature, ManifoldPoint, inner, project_to_tangent
from curvednbody.isometry import generate_trajectory, propagate
from curvednbody.sampling import random_positions, random_state

S3 = Curvature(1.0)
H3 = Curvature(-1.0)


def quarter_circle_pair():
    q = np.array([[1.0, 0, 0, 0], [0.0, 1, 0, 0]])
    return PhaseState.from_arrays(1.0, [1.0, 1.0], q, np.zeros((2, 4)))


class TestPhaseState:
    def test_invariants_enforced(self):
        q = np.array([[1.0, 0, 0, 0]])
        with pytest.raises(DomainError):
            PhaseState.from_arrays(1.0, [1.0], 1.001 * q, np.zeros((1, 4)))
        with pytest.raises(DomainError):
            PhaseState.from_arrays(1.0, [1.0], q, np.array([[1.0, 0, 0, 0]]))

    def test_positive_mass(self):
        with pytest.raises(DomainError):
            Body(-1.0)


class TestPotential:
    def test_quarter_circle_is_zero(self):
        # cotangent of a quarter circle vanishes
        assert potential(quarter_circle_pair()) == pytest.approx(0.0, abs=1e-15)

    def test_single_body(self):
        state = PhaseState.from_arrays(1.0, [1.0], np.array([[1.0, 0, 0, 0]]),
                                       np.zeros((1, 4)))
        assert potential(state) == 0.0

    def test_cartesian_equals_cotangent_of_distance(self):
        rng = np.random.default_rng(21)
        for curv in (S3, H3):
            for _ in range(100):
                state = random_state(rng.integers(2, 6), curv, rng)
                assert potential(state) == pytest.approx(
                    potential_via_distance(state), abs=1e-12)

    def test_collision_raises(self):
        q = np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]])
        state = PhaseState.from_arrays(1.0, [1.0, 1.0], q, np.zeros((2, 4)))
        with pytest.raises(SingularityError):
            potential(state)


class TestGradient:
    def test_zero_at_equilateral_great_circle(self):
        spec = catalog("lagrangian_s3", r=1.0, alpha=1.0)  # great circle
        state = generate_trajectory(spec, 0.0)
        for i in range(3):
            assert np.max(np.abs(gradient(state, i))) < 1e-11

    def test_euler_identity(self):
        # <q_i, grad_i U> = 0
        rng = np.random.default_rng(22)
        for curv in (S3, H3):
            for _ in range(100):
                state = random_state(rng.integers(2, 6), curv, rng)
                g = gradients(state)
                for i in range(state.n):
                    assert abs(inner(state.q[i], g[i], curv)) < 1e-11

    def test_two_forms_agree(self):
        rng = np.random.default_rng(23)
        for curv in (S3, H3):
            for _ in range(100):
                state = random_state(rng.integers(2, 6), curv, rng)
                for i in range(state.n):
                    np.testing.assert_allclose(gradient(state, i),
                                               gradient_simplified(state, i),
                                               atol=1e-11)

    def test_matches_finite_differences(self):
        # directional derivative of U along tangent directions
        rng = np.random.default_rng(24)
        eps = 1e-5
        for curv in (S3, H3):
            for _ in range(50):
                state = random_state(rng.integers(2, 5), curv, rng)
                i = int(rng.integers(0, state.n))
                d = project_to_tangent(ManifoldPoint(state.q[i], curv),
                                       rng.standard_normal(4)).d
                d = d / np.linalg.norm(d)
                qp = state.q.copy()
                qp[i] = state.q[i] + eps * d
                qm = state.q.copy()
                qm[i] = state.q[i] - eps * d
                up = potential(PhaseState(curv, state.bodies, qp, state.v,
                                          _skip_checks=True))
                um = potential(PhaseState(curv, state.bodies, qm, state.v,
                                          _skip_checks=True))
                fd = (up - um) / (2 * eps)
                an = inner(gradient(state, i), d, curv)
                assert fd == pytest.approx(an, rel=1e-6, abs=1e-9)


class TestAcceleration:
    def test_single_body_constraint_term(self):
        q = np.array([[1.0, 0, 0, 0]])
        v = np.array([[0.0, 0.7, 0, 0]])
        state = PhaseState.from_arrays(1.0, [1.0], q, v)
        expected = -1.0 * inner(v[0], v[0], S3) * q[0]
        np.testing.assert_allclose(acceleration(state, 0), expected, atol=1e-15)

    @pytest.mark.parametrize("name", [
        "lagrangian_s3", "scalene_great_circle", "six_mixed_fixed_rotating",
        "triangle_double", "tetrahedron_double", "pentatope_double",
        "six_double", "lagrangian_h3", "hyperbolic_h3",
        "elliptic_hyperbolic_h3",
    ])
    def test_matches_analytic_second_derivative(self, name):
        # the catalog orbits satisfy the equations of motion pointwise
        spec = catalog(name)
        for t in np.linspace(0.0, 3.0, 7):
            q, v, acc = propagate(spec.coords0, spec.kind, spec.alpha,
                                  spec.beta, spec.kappa, t)
            state = PhaseState.from_arrays(spec.kappa, spec.masses, q, v, t)
            np.testing.assert_allclose(accelerations(state), acc, atol=1e-10)

    def test_constraint_consistency(self):
        # <q_i, a_i> = -<v_i, v_i>
        rng = np.random.default_rng(25)
        for curv in (S3, H3):
            for _ in range(50):
                state = random_state(rng.integers(2, 6), curv, rng)
                acc = accelerations(state)
                for i in range(state.n):
                    assert inner(state.q[i], acc[i], curv) == pytest.approx(
                        -inner(state.v[i], state.v[i], curv), abs=1e-11)

    def test_great_sphere_invariance(self):
        # states confined to the w = 0 sphere produce exactly zero
        # w-acceleration
        rng = np.random.default_rng(26)
        for _ in range(20):
            state = random_state(4, S3, rng)
            q = state.q.copy()
            v = state.v.copy()
            q[:, 0] = 0.0
            v[:, 0] = 0.0
            norms = np.linalg.norm(q, axis=1)
            q /= norms[:, None]
            v -= inner(q, v, S3)[:, None] * q
            restricted = PhaseState.from_arrays(1.0, state.masses, q, v)
            acc = accelerations(restricted)
            assert np.all(acc[:, 0] == 0.0)


class TestFirstIntegrals:
    def test_lagrangian_momenta(self):
        # circle radius r: only the wx component survives, with value
        # 3 m alpha r^2 (equal to 3 m alpha / kappa on a great circle)
        for r in (0.5, 1.0):
            spec = catalog("lagrangian_s3", r=r, alpha=None if r < 1 else 2.0)
            state = generate_trajectory(spec, 0.0)
            ints = first_integrals(state)
            assert ints.c_wx == pytest.approx(3.0 * spec.alpha * r * r, abs=1e-12)
            for name in ("c_wy", "c_wz", "c_xy", "c_xz", "c_yz"):
                assert abs(getattr(ints, name)) < 1e-12

    def test_double_rotation_momenta(self):
        # equal-frequency triangle on a torus: four nonzero components
        r = 0.6
        rho = np.sqrt(1.0 - r * r)
        spec = catalog("triangle_double", r=r, alpha=0.9)
        state = generate_trajectory(spec, 0.0)
        ints = first_integrals(state)
        a = spec.alpha
        assert ints.c_wx == pytest.approx(3 * a * r * r, abs=1e-12)
        assert ints.c_wz == pytest.approx(3 * a * r * rho, abs=1e-12)
        assert ints.c_xy == pytest.approx(-3 * a * r * rho, abs=1e-12)
        assert ints.c_yz == pytest.approx(3 * a * rho * rho, abs=1e-12)
        assert abs(ints.c_wy) < 1e-12 and abs(ints.c_xz) < 1e-12

    def test_zero_velocity(self):
        rng = np.random.default_rng(27)
        q = random_positions(4, S3, rng)
        state = PhaseState.from_arrays(1.0, np.ones(4), q, np.zeros((4, 4)))
        ints = first_integrals(state)
        assert np.all(ints.angular() == 0.0)
        assert ints.h == pytest.approx(-potential(state), rel=1e-14)
        assert kinetic_energy(state) == 0.0

    def test_conserved_along_orbits(self):
        for name in ("lagrangian_s3", "six_double", "hyperbolic_h3",
                     "elliptic_hyperbolic_h3"):
            spec = catalog(name)
            values = []
            for t in np.linspace(0.0, 4.0, 20):
                ints = first_integrals(generate_trajectory(spec, t))
                values.append([ints.h, *ints.angular()])
            spread = np.ptp(np.asarray(values), axis=0)
            assert np.max(spread) < 1e-10


class TestSingularities:
    def test_collision(self):
        q = np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]])
        verdict = detect_singularity(q, S3)
        assert verdict.kind == "collision" and (verdict.i, verdict.j) == (0, 1)

    def test_antipodal(self):
        q = np.array([[1.0, 0, 0, 0], [-1.0, 0, 0, 0]])
        verdict = detect_singularity(q, S3)
        assert verdict.kind == "antipodal"

    def test_hyperbolic_pairs_never_antipodal(self):
        # kappa <q_i, q_j> >= 1 on the hyperboloid, so only collisions occur
        rng = np.random.default_rng(28)
        for _ in range(1000):
            q = random_positions(2, H3, rng, min_margin=0.0)
            p = H3.kappa * inner(q[0], q[1], H3)
            assert p >= 1.0 - 1e-12

    def test_margin_reported(self):
        q = np.array([[1.0, 0, 0, 0], [0.0, 1, 0, 0]])
        verdict = detect_singularity(q, S3)
        assert not verdict
        assert verdict.margin == pytest.approx(1.0)

    def test_single_body_no_pairs(self):
        verdict = detect_singularity(np.array([[1.0, 0, 0, 0]]), S3)
        assert verdict.kind == "none" and np.isinf(verdict.margin)
