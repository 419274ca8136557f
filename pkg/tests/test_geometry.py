import numpy as np
import pytest

from curvednbody.errors import DomainError
from curvednbody.geometry import (
    Curvature,
    ManifoldPoint,
    clifford_point,
    csn,
    ctn,
    cylinder_point,
    distance,
    extended_distance,
    hopf_map,
    inner,
    project_to_manifold,
    project_to_tangent,
    sn,
    stereographic,
    stereographic_inverse,
    tn,
)

S3 = Curvature(1.0)
H3 = Curvature(-1.0)


def random_point(curv, rng):
    """Uniform-ish random point of the curvature-curv manifold."""
    if curv.kappa > 0:
        v = rng.standard_normal(4)
        return ManifoldPoint(v / np.linalg.norm(v) / np.sqrt(curv.kappa), curv)
    wxy = rng.standard_normal(3)
    z = np.sqrt(wxy @ wxy - curv.inv)
    return ManifoldPoint(np.array([*wxy, z]), curv)


class TestCurvature:
    def test_sign(self):
        assert S3.sigma == 1
        assert H3.sigma == -1
        assert Curvature(2.5).sigma == 1

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            Curvature(0.0)
        with pytest.raises(DomainError):
            Curvature(float("nan"))


class TestInner:
    def test_unit_basis(self):
        e_w = np.array([1.0, 0, 0, 0])
        assert inner(e_w, e_w, S3) == 1.0

    def test_sigma_on_z(self):
        e_z = np.array([0.0, 0, 0, 1])
        assert inner(e_z, e_z, H3) == -1.0
        # (0,0,0,1) satisfies kappa*<v,v> = 1, so it is a hyperbolic point
        ManifoldPoint(e_z, H3)

    def test_bilinear_symmetric(self):
        rng = np.random.default_rng(1)
        for curv in (S3, H3):
            a, b, c = rng.standard_normal((3, 4))
            lam = 1.7
            assert inner(a, b, curv) == pytest.approx(inner(b, a, curv), rel=1e-15)
            assert inner(lam * a + c, b, curv) == pytest.approx(
                lam * inner(a, b, curv) + inner(c, b, curv), rel=1e-13)


class TestManifoldPoint:
    def test_off_manifold_rejected(self):
        with pytest.raises(DomainError):
            ManifoldPoint(np.array([1.0, 0, 0, 1e-6]), S3)

    def test_lower_sheet_rejected(self):
        with pytest.raises(DomainError):
            ManifoldPoint(np.array([0.0, 0, 0, -1.0]), H3)

    def test_hyperbolic_inner_at_least_one(self):
        # kappa <q_i, q_j> >= 1 for any two hyperbolic points, equality iff equal
        rng = np.random.default_rng(2)
        for _ in range(200):
            a = random_point(H3, rng)
            b = random_point(H3, rng)
            assert H3.kappa * inner(a.v, b.v, H3) >= 1.0 - 1e-12
        a = random_point(H3, rng)
        assert H3.kappa * inner(a.v, a.v, H3) == pytest.approx(1.0, abs=1e-12)


class TestDistance:
    def test_coincident(self):
        p = ManifoldPoint(np.array([0.5, 0.5, 0.5, 0.5]), S3)
        assert distance(p, p) == 0.0

    def test_antipodal(self):
        a = ManifoldPoint(np.array([1.0, 0, 0, 0]), S3)
        b = ManifoldPoint(np.array([-1.0, 0, 0, 0]), S3)
        assert distance(a, b) == pytest.approx(np.pi, abs=1e-15)

    def test_complementary_circles_constant(self):
        # points of the two orthogonal-plane circles are pi/2 apart regardless
        # of where they sit on their circles
        rng = np.random.default_rng(3)
        for _ in range(50):
            u, v = rng.uniform(0, 2 * np.pi, 2)
            a = ManifoldPoint(np.array([np.cos(u), np.sin(u), 0, 0]), S3)
            b = ManifoldPoint(np.array([0, 0, np.cos(v), np.sin(v)]), S3)
            assert distance(a, b) == pytest.approx(np.pi / 2, abs=1e-14)

    def test_symmetric(self):
        rng = np.random.default_rng(4)
        for curv in (S3, H3, Curvature(0.5), Curvature(-2.0)):
            a = random_point(curv, rng)
            b = random_point(curv, rng)
            assert distance(a, b) == pytest.approx(distance(b, a), rel=1e-14)

    def test_curvature_mismatch(self):
        a = ManifoldPoint(np.array([1.0, 0, 0, 0]), S3)
        b = random_point(H3, np.random.default_rng(0))
        with pytest.raises(DomainError):
            distance(a, b)


class TestExtendedDistance:
    def test_matches_distance_on_manifold(self):
        rng = np.random.default_rng(5)
        for curv in (S3, H3):
            for _ in range(100):
                a = random_point(curv, rng)
                b = random_point(curv, rng)
                assert abs(extended_distance(a.v, b.v, curv) -
                           distance(a, b)) < 1e-12

    def test_quarter_turn(self):
        d = extended_distance(np.array([2.0, 0, 0, 0]), np.array([0.0, 2, 0, 0]), S3)
        assert d == pytest.approx(np.pi / 2, abs=1e-14)

    def test_scale_invariant(self):
        rng = np.random.default_rng(6)
        for curv in (S3, H3):
            a = random_point(curv, rng).v
            b = random_point(curv, rng).v
            assert extended_distance(3.0 * a, b, curv) == pytest.approx(
                extended_distance(a, b, curv), rel=1e-13)

    def test_null_vector_rejected(self):
        null = np.array([0.0, 0, 1, 1])  # <v,v> = 0 under the Lorentz product
        with pytest.raises(DomainError):
            extended_distance(null, np.array([0.0, 0, 0, 1]), H3)
        with pytest.raises(DomainError):
            extended_distance(np.array([1.0, 0, 0, 0]), np.array([1.0, 0, 0, 0]), H3)


class TestTrig:
    def test_circular_branch(self):
        assert sn(1.0, np.pi / 2) == pytest.approx(1.0, abs=1e-15)
        assert csn(1.0, np.pi / 2) == pytest.approx(0.0, abs=1e-15)

    def test_hyperbolic_branch(self):
        assert sn(-1.0, 1.0) == pytest.approx(np.sinh(1.0), rel=1e-15)
        assert csn(-1.0, 1.0) == pytest.approx(np.cosh(1.0), rel=1e-15)

    def test_fundamental_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            kappa = rng.uniform(-3, 3)
            if abs(kappa) < 1e-3:
                continue
            x = rng.uniform(-2, 2)
            assert kappa * sn(kappa, x) ** 2 + csn(kappa, x) ** 2 == pytest.approx(
                1.0, abs=1e-12)

    def test_cotangent_pole(self):
        with pytest.raises(DomainError):
            ctn(1.0, 0.0)
        with pytest.raises(DomainError):
            tn(1.0, np.pi / 2)

    def test_array_input(self):
        x = np.linspace(0.1, 1.0, 5)
        np.testing.assert_allclose(sn(-2.0, x), np.sinh(np.sqrt(2) * x) / np.sqrt(2),
                                   rtol=1e-14)
        np.testing.assert_allclose(ctn(1.0, x), np.cos(x) / np.sin(x), rtol=1e-13)


class TestStereographic:
    def test_south_pole(self):
        p = ManifoldPoint(np.array([0.0, 0, 0, -1.0]), S3)
        np.testing.assert_allclose(stereographic(p), np.zeros(3), atol=1e-15)

    def test_north_pole_rejected(self):
        p = ManifoldPoint(np.array([0.0, 0, 0, 1.0]), S3)
        with pytest.raises(DomainError):
            stereographic(p)

    def test_round_trip(self):
        rng = np.random.default_rng(8)
        for curv in (S3, H3, Curvature(0.25), Curvature(-0.5)):
            for _ in range(100):
                p = random_point(curv, rng)
                if curv.kappa > 0 and abs(curv.radius - p.v[3]) < 1e-6:
                    continue  # too close to the projection center
                q = stereographic_inverse(stereographic(p), curv)
                np.testing.assert_allclose(q.v, p.v, atol=1e-10)

    def test_hyperbolic_image_in_ball(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            p = random_point(H3, rng)
            assert np.linalg.norm(stereographic(p)) < 1.0


class TestHopfMap:
    def test_examples(self):
        np.testing.assert_allclose(
            hopf_map(ManifoldPoint(np.array([1.0, 0, 0, 0]), S3)), [1, 0, 0])
        np.testing.assert_allclose(
            hopf_map(ManifoldPoint(np.array([0.0, 0, 1.0, 0]), S3)), [-1, 0, 0])

    def test_image_norm(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            p = random_point(S3, rng)
            assert np.linalg.norm(hopf_map(p)) == pytest.approx(1.0, abs=1e-12)

    def test_negative_curvature_rejected(self):
        p = ManifoldPoint(np.array([0.0, 0, 0, 1.0]), H3)
        with pytest.raises(DomainError):
            hopf_map(p)


class TestCanonicalSurfaces:
    def test_degenerate_torus_is_circle(self):
        p = clifford_point(1.0, 0.0, 0.0, 0.3, S3)
        np.testing.assert_allclose(p.v, [1, 0, 0, 0], atol=1e-15)

    def test_torus_points_on_sphere(self):
        rng = np.random.default_rng(11)
        r = 1 / np.sqrt(2)
        for _ in range(20):
            theta, phi = rng.uniform(0, 2 * np.pi, 2)
            p = clifford_point(r, r, theta, phi, S3)
            assert np.linalg.norm(p.v) == pytest.approx(1.0, rel=1e-14)

    def test_torus_radius_constraint(self):
        with pytest.raises(DomainError):
            clifford_point(0.9, 0.9, 0.0, 0.0, S3)

    def test_degenerate_cylinder_is_geodesic(self):
        p = cylinder_point(0.0, 1.0, 0.0, 0.7, H3)
        np.testing.assert_allclose(p.v, [0, 0, np.sinh(0.7), np.cosh(0.7)],
                                   rtol=1e-15)

    def test_cylinder_points_on_hyperboloid(self):
        rng = np.random.default_rng(12)
        eta = np.sqrt(2.0)
        r = 1.0
        for _ in range(20):
            theta = rng.uniform(0, 2 * np.pi)
            xi = rng.uniform(-2, 2)
            cylinder_point(r, eta, theta, xi, H3)  # constructor validates

    def test_cylinder_radius_constraint(self):
        with pytest.raises(DomainError):
            cylinder_point(1.0, 1.0, 0.0, 0.0, H3)


class TestProjections:
    def test_rescaling(self):
        p = project_to_manifold(np.array([2.0, 0, 0, 0]), S3)
        np.testing.assert_allclose(p.v, [1, 0, 0, 0], rtol=1e-15)

    def test_idempotent(self):
        rng = np.random.default_rng(13)
        for curv in (S3, H3):
            for _ in range(50):
                v = random_point(curv, rng).v * rng.uniform(0.5, 2.0)
                p1 = project_to_manifold(v, curv)
                p2 = project_to_manifold(p1.v, curv)
                np.testing.assert_allclose(p2.v, p1.v, rtol=1e-14)

    def test_already_on_manifold_unchanged(self):
        rng = np.random.default_rng(14)
        p = random_point(S3, rng)
        np.testing.assert_allclose(project_to_manifold(p.v, S3).v, p.v, rtol=1e-15)

    def test_sign_incompatible_rejected(self):
        with pytest.raises(DomainError):
            project_to_manifold(np.array([1.0, 0, 0, 0]), H3)

    def test_tangent_orthogonality(self):
        rng = np.random.default_rng(15)
        for curv in (S3, H3):
            for _ in range(100):
                p = random_point(curv, rng)
                d = rng.standard_normal(4)
                t = project_to_tangent(p, d)
                assert abs(inner(p.v, t.d, curv)) < 1e-14 * max(
                    1.0, np.linalg.norm(d))

    def test_tangent_idempotent(self):
        rng = np.random.default_rng(16)
        p = random_point(H3, rng)
        d = rng.standard_normal(4)
        t1 = project_to_tangent(p, d)
        t2 = project_to_tangent(p, t1.d)
        np.testing.assert_allclose(t2.d, t1.d, atol=1e-15)
