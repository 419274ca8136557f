"""Compiled and pure kernels must agree to roundoff on identical inputs."""

import numpy as np
import pytest

from curvednbody import _kernels_py, kernels
from curvednbody.geometry import Curvature
from curvednbody.sampling import random_state

compiled = pytest.importorskip("curvednbody._kernels")


def cases():
    rng = np.random.default_rng(71)
    for kappa in (1.0, -1.0, 0.5, -2.0):
        for n in (2, 3, 5):
            state = random_state(n, Curvature(kappa), rng)
            yield state.q, state.v, state.masses, kappa


def reduced_cases():
    rng = np.random.default_rng(72)
    state = random_state(3, Curvature(1.0), rng)
    q = state.q[:, :3].copy()
    q /= np.linalg.norm(q, axis=1)[:, None]
    v = state.v[:, :3].copy()
    v -= (q * v).sum(axis=1)[:, None] * q
    yield q, v, state.masses, 1.0


def all_cases():
    yield from cases()
    yield from reduced_cases()


class TestAgreement:
    def test_potential(self):
        for q, v, m, kappa in cases():
            g = kernels.metric_signs(kappa)
            assert compiled.potential(q, m, kappa, g) == pytest.approx(
                _kernels_py.potential(q, m, kappa, g), rel=1e-13)

    def test_accelerations(self):
        for q, v, m, kappa in all_cases():
            g = kernels.metric_signs(kappa, q.shape[1])
            for hom in (False, True):
                np.testing.assert_allclose(
                    compiled.accelerations(q, v, m, kappa, g, hom),
                    _kernels_py.accelerations(q, v, m, kappa, g, hom),
                    rtol=1e-12, atol=1e-12)

    def test_rhs(self):
        for q, v, m, kappa in all_cases():
            n, d = q.shape
            g = kernels.metric_signs(kappa, d)
            y = np.concatenate([q.ravel(), v.ravel()])
            np.testing.assert_allclose(
                compiled.rhs(y, n, d, m, kappa, g),
                _kernels_py.rhs(y, n, d, m, kappa, g), rtol=1e-12, atol=1e-12)

    def test_jacobian(self):
        for q, v, m, kappa in all_cases():
            g = kernels.metric_signs(kappa, q.shape[1])
            np.testing.assert_allclose(
                compiled.jacobian(q, v, m, kappa, g),
                _kernels_py.jacobian(q, v, m, kappa, g),
                rtol=1e-11, atol=1e-11)

    def test_variational_rhs(self):
        rng = np.random.default_rng(73)
        for q, v, m, kappa in all_cases():
            n, d = q.shape
            dim = 2 * n * d
            g = kernels.metric_signs(kappa, d)
            phi = np.eye(dim) + 0.01 * rng.standard_normal((dim, dim))
            Y = np.concatenate([q.ravel(), v.ravel(), phi.ravel()])
            np.testing.assert_allclose(
                compiled.variational_rhs(Y, n, d, m, kappa, g),
                _kernels_py.variational_rhs(Y, n, d, m, kappa, g),
                rtol=1e-11, atol=1e-11)

    def test_pair_margin(self):
        for q, v, m, kappa in all_cases():
            g = kernels.metric_signs(kappa, q.shape[1])
            got = compiled.pair_margin(q, kappa, g)
            want = _kernels_py.pair_margin(q, kappa, g)
            assert got[0] == pytest.approx(want[0], rel=1e-13)
            assert got[1:] == want[1:]

    def test_single_body_margin(self):
        g = kernels.metric_signs(1.0)
        q = np.array([[1.0, 0.0, 0.0, 0.0]])
        assert compiled.pair_margin(q, 1.0, g)[0] == np.inf
