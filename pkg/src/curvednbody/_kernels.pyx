# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the hot kernels; mirrors _kernels_py exactly.

All loops run over (n bodies) x (d ambient coordinates) with an explicit
metric-sign vector g, so both the full 4-coordinate system and the
great-2-surface restriction (d = 3) compile to the same code.
"""

import numpy as np

cimport cython
from libc.math cimport fabs, sqrt


cdef inline double _dot(const double[:, ::1] a, const double[:, ::1] b,
                        const double[::1] g, Py_ssize_t i, Py_ssize_t j,
                        Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t c
    for c in range(d):
        s += g[c] * a[i, c] * b[j, c]
    return s


def potential(const double[:, ::1] q, const double[::1] m, double kappa,
              const double[::1] g):
    cdef Py_ssize_t n = q.shape[0], d = q.shape[1]
    cdef double sigma = 1.0 if kappa > 0 else -1.0
    cdef double rk = sqrt(fabs(kappa))
    cdef double total = 0.0, si, sj, p
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            si = kappa * _dot(q, q, g, i, i, d)
            for j in range(i + 1, n):
                sj = kappa * _dot(q, q, g, j, j, d)
                p = kappa * _dot(q, q, g, i, j, d)
                total += m[i] * m[j] * rk * p / sqrt(sigma * si * sj - sigma * p * p)
    return total


cdef void _accelerations(const double[:, ::1] q, const double[:, ::1] v,
                         const double[::1] m, double kappa,
                         const double[::1] g, bint homogeneous,
                         double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = q.shape[0], d = q.shape[1]
    cdef double sigma = 1.0 if kappa > 0 else -1.0
    cdef double k32 = fabs(kappa) * sqrt(fabs(kappa))
    cdef Py_ssize_t i, j, c
    cdef double p, si, sj, den, b, vv
    for i in range(n):
        vv = kappa * _dot(v, v, g, i, i, d)
        si = kappa * _dot(q, q, g, i, i, d) if homogeneous else 1.0
        for c in range(d):
            out[i, c] = -vv * q[i, c]
        for j in range(n):
            if j == i:
                continue
            p = kappa * _dot(q, q, g, i, j, d)
            sj = kappa * _dot(q, q, g, j, j, d) if homogeneous else 1.0
            den = sigma * si * sj - sigma * p * p
            den = den * sqrt(den)
            b = k32 * m[j] * sj / den
            for c in range(d):
                out[i, c] += b * (si * q[j, c] - p * q[i, c])


def accelerations(const double[:, ::1] q, const double[:, ::1] v,
                  const double[::1] m, double kappa, const double[::1] g,
                  bint homogeneous=False):
    out = np.empty((q.shape[0], q.shape[1]))
    cdef double[:, ::1] mv = out
    with nogil:
        _accelerations(q, v, m, kappa, g, homogeneous, mv)
    return out


def rhs(const double[::1] y, Py_ssize_t n, Py_ssize_t d, const double[::1] m,
        double kappa, const double[::1] g, bint homogeneous=False):
    cdef Py_ssize_t nd = n * d
    out = np.empty(2 * nd)
    cdef double[::1] ov = out
    cdef const double[:, ::1] q = np.asarray(y[:nd]).reshape(n, d)
    cdef const double[:, ::1] v = np.asarray(y[nd:2 * nd]).reshape(n, d)
    acc = np.empty((n, d))
    cdef double[:, ::1] av = acc
    cdef Py_ssize_t k
    with nogil:
        for k in range(nd):
            ov[k] = y[nd + k]
        _accelerations(q, v, m, kappa, g, homogeneous, av)
        for k in range(nd):
            ov[nd + k] = av[k // d, k % d]
    return out


cdef void _jacobian(const double[:, ::1] q, const double[:, ::1] v,
                    const double[::1] m, double kappa, const double[::1] g,
                    double[:, ::1] out) noexcept nogil:
    """Jacobian of the scale-invariant right-hand side, blocks
    [[0, I], [dF/dq, dF/dv]]; `out` must be zero-initialized."""
    cdef Py_ssize_t n = q.shape[0], d = q.shape[1]
    cdef Py_ssize_t nd = n * d
    cdef double sigma = 1.0 if kappa > 0 else -1.0
    cdef double k32 = fabs(kappa) * sqrt(fabs(kappa))
    cdef Py_ssize_t i, j, a, b
    cdef double u, si, sj, den, d32, d52, vv, c0
    cdef double nv_a, row_i, row_j

    for a in range(nd):
        out[a, nd + a] = 1.0

    for i in range(n):
        vv = kappa * _dot(v, v, g, i, i, d)
        si = kappa * _dot(q, q, g, i, i, d)
        for a in range(d):
            out[nd + i * d + a, i * d + a] -= vv
            for b in range(d):
                out[nd + i * d + a, nd + i * d + b] = \
                    -2.0 * kappa * q[i, a] * g[b] * v[i, b]
        for j in range(n):
            if j == i:
                continue
            u = kappa * _dot(q, q, g, i, j, d)
            sj = kappa * _dot(q, q, g, j, j, d)
            den = sigma * si * sj - sigma * u * u
            d32 = 1.0 / (den * sqrt(den))
            d52 = d32 / den
            c0 = k32 * m[j]
            for a in range(d):
                nv_a = si * q[j, a] - u * q[i, a]
                for b in range(d):
                    # d/dq_i of the (i,j) interaction term
                    row_i = c0 * sj * (
                        d32 * (2.0 * kappa * q[j, a] * g[b] * q[i, b]
                               - kappa * q[i, a] * g[b] * q[j, b])
                        - 3.0 * sigma * kappa * d52 * nv_a
                        * (sj * g[b] * q[i, b] - u * g[b] * q[j, b]))
                    if a == b:
                        row_i -= c0 * sj * d32 * u
                    # d/dq_j of the same term
                    row_j = c0 * (
                        2.0 * kappa * d32 * nv_a * g[b] * q[j, b]
                        - sj * d32 * kappa * q[i, a] * g[b] * q[i, b]
                        - 3.0 * sigma * kappa * sj * d52 * nv_a
                        * (si * g[b] * q[j, b] - u * g[b] * q[i, b]))
                    if a == b:
                        row_j += c0 * sj * d32 * si
                    out[nd + i * d + a, i * d + b] += row_i
                    out[nd + i * d + a, j * d + b] += row_j


def jacobian(const double[:, ::1] q, const double[:, ::1] v,
             const double[::1] m, double kappa, const double[::1] g):
    cdef Py_ssize_t nd = q.shape[0] * q.shape[1]
    out = np.zeros((2 * nd, 2 * nd))
    cdef double[:, ::1] mv = out
    with nogil:
        _jacobian(q, v, m, kappa, g, mv)
    return out


def variational_rhs(const double[::1] Y, Py_ssize_t n, Py_ssize_t d,
                    const double[::1] m, double kappa, const double[::1] g):
    cdef Py_ssize_t nd = n * d
    cdef Py_ssize_t dim = 2 * nd
    cdef const double[:, ::1] q = np.asarray(Y[:nd]).reshape(n, d)
    cdef const double[:, ::1] v = np.asarray(Y[nd:dim]).reshape(n, d)
    out = np.empty(dim + dim * dim)
    cdef double[::1] ov = out
    acc = np.empty((n, d))
    cdef double[:, ::1] av = acc
    jac = np.zeros((dim, dim))
    cdef double[:, ::1] jv = jac
    cdef Py_ssize_t k, r, c, s
    cdef double tot
    with nogil:
        for k in range(nd):
            ov[k] = Y[nd + k]
        _accelerations(q, v, m, kappa, g, True, av)
        for k in range(nd):
            ov[nd + k] = av[k // d, k % d]
        _jacobian(q, v, m, kappa, g, jv)
        # Phi_dot = J @ Phi; J's top block rows are [0, I]
        for r in range(nd):
            for c in range(dim):
                ov[dim + r * dim + c] = Y[dim + (nd + r) * dim + c]
        for r in range(nd, dim):
            for c in range(dim):
                tot = 0.0
                for s in range(dim):
                    tot += jv[r, s] * Y[dim + s * dim + c]
                ov[dim + r * dim + c] = tot
    return out


def pair_margin(const double[:, ::1] q, double kappa, const double[::1] g):
    cdef Py_ssize_t n = q.shape[0], d = q.shape[1]
    cdef Py_ssize_t i, j, bi = -1, bj = -1
    cdef double best = np.inf, p, marg
    if n < 2:
        return np.inf, -1, -1
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                p = kappa * _dot(q, q, g, i, j, d)
                marg = fabs(1.0 - p * p)
                if marg < best:
                    best = marg
                    bi = i
                    bj = j
    return best, int(bi), int(bj)
