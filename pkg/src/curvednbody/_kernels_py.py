"""Pure-numpy reference implementation of the hot kernels.

The compiled extension (_kernels.pyx) mirrors these signatures exactly; the
dispatch module picks whichever is available.  Arrays of positions/velocities
have one body per row.  `g` holds the signs of the ambient inner product
(``(1,1,1,sigma)``, or ``(1,1,1)`` for motion restricted to a great sphere of
positive curvature), so every function works for any ambient dimension.

The force sums come in two algebraically equivalent on-manifold forms: the
simplified one used in the second-order equations of motion, and the scale-
invariant one whose derivative is the correct Hessian for the variational
equations (``homogeneous=True``).
"""

import numpy as np


def _pair_products(q, kappa, g):
    """kappa * <q_i, q_j>_g for all pairs, shape (n, n)."""
    return kappa * ((q * g) @ q.T)


def potential(q, m, kappa, g):
    """Force function: sum over pairs of m_i m_j |kappa|^(1/2) * cos-like /
    sin-like factors, in the scale-invariant Cartesian form."""
    p = _pair_products(q, kappa, g)
    s = np.diag(p).copy()
    sigma = 1.0 if kappa > 0 else -1.0
    iu, ju = np.triu_indices(q.shape[0], k=1)
    pij = p[iu, ju]
    den2 = sigma * s[iu] * s[ju] - sigma * pij * pij
    num = m[iu] * m[ju] * np.sqrt(abs(kappa)) * pij
    return float(np.sum(num / np.sqrt(den2)))


def accelerations(q, v, m, kappa, g, homogeneous=False):
    """Acceleration of every body: pair interaction sum plus the constraint
    term -kappa <v,v> q."""
    n = q.shape[0]
    sigma = 1.0 if kappa > 0 else -1.0
    k32 = abs(kappa) ** 1.5
    p = _pair_products(q, kappa, g)
    vv = kappa * ((v * g) * v).sum(axis=1)
    if n == 1:
        return -vv[:, None] * q
    if homogeneous:
        s = np.diag(p).copy()
        den = sigma * np.outer(s, s) - sigma * p * p
    else:
        s = np.ones(n)
        den = sigma - sigma * p * p
    np.fill_diagonal(den, 1.0)
    b = k32 * (m * s)[None, :] / den ** 1.5   # b[i, j] multiplies the j-term
    np.fill_diagonal(b, 0.0)
    interact = s[:, None] * (b @ q) - (b * p).sum(axis=1)[:, None] * q
    return interact - vv[:, None] * q


def rhs(y, n, d, m, kappa, g, homogeneous=False):
    """Time derivative of the flattened state [q.ravel(), v.ravel()]."""
    nd = n * d
    q = y[:nd].reshape(n, d)
    v = y[nd:].reshape(n, d)
    out = np.empty_like(y)
    out[:nd] = y[nd:]
    out[nd:] = accelerations(q, v, m, kappa, g, homogeneous).ravel()
    return out


def jacobian(q, v, m, kappa, g):
    """Jacobian of the scale-invariant right-hand side, shape (2nd, 2nd).

    Block structure [[0, I], [dF/dq, dF/dv]] with F the acceleration.
    """
    n, d = q.shape
    nd = n * d
    sigma = 1.0 if kappa > 0 else -1.0
    k32 = abs(kappa) ** 1.5
    gq = q * g                       # rows g*q_i
    p = kappa * (gq @ q.T)
    s = np.diag(p).copy()
    vv = kappa * ((v * g) * v).sum(axis=1)

    out = np.zeros((2 * nd, 2 * nd))
    out[:nd, nd:] = np.eye(nd)

    dFdq = out[nd:, :nd]
    dFdv = out[nd:, nd:]
    eye = np.eye(d)
    for i in range(n):
        sl_i = slice(i * d, (i + 1) * d)
        dFdq[sl_i, sl_i] -= vv[i] * eye
        dFdv[sl_i, sl_i] = -2.0 * kappa * np.outer(q[i], g * v[i])
        for j in range(n):
            if j == i:
                continue
            u = p[i, j]
            den = sigma * s[i] * s[j] - sigma * u * u
            c = k32 * m[j]
            d32 = den ** -1.5
            d52 = den ** -2.5
            nvec = s[i] * q[j] - u * q[i]
            # d/dq_i of the (i,j) interaction term
            ddi = c * s[j] * (
                d32 * (2.0 * kappa * np.outer(q[j], gq[i])
                       - kappa * np.outer(q[i], gq[j]) - u * eye)
                - 3.0 * sigma * kappa * d52
                * np.outer(nvec, s[j] * gq[i] - u * gq[j]))
            # d/dq_j of the same term
            ddj = c * (
                2.0 * kappa * d32 * np.outer(nvec, gq[j])
                + s[j] * d32 * (s[i] * eye - kappa * np.outer(q[i], gq[i]))
                - 3.0 * sigma * kappa * s[j] * d52
                * np.outer(nvec, s[i] * gq[j] - u * gq[i]))
            dFdq[sl_i, sl_i] += ddi
            dFdq[sl_i, j * d:(j + 1) * d] += ddj
    return out


def variational_rhs(Y, n, d, m, kappa, g):
    """Derivative of [state, Phi.ravel()]: the state moves under the
    scale-invariant right-hand side, Phi under its Jacobian."""
    nd = n * d
    dim = 2 * nd
    y = Y[:dim]
    phi = Y[dim:].reshape(dim, dim)
    q = y[:nd].reshape(n, d)
    v = y[nd:].reshape(n, d)
    out = np.empty_like(Y)
    out[:dim] = rhs(y, n, d, m, kappa, g, homogeneous=True)
    out[dim:] = (jacobian(q, v, m, kappa, g) @ phi).ravel()
    return out


def pair_margin(q, kappa, g):
    """Smallest |1 - (kappa <q_i,q_j>)^2| over pairs and its argmin pair."""
    n = q.shape[0]
    if n < 2:
        return np.inf, -1, -1
    p = _pair_products(q, kappa, g)
    marg = np.abs(1.0 - p * p)
    iu, ju = np.triu_indices(n, k=1)
    idx = np.argmin(marg[iu, ju])
    return float(marg[iu[idx], ju[idx]]), int(iu[idx]), int(ju[idx])
