"""Kernel dispatch: compiled extension if built, pure numpy otherwise.

Set CURVEDNBODY_PURE=1 to force the pure implementation (used by the
benchmark and by tests that compare the two).
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("CURVEDNBODY_PURE", "0") == "0":
    try:
        from . import _kernels as _impl
        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False
else:
    _impl = _kernels_py
    HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "pure"


def _c(a):
    return np.ascontiguousarray(a, dtype=float)


def metric_signs(kappa, d=4):
    g = np.ones(d)
    g[-1] = 1.0 if kappa > 0 else -1.0
    return g


def potential(q, m, kappa, g):
    return _impl.potential(_c(q), _c(m), float(kappa), _c(g))


def accelerations(q, v, m, kappa, g, homogeneous=False):
    return np.asarray(_impl.accelerations(_c(q), _c(v), _c(m), float(kappa),
                                          _c(g), homogeneous))


def rhs(y, n, d, m, kappa, g, homogeneous=False):
    return np.asarray(_impl.rhs(_c(y), int(n), int(d), _c(m), float(kappa),
                                _c(g), homogeneous))


def jacobian(q, v, m, kappa, g):
    return np.asarray(_impl.jacobian(_c(q), _c(v), _c(m), float(kappa), _c(g)))


def variational_rhs(Y, n, d, m, kappa, g):
    return np.asarray(_impl.variational_rhs(_c(Y), int(n), int(d), _c(m),
                                            float(kappa), _c(g)))


def pair_margin(q, kappa, g):
    return _impl.pair_margin(_c(q), float(kappa), _c(g))
