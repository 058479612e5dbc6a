"""Backend selection for the finite-difference kernels.

The compiled extension is used when it was built; otherwise, or when
``LEFSOLVER_PURE_PYTHON`` is set, the NumPy/SciPy versions are used.
"""

import os

import numpy as np

from . import _kernels_py

_compiled = None
if not os.environ.get("LEFSOLVER_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"


def backends():
    """Available kernel implementations keyed by name."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def tridiag_solve(lower, diag, upper, rhs):
    return _impl.tridiag_solve(_f64(lower), _f64(diag), _f64(upper), _f64(rhs))


def radial_laplacian(r, u, N):
    return _impl.radial_laplacian(_f64(r), _f64(u), int(N))


def central_gradient(r, u):
    return _impl.central_gradient(_f64(r), _f64(u))
