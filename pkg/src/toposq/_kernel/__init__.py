"""Eigensolver kernel selection.

Prefers the compiled extension when it built; falls back to the plain-Python
kernel otherwise.  Set ``TOPOSQ_PURE_PYTHON=1`` to force the fallback (used
by the benchmark and the backend-parity tests).
"""

import os

from . import jacobi_py

BACKEND = "python"
_impl = jacobi_py

if not os.environ.get("TOPOSQ_PURE_PYTHON"):
    try:
        from . import _jacobi as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        _impl = _compiled

jacobi_eigh = _impl.jacobi_eigh


def available_backends():
    """Name -> solver mapping for every backend importable right now."""
    backends = {"python": jacobi_py.jacobi_eigh}
    try:
        from . import _jacobi
    except ImportError:
        pass
    else:
        backends["cython"] = _jacobi.jacobi_eigh
    return backends
