"""Backend selection for the hot kernels.

The compiled Cython module is used when it was built; otherwise (or when the
environment variable FGVERIFY_PURE_PYTHON is set to a non-empty value) the
numpy fallback in ``_pykernels`` is used.  Both expose the same functions.
"""
import os

from . import _pykernels

_pure = _pykernels

if os.environ.get("FGVERIFY_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


qprod = _impl.qprod
theta_prod = _impl.theta_prod
jacobi_sum = _impl.jacobi_sum
self_orth_max = _impl.self_orth_max
cross_orth_max = _impl.cross_orth_max
