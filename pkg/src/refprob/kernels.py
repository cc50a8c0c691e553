"""Hot-loop kernels, compiled when available.

The Cython extension ``refprob._kernels`` is used if it was built; otherwise
the pure-Python implementations in ``refprob._fallback`` are used. Setting
``REFPROB_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _fallback

if os.environ.get("REFPROB_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "cython" if _impl is not _fallback else "python"

jacobi_eigh = _impl.jacobi_eigh
triple_from_p = _impl.triple_from_p

__all__ = ["BACKEND", "jacobi_eigh", "triple_from_p"]
