"""Kernel dispatch: the compiled extension when it was built, numpy otherwise.

Set ``XLINK_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("XLINK_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

interferer_mask = _impl.interferer_mask
coplanar_mask = _impl.coplanar_mask
coplanar_any = _impl.coplanar_any

__all__ = ["BACKEND", "interferer_mask", "coplanar_mask", "coplanar_any"]
