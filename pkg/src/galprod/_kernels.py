"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``GALPROD_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the pure-Python module is used.
"""
import os

from . import _pykernels

_force_pure = os.environ.get("GALPROD_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

legendre_sum = _impl.legendre_sum
torsion_counts = _impl.torsion_counts
closure = _impl.closure

__all__ = ["BACKEND", "legendre_sum", "torsion_counts", "closure"]
