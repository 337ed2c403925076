"""Hot loops, compiled when the Cython extension is available.

Set ``PHOTMOL_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("PHOTMOL_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

hilbert_remainder = _impl.hilbert_remainder
upwind_advect = _impl.upwind_advect
band_sums = _impl.band_sums


def available_backends():
    """Map backend name to module for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out

__all__ = ["BACKEND", "available_backends", "band_sums", "hilbert_remainder", "upwind_advect"]
