"""Hot numeric kernels with a compiled core and a pure-NumPy fallback.

The compiled extension (``forestdetect.kernels._core``, built with Cython) is
preferred.  Set the environment variable ``FORESTDETECT_PURE=1`` to force the
NumPy fallback, e.g. for benchmarking or debugging.
"""
import os

from . import _fallback

if os.environ.get("FORESTDETECT_PURE"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "pure"

ecf_terms = _impl.ecf_terms
cms_standard = _impl.cms_standard
accuracy_curve = _impl.accuracy_curve


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return BACKEND
