"""Backend selection for the stochastic scan kernel.

The compiled Cython extension is used when present; the pure-numpy
fallback otherwise.  Set NADSIM_PURE_PYTHON=1 to force the fallback
(useful for the backend-comparison benchmark and tests).
"""

import os

from . import _scan_py

scan_chunk = _scan_py.scan_chunk
_BACKEND = "python"

if not os.environ.get("NADSIM_PURE_PYTHON"):
    try:
        from . import _scan as _compiled
    except ImportError:
        pass
    else:
        scan_chunk = _compiled.scan_chunk
        _BACKEND = "compiled"


def backend():
    """Name of the active backend: 'compiled' or 'python'."""
    return _BACKEND


def available_backends():
    """Mapping of backend name to its scan_chunk implementation."""
    out = {"python": _scan_py.scan_chunk}
    try:
        from . import _scan as _compiled
    except ImportError:
        pass
    else:
        out["compiled"] = _compiled.scan_chunk
    return out
