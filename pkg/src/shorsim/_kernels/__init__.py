"""Gate kernel backend selection.

Prefers the compiled Cython kernel and falls back to the numpy implementation
when the extension is unavailable.  Set ``SHORSIM_PURE_PYTHON=1`` to force the
fallback (used by the kernel benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import py_backend

if os.environ.get("SHORSIM_PURE_PYTHON"):
    _impl = py_backend
else:
    try:
        from . import cy_backend as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = py_backend

apply_gate = _impl.apply_gate
BACKEND = _impl.BACKEND


def backend_name() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND
