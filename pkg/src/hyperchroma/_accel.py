"""Optional numba acceleration.

Set ``HYPERCHROMA_JIT=0`` to run every kernel as plain Python. The kernels
consume pre-drawn random tapes, so both paths produce identical results.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("HYPERCHROMA_JIT", "1").strip().lower()

try:  # numba is an optional extra
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

JIT_ENABLED = _numba is not None and _FLAG not in {"0", "false", "no", "off"}


def kernel(fn):
    """Compile ``fn`` with numba when enabled; keep the Python original as ``fn.py_func``."""
    if JIT_ENABLED:
        return _numba.njit(cache=True)(fn)
    fn.py_func = fn
    return fn
