"""Selects the allocation search kernel at import time.

The compiled extension is preferred when present; the pure-Python twin is
used otherwise, and can be forced with the ``HSRSIM_PURE_PYTHON``
environment variable (any non-empty value).  Both kernels return identical
results; only throughput differs.
"""

from __future__ import annotations

import os

from . import _bnb_py

if os.environ.get("HSRSIM_PURE_PYTHON"):
    kernel = _bnb_py
else:
    try:
        from . import _bnb as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _bnb_py


def solver_backend() -> str:
    """Name of the active search kernel: ``"cython"`` or ``"python"``."""
    return kernel.BACKEND_NAME
