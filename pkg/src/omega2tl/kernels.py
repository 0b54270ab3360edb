"""Selects the fixpoint kernel backend at import time.

The compiled extension is used when available; the pure-Python twin is
the fallback.  Set OMEGA2TL_PURE=1 to force the fallback (used by the
benchmark and by tests that exercise both paths).
"""

from __future__ import annotations

import os

from omega2tl import _kernels_py

if os.environ.get("OMEGA2TL_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from omega2tl import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

until_row = _impl.until_row
lasso_fixpoint = _impl.lasso_fixpoint
