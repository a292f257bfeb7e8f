"""Kernel backend selection.

Prefers the compiled extension, falls back to the NumPy implementations.
Set ``PAOIQ_PURE_PYTHON=1`` to force the fallback (used by the parity tests
and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("PAOIQ_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

lindley_system_times = _impl.lindley_system_times
exact_single_max = _impl.exact_single_max
exact_two_max = _impl.exact_two_max

__all__ = [
    "BACKEND",
    "lindley_system_times",
    "exact_single_max",
    "exact_two_max",
]
