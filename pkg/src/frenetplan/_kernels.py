"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is missing or FRENETPLAN_PURE is set.  Both backends
are bit-identical (see tests/test_kernels_equivalence.py).
"""

from __future__ import annotations

import os

if os.environ.get("FRENETPLAN_PURE"):
    from . import _kernels_py as impl
else:
    try:
        from . import _speedups as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as impl  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return impl.BACKEND
