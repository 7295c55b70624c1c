"""Grid-scan backend selection.

The marching/labeling kernels exist twice: a Cython extension
(_scan_core) and a pure-Python fallback (_scan_py) with identical
output. The compiled one is used when it built; DIRAC_KIT_PURE=1
forces the fallback.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("DIRAC_KIT_PURE"):
    from . import _scan_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _scan_core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build toolchain
        from . import _scan_py as _impl

        BACKEND = "python"


def _as_grid(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("node grid must be 2-dimensional")
    return arr


def marching_cells(values, wrap_z: bool) -> np.ndarray:
    """Zero-crossing segments as rows (kind1, i1, j1, kind2, i2, j2)."""
    return _impl.marching_cells(_as_grid(values), bool(wrap_z))


def label_nodes(values, wrap_z: bool) -> np.ndarray:
    """Same-sign connected-component label for every grid node."""
    return _impl.label_nodes(_as_grid(values), bool(wrap_z))
