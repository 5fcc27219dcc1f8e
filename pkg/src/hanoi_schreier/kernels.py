"""Kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy/pure-Python twins in ``_pykernels`` are used.  Set
``HANOI_SCHREIER_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

BACKEND: str
_impl: ModuleType

if os.environ.get("HANOI_SCHREIER_PURE", "") not in ("", "0"):
    _impl, BACKEND = _pykernels, "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl, BACKEND = _pykernels, "python"

bfs_distances = _impl.bfs_distances
eccentricities = _impl.eccentricities
tridiag_ql = _impl.tridiag_ql


def available_backends() -> dict[str, ModuleType]:
    out: dict[str, ModuleType] = {"python": _pykernels}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
