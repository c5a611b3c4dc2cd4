"""Backend selection for the hot loops.

The compiled extension is used when it was built; set
``FRCODES_PURE_PYTHON=1`` to force the pure-Python backend.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels_c
    except ImportError:
        return None
    return _kernels_c


COMPILED = _load_compiled()

if COMPILED is not None and os.environ.get("FRCODES_PURE_PYTHON") != "1":
    _impl: ModuleType = COMPILED
    BACKEND = "cython"
else:
    _impl = _kernels_py
    BACKEND = "python"

min_union_size = _impl.min_union_size
gf_matmul = _impl.gf_matmul


def available_backends() -> dict[str, ModuleType]:
    found = {"python": _kernels_py}
    if COMPILED is not None:
        found["cython"] = COMPILED
    return found
