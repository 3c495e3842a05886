"""Kernel backend selection.

The compiled extension is used when importable; set ``OCTA_PTOLEMY_PURE=1``
to force the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("OCTA_PTOLEMY_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        pass

dilog = _impl.dilog
eval_system = _impl.eval_system

__all__ = ["BACKEND", "dilog", "eval_system"]
