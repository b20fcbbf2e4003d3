"""Backend selection for the hot constant-term kernel.

The compiled extension is used when it imported successfully; it works in
int64 and raises ``OverflowError`` on overflow, in which case the call is
transparently redone with the exact pure-Python kernel. Set
``QPERIODS_BACKEND=python`` to force the fallback at import time.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

import numpy as np

HAVE_COMPILED = _ckernels is not None
_INT64_MAX = 2**63 - 1

BACKEND = "compiled" if HAVE_COMPILED else "python"
if os.environ.get("QPERIODS_BACKEND") == "python":
    BACKEND = "python"


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not available in this build")
    BACKEND = name


def constant_term_power(exps, coeffs, d: int, backend: str | None = None) -> int:
    """Constant term of ``W**d`` for ``W`` given as parallel exponent/coeff lists."""
    backend = backend or BACKEND
    if backend == "compiled" and _ckernels is not None and exps:
        if all(abs(c) <= _INT64_MAX for c in coeffs):
            e = np.ascontiguousarray(np.array(exps, dtype=np.int64).reshape(len(exps), -1))
            c = np.ascontiguousarray(np.array(coeffs, dtype=np.int64))
            try:
                return int(_ckernels.constant_term_power(e, c, int(d)))
            except (OverflowError, MemoryError):
                pass
    return _pykernels.constant_term_power(exps, coeffs, d)
