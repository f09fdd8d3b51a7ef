"""Kernel dispatch: compiled extension when available, pure Python otherwise."""

from __future__ import annotations

try:
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:  # extension not built on this platform
    from . import _kernels_py as _impl
    BACKEND = "python"

from . import _kernels_py as python_impl

import numpy as np


def _check(diag: np.ndarray, off: np.ndarray) -> None:
    if diag.size and off.size != diag.size - 1:
        raise ValueError(f"off-diagonal length {off.size} does not match "
                         f"dimension {diag.size}")


def sturm_count(diag, off, x: float) -> int:
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    _check(diag, off)
    return int(_impl.sturm_count(diag, off, float(x)))


def sturm_count_many(diag, off, xs) -> np.ndarray:
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    _check(diag, off)
    return np.asarray(_impl.sturm_count_many(diag, off, xs))
