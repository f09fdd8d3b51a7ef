"""Pure-Python/numpy twin of the compiled Sturm kernels.

Selected automatically when the extension is unavailable.  The recurrence
is sequential in the matrix dimension but vectorizes across shifts.
"""

from __future__ import annotations

import numpy as np

_TINY = np.finfo(np.float64).tiny


def sturm_count(diag, off, x: float) -> int:
    """Number of eigenvalues <= x of the symmetric tridiagonal matrix."""
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    if diag.size == 0:
        return 0
    d = diag[0] - x
    if d == 0.0:
        d = -_TINY
    count = 1 if d < 0.0 else 0
    for i in range(1, diag.size):
        d = (diag[i] - x) - off[i - 1] * off[i - 1] / d
        if d == 0.0:
            d = -_TINY
        if d < 0.0:
            count += 1
    return count


def sturm_count_many(diag, off, xs) -> np.ndarray:
    """Counts <= x over a grid of shifts, vectorized across the grid."""
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    counts = np.zeros(xs.shape, dtype=np.int64)
    if diag.size == 0:
        return counts
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        d = diag[0] - xs
        d[d == 0.0] = -_TINY
        counts += d < 0.0
        for i in range(1, diag.size):
            d = (diag[i] - xs) - off[i - 1] ** 2 / d
            d[d == 0.0] = -_TINY
            counts += d < 0.0
    return counts
