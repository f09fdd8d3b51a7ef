"""Assembly of the restricted Anderson operator on a finite site set.

The matrix is the compression of (discrete Laplacian + random potential):
diagonal 2d + omega_x, off-diagonal -1 for nearest-neighbor pairs inside
the set.  Sites are ordered lexicographically once and for all so assembly
and eigenvalue ordering are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Site
from .random_field import PotentialSample


class SolverSizeError(Exception):
    """Raised when a dense eigensolve would exceed the documented limit."""


@dataclass(frozen=True)
class RestrictedOperator:
    sites: tuple[Site, ...]          # lexicographically sorted
    diag: np.ndarray                 # 2d + omega_x per site
    rows: np.ndarray                 # off-diagonal edge endpoints, rows < cols
    cols: np.ndarray
    dim: int

    @property
    def size(self) -> int:
        return len(self.sites)

    @property
    def is_tridiagonal(self) -> bool:
        return self.dim == 1

    def offdiag(self) -> np.ndarray:
        """Subdiagonal for d=1 (sorted sites are a path with possible gaps)."""
        if self.dim != 1:
            raise ValueError("offdiag() is only defined for d=1")
        off = np.zeros(self.size - 1) if self.size > 1 else np.zeros(0)
        for i, j in zip(self.rows, self.cols):
            off[min(i, j)] = -1.0
        return off

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag.astype(np.float64))
        h[self.rows, self.cols] = -1.0
        h[self.cols, self.rows] = -1.0
        return h

    def gershgorin_interval(self) -> tuple[float, float]:
        """All eigenvalues lie in [min omega, 4d + max omega]."""
        omega = self.diag - 2 * self.dim
        return float(omega.min()), float(4 * self.dim + omega.max())

    def dump_coo(self, fh) -> None:
        """Coordinate-triplet text dump (1-based, upper triangle + diagonal)."""
        for i, v in enumerate(self.diag):
            fh.write(f"{i + 1} {i + 1} {float(v)!r}\n")
        for i, j in zip(self.rows, self.cols):
            fh.write(f"{i + 1} {j + 1} -1.0\n")


def assemble(sites, omega: PotentialSample, dim: int | None = None) -> RestrictedOperator:
    """Build the restricted operator for the given site set and potential."""
    ordered = tuple(sorted(tuple(int(c) for c in s) for s in sites))
    if not ordered:
        raise ValueError("assemble requires a nonempty site set")
    d = dim if dim is not None else len(ordered[0])
    missing = [s for s in ordered if s not in omega.values]
    if missing:
        raise KeyError(f"potential does not cover site {missing[0]}")
    index = {s: i for i, s in enumerate(ordered)}
    diag = np.array([2.0 * d + omega.values[s] for s in ordered])
    rows, cols = [], []
    for s, i in index.items():
        for axis in range(d):
            nb = s[:axis] + (s[axis] + 1,) + s[axis + 1:]
            j = index.get(nb)
            if j is not None:
                rows.append(min(i, j))
                cols.append(max(i, j))
    return RestrictedOperator(
        sites=ordered, diag=diag,
        rows=np.array(rows, dtype=np.intp), cols=np.array(cols, dtype=np.intp),
        dim=d)
