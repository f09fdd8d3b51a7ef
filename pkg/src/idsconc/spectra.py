"""Eigenvalue-counting step functions and exact sup-norm machinery.

Counting uses exact float comparisons ("<= x" with no snapping); the only
fuzz anywhere is eigensolver backward error.  Dense eigensolves are capped
at dimension 10^4; beyond that only the d=1 tridiagonal paths are offered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .operators import RestrictedOperator, SolverSizeError, assemble
from .random_field import PotentialSample

DENSE_EIGENSOLVE_LIMIT = 10_000


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function on the energy axis.

    Value is `base` on (-inf, breakpoints[0]) and values[i] on
    [breakpoints[i], breakpoints[i+1]).
    """

    breakpoints: np.ndarray
    values: np.ndarray
    base: float = 0.0
    monotone: bool = False

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if bp.shape != vals.shape:
            raise ValueError("breakpoints and values must have equal length")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right")
        padded = np.concatenate(([self.base], self.values))
        out = padded[idx]
        return float(out) if np.isscalar(x) else out

    def left_limit(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="left")
        padded = np.concatenate(([self.base], self.values))
        out = padded[idx]
        return float(out) if np.isscalar(x) else out

    @property
    def final_value(self) -> float:
        return float(self.values[-1]) if self.values.size else self.base

    def scaled(self, a: float) -> "StepFunction":
        return StepFunction(self.breakpoints, self.values * a, self.base * a,
                            monotone=self.monotone and a >= 0)

    def shifted_values(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, self.values + c, self.base + c,
                            monotone=self.monotone)

    def clipped(self, lo: float, hi: float) -> "StepFunction":
        return StepFunction(self.breakpoints,
                            np.clip(self.values, lo, hi),
                            float(np.clip(self.base, lo, hi)),
                            monotone=self.monotone)

    def to_json_dict(self) -> dict:
        return {"base": self.base,
                "breakpoints": self.breakpoints.tolist(),
                "values": self.values.tolist()}

    @staticmethod
    def from_json_dict(d: dict) -> "StepFunction":
        return StepFunction(np.asarray(d["breakpoints"]),
                            np.asarray(d["values"]), float(d["base"]))

    def write_csv(self, fh) -> None:
        fh.write("x,value\n")
        for x, v in zip(self.breakpoints, self.values):
            fh.write(f"{float(x)!r},{float(v)!r}\n")


def eigenvalues(op: RestrictedOperator) -> np.ndarray:
    """All eigenvalues with multiplicity, ascending."""
    if op.size == 1:
        return op.diag.copy()
    if op.is_tridiagonal:
        try:
            return scipy.linalg.eigh_tridiagonal(
                op.diag, op.offdiag(), eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(
                f"tridiagonal eigensolve failed at size {op.size}") from exc
    if op.size > DENSE_EIGENSOLVE_LIMIT:
        raise SolverSizeError(
            f"dense eigensolve of dimension {op.size} exceeds the limit "
            f"{DENSE_EIGENSOLVE_LIMIT} (only d=1 offers larger sizes)")
    try:
        return scipy.linalg.eigvalsh(op.dense())
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolve failed at size {op.size}") from exc


def count_below(op: RestrictedOperator, x: float) -> int:
    """#{eigenvalues <= x}; Sturm inertia for d=1, eigenvalue list otherwise."""
    if op.is_tridiagonal:
        return kernels.sturm_count(op.diag, op.offdiag(), x)
    return int(np.searchsorted(eigenvalues(op), x, side="right"))


def count_below_from_eigenvalues(evals: np.ndarray, x) -> np.ndarray:
    return np.searchsorted(np.asarray(evals), x, side="right")


def step_from_eigenvalues(evals: np.ndarray, normalizer: float = 1.0) -> StepFunction:
    distinct, counts = np.unique(np.asarray(evals, dtype=np.float64),
                                 return_counts=True)
    return StepFunction(distinct, np.cumsum(counts) / normalizer,
                        base=0.0, monotone=True)


def evcf(sites, omega: PotentialSample) -> StepFunction:
    """Unnormalized eigenvalue counting function of the restricted operator."""
    return step_from_eigenvalues(eigenvalues(assemble(sites, omega)))


def normalized_evcf(sites, omega: PotentialSample, normalizer: float) -> StepFunction:
    sites = list(sites)
    if not sites:
        raise ValueError("normalized_evcf requires a nonempty site set")
    if normalizer < len(sites):
        raise ValueError("normalizer must be >= the number of sites")
    return step_from_eigenvalues(eigenvalues(assemble(sites, omega)),
                                 normalizer=float(normalizer))


def sup_norm_distance(f: StepFunction, g: StepFunction) -> float:
    """Exact sup of |f - g| over the whole axis, for monotone step functions.

    Scans the pieces of the function with fewer breakpoints; on each piece
    the other function is monotone, so its extremes sit at the piece ends
    (right value at the left end, left limit at the right end).
    """
    if not (f.monotone and g.monotone):
        raise ValueError("sup_norm_distance requires monotone step functions")
    if g.breakpoints.size < f.breakpoints.size:
        f, g = g, f
    best = abs(f.base - g.base)
    best = max(best, abs(f.final_value - g.final_value))
    if f.breakpoints.size:
        piece_vals = np.concatenate(([f.base], f.values))
        at_start = np.concatenate(([g.base], g(f.breakpoints)))
        ends = g.left_limit(f.breakpoints)
        lo = np.abs(piece_vals - at_start)
        hi = np.abs(piece_vals[:-1] - ends)
        best = max(best, float(lo.max()), float(hi.max()) if hi.size else 0.0)
    else:
        # f is constant; g's extremes are its base and final value
        if g.breakpoints.size:
            best = max(best,
                       float(np.abs(f.base - g.values).max()))
    return float(best)


def average(fs, weights=None) -> StepFunction:
    """Pointwise convex combination via jump aggregation."""
    fs = list(fs)
    if not fs:
        raise ValueError("average of an empty list")
    if weights is None:
        weights = np.full(len(fs), 1.0 / len(fs))
    else:
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (len(fs),):
            raise ValueError("one weight per function required")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
    base = float(sum(w * f.base for w, f in zip(weights, fs)))
    positions = []
    jumps = []
    for w, f in zip(weights, fs):
        if f.breakpoints.size == 0:
            continue
        positions.append(f.breakpoints)
        j = np.empty_like(f.values)
        j[0] = f.values[0] - f.base
        j[1:] = np.diff(f.values)
        jumps.append(w * j)
    if not positions:
        return StepFunction(np.array([]), np.array([]), base,
                            monotone=all(f.monotone for f in fs))
    pos = np.concatenate(positions)
    jmp = np.concatenate(jumps)
    uniq, inv = np.unique(pos, return_inverse=True)
    agg = np.zeros(uniq.size)
    np.add.at(agg, inv, jmp)
    values = base + np.cumsum(agg)
    return StepFunction(uniq, values, base,
                        monotone=all(f.monotone for f in fs))
