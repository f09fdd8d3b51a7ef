"""Orlicz norms on empirical samples and the associated tail checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .util import wilson_halfwidth

_SEARCH_CEILING = 1e30


@dataclass(frozen=True)
class OrliczSpec:
    """Generator function family: plain power x^p or (1/M) exp(x^p)."""

    family: str  # "power" | "psi"
    p: float = 1.0
    M: float = 2.0

    def __post_init__(self):
        if self.family not in ("power", "psi"):
            raise ValueError(f"unknown Orlicz family {self.family!r}")
        if self.p < 1:
            raise ValueError("p >= 1 required")
        if self.family == "psi" and self.M < 2:
            raise ValueError("psi family requires M >= 2")

    def phi(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.family == "power":
            return x ** self.p
        with np.errstate(over="ignore"):
            return np.exp(x ** self.p) / self.M


def _mean_phi(spec: OrliczSpec, absx: np.ndarray, c: float) -> float:
    return float(np.mean(spec.phi(absx / c)))


def orlicz_norm(values, spec: OrliczSpec, rtol: float = 1e-8) -> float:
    """inf{C > 0 : mean Phi(|X|/C) <= 1} on the empirical sample.

    Bisection on C using monotonicity; returns inf when no C below the
    search ceiling satisfies the constraint.
    """
    absx = np.abs(np.asarray(values, dtype=np.float64))
    if absx.size == 0:
        raise ValueError("orlicz_norm of an empty sample")
    if np.all(absx == 0.0):
        return 0.0
    hi = float(absx.max())
    if _mean_phi(spec, absx, hi) <= 1.0:
        # shrink: the norm is below the sample maximum
        lo = hi / 2.0
        while _mean_phi(spec, absx, lo) <= 1.0:
            hi = lo
            lo /= 2.0
            if lo < 1e-300:
                return 0.0
    else:
        lo = hi
        hi = 2.0 * hi
        while _mean_phi(spec, absx, hi) > 1.0:
            lo = hi
            hi *= 2.0
            if hi > _SEARCH_CEILING:
                return float("inf")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _mean_phi(spec, absx, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def orlicz_tail_check(values, spec: OrliczSpec, D: float,
                      grid_size: int = 50) -> int:
    """Count grid points where the empirical tail beats 1/Phi(y/D).

    The tail property P(|X| >= y) <= 1/Phi(y/D) must hold for D at or
    above the Orlicz norm; a point only counts as a violation when the
    excess exceeds the Wilson 99% half-width of the frequency estimate.
    """
    absx = np.abs(np.asarray(values, dtype=np.float64))
    n = absx.size
    ys = np.linspace(absx.min(), absx.max(), grid_size)
    violations = 0
    for y in ys:
        if y <= 0:
            continue
        exceed = int(np.sum(absx >= y))
        p_hat = exceed / n
        bound = 1.0 / float(spec.phi(y / D))
        if p_hat - wilson_halfwidth(exceed, n) > bound:
            violations += 1
    return violations
