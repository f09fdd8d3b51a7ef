"""Small shared statistics helpers."""

from __future__ import annotations

import math

#: two-sided 99% normal quantile
Z99 = 2.5758293035489004


def wilson_interval(successes: int, trials: int, z: float = Z99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials
                                   + z * z / (4.0 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def wilson_halfwidth(successes: int, trials: int, z: float = Z99) -> float:
    lo, hi = wilson_interval(successes, trials, z)
    return 0.5 * (hi - lo)
