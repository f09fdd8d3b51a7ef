"""Closed-form evaluators for the explicit constants and inequalities.

Every evaluator returns either a plain float or an itemized BoundReport
with per-term values and side-condition flags.  Vacuous results (error
bounds above 1, probability bounds below 0) are reported as-is and
flagged, never raised: at desk scale most of these bounds are vacuous
and the point is to show that honestly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

LOG32 = math.log(1.5)
LOG2 = math.log(2.0)

#: Exact form of the d>=3 confidence-region constant (the rounded cap is 1207)
K_THEOREM1 = 480.0 / LOG32 + 16.0 / LOG2


@dataclass(frozen=True)
class BoundReport:
    name: str
    terms: dict
    total: float
    side_conditions: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.side_conditions.values())

    def to_dict(self) -> dict:
        return {"name": self.name, "terms": dict(self.terms),
                "total": self.total,
                "side_conditions": dict(self.side_conditions),
                "valid": self.valid, "extra": dict(self.extra)}


def integer_root(n: int, k: int) -> int:
    """floor(n**(1/k)) with exact integer semantics."""
    if n < 0 or k < 1:
        raise ValueError("integer_root needs n >= 0, k >= 1")
    if n == 0:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def chaining_series(tail_at: int = 60) -> float:
    """Sum over q >= 0 of 2^-q * sqrt(2 + 2q log 2)."""
    return chaining_series_with_tail(tail_at)[0]


def chaining_series_with_tail(tail_at: int = 60) -> tuple[float, float]:
    """Partial sum plus a certified analytic bound on the dropped tail.

    For q >= 1, sqrt(2 + 2q log2) <= sqrt(2) (1 + sqrt(log 2) q), so the
    tail past Q is at most sqrt(2) 2^-Q (1 + sqrt(log 2) (Q + 2)).
    """
    partial = sum(2.0 ** -q * math.sqrt(2.0 + 2.0 * q * LOG2)
                  for q in range(tail_at + 1))
    tail = math.sqrt(2.0) * 2.0 ** -tail_at * (
        1.0 + math.sqrt(LOG2) * (tail_at + 2))
    return partial, tail


def k_M(M: float) -> float:
    """Chaining constant K_M; K_2 = k_M(2) is the sub-exponential constant."""
    if M < 2:
        raise ValueError("k_M requires M >= 2")
    prefactor = 40.0 * (M + 1.0) / (LOG32 * (M - 1.0)) + 4.0 / math.log(M)
    return prefactor * chaining_series()


def k_M_cap(M: float) -> float:
    """Stated cap: K_M < 16 (10(M+1)/(log(3/2)(M-1)) + 1/log M)."""
    if M < 2:
        raise ValueError("k_M_cap requires M >= 2")
    return 16.0 * (10.0 * (M + 1.0) / (LOG32 * (M - 1.0)) + 1.0 / math.log(M))


def theorem1_C(d: int) -> int:
    return 40 * d + 104 * 2 ** d - 51


def geometric_bound(d: int, n: int, m: int, r: int) -> BoundReport:
    """Explicit tiling-decomposition bound: 32d/n + 104(2^d-1)m/n + (...)/m."""
    terms = {
        "volume": 32.0 * d / n,
        "frame": 104.0 * (2.0 ** d - 1.0) * m / n,
        "tile_boundary": (4.0 * d + 2.0 * r * (2.0 ** d - 1.0) + 36.0 * d * r) / m,
    }
    return BoundReport(
        name="geometric_explicit",
        terms=terms, total=sum(terms.values()),
        side_conditions={"n > 4m": n > 4 * m, "m > 2r+1": m > 2 * r + 1})


def decomposition_bound(d: int, n: int, m: int, r: int) -> BoundReport:
    """Pre-Bernoulli decomposition bound in closed cube-volume form.

    Terms: the b-penalty of the fully tiled cube, the frame between the
    side-n cube and its m-interior, and the per-tile boundary group; the
    grouping matches the arithmetic that the explicit bound is derived
    from, so total <= geometric_bound(...).total whenever n > 4m.
    """
    if not n > 2 * m:
        raise ValueError(f"decomposition_bound requires n > 2m, got n={n}, m={m}")
    if not m > 2 * r + 1:
        raise ValueError(f"decomposition_bound requires m > 2r+1, got m={m}, r={r}")
    big = (n // m) * m
    terms = {
        "tiled_cube_b": 8.0 * (1.0 - ((big - 2.0) / big) ** d),
        "frame": 26.0 * ((float(n) / (n - 2.0 * m)) ** d - 1.0),
        "tile_boundary": (m ** d - (m - 2) ** d
                          + (m - 2 * r) ** d - (m - 2 * r - 2) ** d
                          + 17 * (m ** d - (m - 2 * r) ** d)) / float(m ** d),
    }
    return BoundReport(
        name="geometric_decomposition",
        terms=terms, total=sum(terms.values()),
        side_conditions={"n > 2m": n > 2 * m, "m > 2r+1": m > 2 * r + 1})


def expectation_convergence_bound(d: int, n: int, r: int) -> float:
    """Distance of E N(cube_n^r)/n^d to its limit: (4d + 2r(2^d-1) + 36dr)/n."""
    if not 2 * r + 1 < n:
        raise ValueError(f"requires 2r+1 < n, got n={n}, r={r}")
    return (4.0 * d + 2.0 * r * (2.0 ** d - 1.0) + 36.0 * d * r) / n


def dimension_k(d: int, theorem: str) -> int:
    """Block-scaling exponent k(d) for the two concentration theorems."""
    if d < 1:
        raise ValueError("d >= 1 required")
    if theorem == "thm2":
        return {1: 4, 2: 3}.get(d, 2)
    if theorem == "thm3":
        if d >= 5:
            return 2
        return math.floor((4 + d) / d) + 1  # smallest integer > (4+d)/d
    raise ValueError(f"unknown theorem tag {theorem!r}")


def thm2_error_bound(d: int, n: int, r: int, k: int) -> BoundReport:
    """Error bound 32d/n + 104(2^d-1)/n^(1-1/k) + (8d+4r(2^d-1)+72dr+1)/(n^(1/k)-1)."""
    root = n ** (1.0 / k)
    if root <= 1.0:
        raise ValueError(f"n^(1/k) must exceed 1, got n={n}, k={k}")
    terms = {
        "volume": 32.0 * d / n,
        "frame": 104.0 * (2.0 ** d - 1.0) / n ** (1.0 - 1.0 / k),
        "tile_boundary": (8.0 * d + 4.0 * r * (2.0 ** d - 1.0)
                          + 72.0 * d * r + 1.0) / (root - 1.0),
    }
    return BoundReport(
        name="thm2_error",
        terms=terms, total=sum(terms.values()),
        side_conditions={"n > 16": n > 16,
                         "n > (2r+1)^k": n > (2 * r + 1) ** k})


def thm2_probability(d: int, n: int, M: float, k: int) -> BoundReport:
    """1 - M exp(-sqrt(floor(n/floor(n^(1/k)))^d) / (floor(n^(1/k)) K_M))."""
    if not n > 16:
        raise ValueError(f"requires n > 16, got {n}")
    if M < 2:
        raise ValueError("requires M >= 2")
    block = integer_root(n, k)
    count = (n // block) ** d
    exponent = math.sqrt(float(count)) / (block * k_M(M))
    value = 1.0 - M * math.exp(-exponent)
    return BoundReport(
        name="thm2_probability",
        terms={"exponent": exponent, "block_side": float(block),
               "block_count": float(count)},
        total=value,
        side_conditions={"n > 16": True},
        extra={"vacuous": value < 0.0, "M": M, "k": k})


def thm1_min_side(d: int, alpha: float, beta: float) -> BoundReport:
    """Minimal cube side certifying the confidence region at level (alpha, beta)."""
    if d < 3:
        raise ValueError("certification requires d >= 3")
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ValueError("alpha, beta must lie in (0, 1)")
    C = theorem1_C(d)
    terms = {
        "accuracy": (C / beta + 1.0) ** 2,
        "confidence": ((math.log(2.0 / alpha) * K_THEOREM1) ** (2.0 / (d - 2))
                       + 1.0) ** 2,
        "floor": 16.0,
    }
    return BoundReport(
        name="thm1_min_side",
        terms=terms, total=max(terms.values()),
        extra={"C": float(C), "K": K_THEOREM1})


def thm3_probability(d: int, n: int, r: int, k: int) -> BoundReport:
    """1 - exp(-(1/24) floor(n/floor(n^(1/k)))^d / floor(n^(1/k)))."""
    if d * k - d - 4 <= 0:
        raise ValueError(f"k={k} too small for d={d}: need k > (4+d)/d")
    block = integer_root(n, k)
    if block < 1:
        raise ValueError("n too small")
    count = (n // block) ** d
    exponent = float(count) / (24.0 * block)
    K2 = k_M(2.0)
    n_threshold = ((12.0 * K2) ** (2.0 / d) + 1.0) ** (d * k / (d * k - d - 4.0))
    value = 1.0 - math.exp(-exponent)
    return BoundReport(
        name="thm3_probability",
        terms={"exponent": exponent, "block_side": float(block),
               "block_count": float(count)},
        total=value,
        side_conditions={"n > 16": n > 16,
                         "n > (2r+1)^k": n > (2 * r + 1) ** k,
                         "n > size threshold": n > n_threshold},
        extra={"size_threshold": n_threshold, "vacuous": value < 0.0})


def cor59_probability(s: int, kappa: float, M: float) -> float:
    """Sub-root-exponential tail: M exp(-sqrt(s) kappa / K_M)."""
    if s < 1 or kappa <= 0 or M < 2:
        raise ValueError("requires s >= 1, kappa > 0, M >= 2")
    return M * math.exp(-math.sqrt(s) * kappa / k_M(M))


def cor511_probability(s: int, kappa: float) -> BoundReport:
    """All three stated sub-exponential bounds with their s-thresholds."""
    if not 0 < kappa <= 1:
        raise ValueError("requires kappa in (0, 1]")
    K2 = k_M(2.0)
    sq = math.sqrt(s)

    def _exp(x: float) -> float:
        # at desk scale the exponents are huge and positive; the bound is
        # then vacuous, reported as inf instead of overflowing
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf

    sharp = _exp(-0.5 * (math.sqrt(kappa + 1.0) - 1.0) ** 2 * s
                 + 0.5 * K2 * sq)
    twelfth = _exp(-kappa ** 2 * s / 12.0 + 0.5 * K2 * sq)
    twentyfourth = _exp(-kappa ** 2 * s / 24.0)
    return BoundReport(
        name="cor511_probability",
        terms={"sharp": sharp, "kappa2_over_12": twelfth,
               "kappa2_over_24": twentyfourth},
        total=min(sharp, twelfth, twentyfourth),
        side_conditions={
            "s >= (K2/kappa)^2": s >= (K2 / kappa) ** 2,
            "s >= (6 K2/kappa^2)^2": s >= (6.0 * K2 / kappa ** 2) ** 2,
            "s >= (12 K2/kappa^2)^2": s >= (12.0 * K2 / kappa ** 2) ** 2,
        })


def bernstein_bound(sigma2: float, c_bound: float, x: float) -> float:
    """Tail bound exp(-x^2 / (2 (sigma^2 + (C/3) x))) for bounded sums."""
    if sigma2 <= 0 or c_bound <= 0 or x < 0:
        raise ValueError("requires sigma2, C > 0 and x >= 0")
    if x == 0:
        return 1.0
    return math.exp(-0.5 * x * x / (sigma2 + c_bound / 3.0 * x))


def massart_threshold(ez: float, sigma2: float, eu: float, eta: float) -> float:
    """Deviation level EZ + 2 sqrt((sigma^2 + EU) eta) + 2 eta."""
    if min(ez, sigma2, eu, eta) < 0:
        raise ValueError("all arguments must be >= 0")
    return ez + 2.0 * math.sqrt((sigma2 + eu) * eta) + 2.0 * eta
