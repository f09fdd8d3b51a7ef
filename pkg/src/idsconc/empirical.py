"""Monte Carlo engine: empirical IDS, bracketing covers, concentration runs.

All randomness is keyed by (master seed, stream tag, index), so every
experiment is deterministic and independent of worker scheduling; results
are aggregated in index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .lattice import Cube, tiling
from .random_field import FieldSpec, PotentialSample, derive_seed, sample
from .spectra import (StepFunction, average, normalized_evcf,
                      sup_norm_distance)
from .util import wilson_interval

# stream tags separating the independent seed streams of one experiment
PHI_STREAM = 1
VERIFY_STREAM = 2
REFERENCE_STREAM = 3
REPLICA_STREAM = 4


def block_average(omega: PotentialSample, n: int, m: int, r: int,
                  d: int) -> StepFunction:
    """Tiling average (1/|T|) sum over tiles of N(tile^r)/m^d."""
    if not n > 2 * m:
        raise ValueError(f"requires n > 2m, got n={n}, m={m}")
    if not m > 2 * r + 1:
        raise ValueError(f"requires m > 2r+1, got m={m}, r={r}")
    tiles = tiling(n, m, d).tiles()
    fs = [normalized_evcf(t.interior_sites(r), omega, float(m ** d))
          for t in tiles]
    return average(fs)


@dataclass(frozen=True)
class EmpiricalPhi:
    """Monte Carlo mean of normalized evcfs of the r-interior of a side-m cube."""

    phi: StepFunction
    sample_count: int
    d: int
    m: int
    r: int

    @property
    def interior_fraction(self) -> float:
        return max(self.m - 2 * self.r, 0) ** self.d / float(self.m ** self.d)

    def __call__(self, x):
        return self.phi(x)


def _single_block_evcf(spec: FieldSpec, d: int, m: int, r: int,
                       child_seed: int) -> StepFunction:
    cube = Cube(d, m)
    sites = cube.interior_sites(r)
    omega = sample(spec.with_seed(child_seed), sites)
    return normalized_evcf(sites, omega, float(m ** d))


def empirical_phi(spec: FieldSpec, d: int, m: int, r: int, S: int,
                  seed: int | None = None) -> EmpiricalPhi:
    """Average of S independent normalized evcfs, deterministic in the seed."""
    if max(m - 2 * r, 0) == 0:
        raise ValueError(f"empty interior: m={m}, r={r}")
    if S < 1:
        raise ValueError("S >= 1 required")
    master = spec.seed if seed is None else seed
    if m - 2 * r == 1 and spec.rho == 0:
        # single-site interior: the one eigenvalue is 2d + omega(center)
        child = np.array([derive_seed(master, PHI_STREAM, i) for i in range(S)],
                         dtype=np.uint64)
        center = (r,) * d
        eigs = 2.0 * d + _values_at_site(spec, child, center)
        distinct, counts = np.unique(eigs, return_counts=True)
        phi = StepFunction(distinct, np.cumsum(counts) / (S * float(m ** d)),
                           base=0.0, monotone=True)
        return EmpiricalPhi(phi, S, d, m, r)
    fs = [_single_block_evcf(spec, d, m, r, derive_seed(master, PHI_STREAM, i))
          for i in range(S)]
    return EmpiricalPhi(average(fs), S, d, m, r)


def _values_at_site(spec: FieldSpec, seeds: np.ndarray, site) -> np.ndarray:
    """Marginal draws at one site under many seeds (counter-based, exact
    match with the per-sample path)."""
    from .random_field import _splitmix64, _U64  # shared hash chain
    state = seeds.astype(np.uint64)
    with np.errstate(over="ignore"):
        for c in site:
            state = _splitmix64(state ^ np.uint64(int(c) & 0xFFFFFFFFFFFFFFFF))
        state = _splitmix64(state)
    u = (state >> _U64(11)).astype(np.float64) * 2.0 ** -53
    return np.asarray(spec.marginal.draw(u), dtype=np.float64)


def quantile(phi, alpha: float) -> float:
    """Generalized inverse inf{x : phi(x) >= alpha} on a step function."""
    sf = phi.phi if isinstance(phi, EmpiricalPhi) else phi
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if alpha > sf.final_value:
        raise ValueError(f"alpha={alpha} exceeds the upper limit "
                         f"{sf.final_value}")
    idx = int(np.searchsorted(sf.values, alpha, side="left"))
    return float(sf.breakpoints[idx])


@dataclass(frozen=True)
class BracketingCover:
    """Level-q quantile grid; k = 2^(2q) cells between -inf and +inf."""

    level: int
    grid: np.ndarray  # length k + 1, grid[0] = -inf, grid[-1] = +inf

    @property
    def cell_count(self) -> int:
        return self.grid.size - 1

    @property
    def distinct_bracket_count(self) -> int:
        """Number of non-degenerate brackets after collapsing duplicates."""
        finite = self.grid[np.isfinite(self.grid)]
        return int(np.unique(finite).size) + 1

    def to_json_dict(self) -> dict:
        return {"level": self.level, "grid": self.grid.tolist(),
                "distinct_brackets": self.distinct_bracket_count}


def build_bracketing(phi: EmpiricalPhi, q_max: int) -> list[BracketingCover]:
    """Quantile grids x_j(2^-2q) for q = 1..q_max."""
    if q_max < 1:
        raise ValueError("q_max >= 1 required")
    covers = []
    frac = phi.interior_fraction
    sf = phi.phi
    for q in range(1, q_max + 1):
        k = 2 ** (2 * q)
        grid = np.empty(k + 1)
        grid[0] = -np.inf
        grid[k] = np.inf
        alphas = (np.arange(1, k) / k) * frac
        idx = np.searchsorted(sf.values, alphas, side="left")
        grid[1:k] = sf.breakpoints[np.minimum(idx, sf.breakpoints.size - 1)]
        covers.append(BracketingCover(level=q, grid=grid))
    return covers


@dataclass(frozen=True)
class BracketVerification:
    level: int
    sizes: np.ndarray            # empirical L2 size per cell
    mass: np.ndarray             # empirical mean of (u - l) per cell
    monotone_ok: bool
    atom_flags: np.ndarray       # cells whose phi-mass exceeds 2^-2q

    def to_json_dict(self) -> dict:
        return {"level": self.level, "sizes": self.sizes.tolist(),
                "mass": self.mass.tolist(),
                "monotone_ok": bool(self.monotone_ok),
                "atom_flags": self.atom_flags.tolist()}


def verify_bracketing(covers, spec: FieldSpec, d: int, m: int, r: int,
                      S2: int, seed: int | None = None) -> list[BracketVerification]:
    """Empirical L2 bracket sizes and monotonicity flags on fresh samples."""
    if S2 < 1:
        raise ValueError("S2 >= 1 required")
    master = spec.seed if seed is None else seed
    frac = max(m - 2 * r, 0) ** d / float(m ** d)
    evcfs = [_single_block_evcf(spec, d, m, r,
                                derive_seed(master, VERIFY_STREAM, i))
             for i in range(S2)]

    def eval_grid(sf: StepFunction, grid: np.ndarray) -> np.ndarray:
        out = np.empty(grid.size)
        finite = np.isfinite(grid)
        out[finite] = sf(grid[finite])
        out[grid == -np.inf] = 0.0
        out[grid == np.inf] = frac
        return out

    results = []
    for cover in covers:
        diffs = np.stack([np.diff(eval_grid(f, cover.grid)) for f in evcfs])
        sizes = np.sqrt(np.mean(diffs ** 2, axis=0))
        mass = np.mean(diffs, axis=0)
        monotone_ok = bool(np.all(diffs >= -1e-12))
        # a cell is diagnosed as an atom when its mass clearly exceeds the
        # target 2^-2q: the threshold absorbs both the sampling noise of
        # the mass estimate and the quantile error of the cover grid
        target = 2.0 ** (-2 * cover.level)
        noise = 3.0 * math.sqrt(target * (1.0 - target) / S2)
        atom_flags = mass > 2.0 * target + noise
        results.append(BracketVerification(cover.level, sizes, mass,
                                           monotone_ok, atom_flags))
    return results


@dataclass(frozen=True)
class ConcentrationRow:
    kappa: float
    freq: float
    wilson_lo: float
    wilson_hi: float
    cor59: float
    cor511: float
    s: int
    R: int


@dataclass(frozen=True)
class ConcentrationTable:
    rows: tuple
    sup_values: np.ndarray
    s: int
    R: int
    reference_samples: int

    @property
    def mean_sup(self) -> float:
        return float(self.sup_values.mean())

    def write_csv(self, fh) -> None:
        fh.write("kappa,freq,wilson_lo,wilson_hi,cor59,cor511,s,R\n")
        for row in self.rows:
            fh.write(f"{row.kappa!r},{row.freq!r},{row.wilson_lo!r},"
                     f"{row.wilson_hi!r},{row.cor59!r},{row.cor511!r},"
                     f"{row.s},{row.R}\n")


def _replica_sup(spec: FieldSpec, d: int, m: int, r: int, s: int,
                 master: int, rep: int, phi_ref: StepFunction) -> float:
    """Sup-norm deviation of one replica's s-block average from the reference."""
    field_spec = spec.with_seed(derive_seed(master, REPLICA_STREAM, rep))
    offsets = [(i * m,) + (0,) * (d - 1) for i in range(s)]
    if m - 2 * r == 1 and spec.rho == 0:
        sites = [tuple(r + c for c in off) for off in offsets]
        omega = sample(field_spec, sites)
        eigs = 2.0 * d + omega.array_for(sites)
        distinct, counts = np.unique(eigs, return_counts=True)
        g = StepFunction(distinct, np.cumsum(counts) / (s * float(m ** d)),
                         base=0.0, monotone=True)
    else:
        blocks = [Cube(d, m, off).interior_sites(r) for off in offsets]
        all_sites = [x for b in blocks for x in b]
        omega = sample(field_spec, all_sites)
        fs = [normalized_evcf(b, omega, float(m ** d)) for b in blocks]
        g = average(fs)
    return sup_norm_distance(g, phi_ref)


def concentration_experiment(spec: FieldSpec, d: int, m: int, r: int, s: int,
                             kappas, R: int, seed: int | None = None,
                             M: float = 2.0, reference_samples: int | None = None,
                             phi_ref: EmpiricalPhi | None = None,
                             workers: int = 1) -> ConcentrationTable:
    """Exceedance frequencies of the block-average sup-norm deviation.

    Blocks are s consecutive tiles of a fresh field per replica, so their
    r-interiors are pairwise farther apart than the independence radius.
    The reference is a Monte Carlo estimate with an independent seed and
    (by default) ten times the experiment's sample budget.
    """
    if max(m - 2 * r, 0) == 0:
        raise ValueError(f"empty interior: m={m}, r={r}")
    if spec.independence_radius >= 2 * r + 1:
        raise ValueError("tile spacing 2r+1 does not exceed the field's "
                         "independence radius; enlarge r or shrink rho")
    master = spec.seed if seed is None else seed
    if phi_ref is None:
        if reference_samples is None:
            reference_samples = 10 * R * s
        phi_ref = empirical_phi(spec, d, m, r, reference_samples,
                                seed=derive_seed(master, REFERENCE_STREAM))
    sups = np.empty(R)

    def run_chunk(indices):
        return [(rep, _replica_sup(spec, d, m, r, s, master, rep, phi_ref.phi))
                for rep in indices]

    if workers <= 1:
        chunks = [range(R)]
    else:
        chunks = [range(w, R, workers) for w in range(workers)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for result in pool.map(run_chunk, chunks):
            for rep, val in result:
                sups[rep] = val

    rows = []
    for kappa in kappas:
        exceed = int(np.sum(sups >= kappa))
        lo, hi = wilson_interval(exceed, R)
        rows.append(ConcentrationRow(
            kappa=float(kappa), freq=exceed / R, wilson_lo=lo, wilson_hi=hi,
            cor59=bounds.cor59_probability(s, float(kappa), M),
            cor511=bounds.cor511_probability(s, float(kappa)).total
            if 0 < kappa <= 1 else float("nan"),
            s=s, R=R))
    return ConcentrationTable(tuple(rows), sups, s, R,
                              phi_ref.sample_count)


@dataclass(frozen=True)
class ReferencePoint:
    n: int
    phi: StepFunction
    gap_from_previous: float | None
    bound: float
    mc_band: float


def reference_ids(spec: FieldSpec, d: int, r: int, n_list, S: int,
                  seed: int | None = None) -> list[ReferencePoint]:
    """MC estimates of E N(cube_n^r)/n^d for growing n, with Cauchy gaps.

    mc_band is a conservative sup-norm standard-error bound for the mean
    of S functions with values in [0, 1]: pointwise sd <= 1/2, so the
    standard error is at most 1/(2 sqrt(S)).
    """
    master = spec.seed if seed is None else seed
    points: list[ReferencePoint] = []
    se = 0.5 / math.sqrt(S)
    for j, n in enumerate(n_list):
        if not 2 * r + 1 < n:
            raise ValueError(f"requires 2r+1 < n, got n={n}, r={r}")
        cube = Cube(d, n)
        sites = cube.interior_sites(r)
        fs = [normalized_evcf(
                sites,
                sample(spec.with_seed(derive_seed(master, REFERENCE_STREAM,
                                                  j, i)), sites),
                float(n ** d))
              for i in range(S)]
        phi = average(fs)
        gap = None if not points else sup_norm_distance(phi, points[-1].phi)
        points.append(ReferencePoint(
            n=n, phi=phi, gap_from_previous=gap,
            bound=bounds.expectation_convergence_bound(d, n, r),
            mc_band=se))
    return points


@dataclass(frozen=True)
class ConfidenceRegion:
    lower: StepFunction
    upper: StepFunction
    certified: bool
    required_side: float


def confidence_region(omega: PotentialSample, n: int, d: int, r: int,
                      beta: float, alpha: float = 0.05) -> ConfidenceRegion:
    """Sup-norm band of width beta around the measured normalized evcf."""
    cube = Cube(d, n)
    measured = normalized_evcf(cube.sites(), omega, float(n ** d))
    lower = measured.shifted_values(-beta).clipped(0.0, 1.0)
    upper = measured.shifted_values(beta).clipped(0.0, 1.0)
    if d >= 3:
        required = bounds.thm1_min_side(d, alpha, beta).total
        certified = n > required
    else:
        required = float("inf")
        certified = False
    return ConfidenceRegion(lower, upper, certified, required)
