"""Property suites and classical-inequality validation harnesses.

Shared between the `validate` CLI command and the test suite: each suite
returns (ok, details) so failures are machine-readable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import bounds, empirical, orlicz
from .lattice import Cube, b_function, interior_by_enumeration, tiling
from .operators import assemble
from .random_field import (FieldSpec, Marginal, PotentialSample, derive_seed,
                           sample, translate)
from .spectra import average, eigenvalues, evcf, sup_norm_distance
from .util import wilson_interval


@dataclass(frozen=True)
class TrialResult:
    """One threshold of an empirical tail-vs-bound comparison."""

    threshold: float
    freq: float
    bound: float
    wilson_lo: float
    wilson_hi: float

    @property
    def ok(self) -> bool:
        # the bound must dominate up to 99% binomial uncertainty
        return self.wilson_lo <= self.bound


def bernstein_trial(s: int, R: int, xs, seed: int) -> list[TrialResult]:
    """Centered Bernoulli(1/2) sums against the Bernstein tail bound."""
    rng = np.random.default_rng(seed)
    sums = rng.binomial(s, 0.5, size=R) - 0.5 * s
    out = []
    for x in xs:
        exceed = int(np.sum(sums >= x))
        lo, hi = wilson_interval(exceed, R)
        out.append(TrialResult(
            threshold=float(x), freq=exceed / R,
            bound=bounds.bernstein_bound(s / 4.0, 1.0, float(x)),
            wilson_lo=lo, wilson_hi=hi))
    return out


def _massart_statistics(rng, R: int, s: int, T: int):
    """Sup-deviation Z and variance proxy U for the centered-indicator
    class f_t(X) = 1{X <= t/T} - t/T on uniform X, t = 1..T."""
    x = rng.random((R, s))
    idx = np.minimum((x * T).astype(np.intp), T - 1)
    onehot = np.zeros((R, T))
    rows = np.repeat(np.arange(R), s)
    np.add.at(onehot, (rows, idx.ravel()), 1.0)
    counts = np.cumsum(onehot, axis=1)
    t_over_t = np.arange(1, T + 1) / T
    z_sup = np.abs(counts - s * t_over_t).max(axis=1)
    u = counts * (1.0 - t_over_t) ** 2 + (s - counts) * t_over_t ** 2
    return z_sup, u.max(axis=1)


def massart_trial(s: int, T: int, R: int, etas, seed: int,
                  estimate_replicas: int = 20_000) -> list[TrialResult]:
    """Empirical exceedance of the bounded-difference deviation threshold.

    EZ and EU are estimated on an independent batch; sigma^2 is exact for
    these coordinates: s * max_t (t/T)(1 - t/T).
    """
    est_rng = np.random.default_rng(derive_seed(seed, 1))
    z_est, u_est = _massart_statistics(est_rng, estimate_replicas, s, T)
    ez, eu = float(z_est.mean()), float(u_est.mean())
    t_over_t = np.arange(1, T + 1) / T
    sigma2 = s * float(np.max(t_over_t * (1 - t_over_t)))

    rng = np.random.default_rng(derive_seed(seed, 2))
    z_sup, _ = _massart_statistics(rng, R, s, T)
    out = []
    for eta in etas:
        thr = bounds.massart_threshold(ez, sigma2, eu, float(eta))
        exceed = int(np.sum(z_sup >= thr))
        lo, hi = wilson_interval(exceed, R)
        out.append(TrialResult(threshold=thr, freq=exceed / R,
                               bound=math.exp(-float(eta)),
                               wilson_lo=lo, wilson_hi=hi))
    return out


# ---------------------------------------------------------------------------
# property suites


def check_geometry(seed: int, cases: int = 200) -> tuple[bool, dict]:
    """Closed forms vs brute-force enumeration for cubes, boundaries, tilings."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(cases):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, 13 - 3 * (d - 1)))
        r = int(rng.integers(0, 4))
        cube = Cube(d, n, tuple(int(z) for z in rng.integers(-5, 5, d)))
        if cube.interior_count(r) != len(cube.interior_sites(r)):
            failures.append(("interior_count", d, n, r))
        if cube.interior_sites(r) != interior_by_enumeration(cube, r):
            failures.append(("interior_sites", d, n, r))
        if b_function(cube) != 8 * (n ** d - max(n - 2, 0) ** d):
            failures.append(("b_value", d, n))
        if b_function(cube) > 8 * cube.site_count:
            failures.append(("b_cap", d, n))
    for _ in range(40):
        d = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        n = int(rng.integers(2 * m + 1, 2 * m + 8))
        ts = tiling(n, m, d)
        if len(ts) != (n // m) ** d:
            failures.append(("tiling_count", d, n, m))
        seen: set = set()
        for tile in ts.tiles():
            sites = set(tile.sites())
            if len(sites) != m ** d or seen & sites:
                failures.append(("tiling_disjoint", d, n, m))
            seen |= sites
        if seen != set(Cube(d, (n // m) * m).sites()):
            failures.append(("tiling_union", d, n, m))
    return not failures, {"failures": failures[:5], "cases": cases}


def _random_spec(rng) -> FieldSpec:
    kind = int(rng.integers(0, 3))
    seed = int(rng.integers(0, 2 ** 62))
    if kind == 0:
        return FieldSpec(Marginal.uniform(0.0, 1.0), 0, seed)
    if kind == 1:
        return FieldSpec(Marginal.bernoulli(float(rng.uniform(0.2, 0.8))),
                         0, seed)
    return FieldSpec(Marginal.uniform(0.0, 1.0), 1, seed)


def check_evcf_properties(seed: int, cases: int = 100,
                          eig_tol: float = 1e-8) -> tuple[bool, dict]:
    """Translation covariance, locality, almost additivity, normalization,
    monotonicity, and eigenvalue Lipschitz continuity on random cubes."""
    rng = np.random.default_rng(seed)
    failures = []
    for case in range(cases):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, 7 - (d - 1)))
        spec = _random_spec(rng)
        cube = Cube(d, n)
        z = tuple(int(c) for c in rng.integers(-3, 4, d))
        shifted = cube.translate(z)
        omega = sample(spec, shifted.sites())

        # translation covariance, exact
        f1 = evcf(shifted.sites(), omega)
        f2 = evcf(cube.sites(), translate(omega, z))
        if sup_norm_distance(f1, f2) != 0.0:
            failures.append(("translation", case))

        # locality: values outside the cube are irrelevant
        omega0 = sample(spec, cube.sites())
        far = (99,) * d
        padded = PotentialSample(omega0.sites + (far,),
                                 {**omega0.values, far: 123.0}, spec)
        h_a = assemble(cube.sites(), omega0)
        h_b = assemble(cube.sites(), padded)
        if not (np.array_equal(h_a.diag, h_b.diag)
                and np.array_equal(h_a.rows, h_b.rows)
                and np.array_equal(h_a.cols, h_b.cols)):
            failures.append(("locality", case))

        # single-site normalization and monotonicity
        single = evcf([(0,) * d], omega0)
        if single.final_value != 1.0 or single.base != 0.0:
            failures.append(("normalization", case))
        full = evcf(cube.sites(), omega0)
        steps = np.diff(np.concatenate(([full.base], full.values)))
        if not np.all(steps >= 0):
            failures.append(("monotone", case))

        # eigenvalue Lipschitz continuity in the potential, and the
        # diagonal structure of the operator difference
        omega2 = sample(spec.with_seed(derive_seed(spec.seed, 7)),
                        cube.sites())
        h1, h2 = assemble(cube.sites(), omega0), assemble(cube.sites(), omega2)
        diff = h1.dense() - h2.dense()
        if np.abs(diff - np.diag(np.diag(diff))).max() != 0.0:
            failures.append(("diff_diagonal", case))
        lam1, lam2 = eigenvalues(h1), eigenvalues(h2)
        inf_dist = float(np.abs(h1.diag - h2.diag).max())
        if np.abs(lam1 - lam2).max() > inf_dist + eig_tol:
            failures.append(("lipschitz", case))

    # almost additivity over a full tiling partition of a cube
    for case in range(max(1, cases // 4)):
        d = int(rng.integers(1, 4))
        m = int(rng.integers(1, 3))
        k = int(rng.integers(2, 4))
        n = k * m
        spec = _random_spec(rng)
        cube = Cube(d, n)
        omega = sample(spec, cube.sites())
        tiles = [Cube(d, m, off) for off in
                 itertools.product(*[range(0, n, m)] * d)]
        whole = evcf(cube.sites(), omega)
        parts = [evcf(t.sites(), omega) for t in tiles]
        summed = average(parts).scaled(float(len(parts)))
        budget = sum(b_function(t) for t in tiles)
        if sup_norm_distance(whole, summed) > budget + 1e-9:
            failures.append(("additivity", case))
    return not failures, {"failures": failures[:5], "cases": cases}


def check_brackets(seed: int, S: int = 2000, S2: int = 2000) -> tuple[bool, dict]:
    """Bracketing-cover invariants for the single-site uniform block."""
    spec = FieldSpec(Marginal.uniform(0.0, 1.0), 0, seed)
    phi = empirical.empirical_phi(spec, d=1, m=1, r=0, S=S)
    covers = empirical.build_bracketing(phi, q_max=4)
    failures = []
    for cover in covers:
        if cover.cell_count != 2 ** (2 * cover.level):
            failures.append(("count", cover.level))
    for coarse, fine in zip(covers, covers[1:]):
        if not np.array_equal(coarse.grid, fine.grid[::4]):
            failures.append(("nesting", coarse.level))
    stats = empirical.verify_bracketing(covers, spec, 1, 1, 0, S2,
                                        seed=derive_seed(seed, 11))
    slack = 3.0 / math.sqrt(S2)
    for st in stats:
        if not st.monotone_ok:
            failures.append(("monotone", st.level))
        if np.any(st.mass > 2.0 ** (-2 * st.level) + slack):
            failures.append(("cell_mass", st.level))
    return not failures, {"failures": failures}


def check_orlicz(seed: int) -> tuple[bool, dict]:
    """Norm closed forms, scaling, and both norm-vs-tail implications."""
    failures = []
    psi12 = orlicz.OrliczSpec("psi", p=1, M=2)
    const = np.full(500, 3.0)
    val = orlicz.orlicz_norm(const, psi12)
    if abs(val - 3.0 / math.log(2.0)) > 1e-6 * val:
        failures.append(("psi_constant", val))
    val = orlicz.orlicz_norm(const, orlicz.OrliczSpec("power", p=3))
    if abs(val - 3.0) > 1e-6 * 3.0:
        failures.append(("power_constant", val))

    rng = np.random.default_rng(seed)
    expo = rng.exponential(1.0, size=20_000)
    norm = orlicz.orlicz_norm(expo, psi12)
    scaled = orlicz.orlicz_norm(3.0 * expo, psi12)
    if abs(scaled - 3.0 * norm) > 1e-6 * scaled:
        failures.append(("homogeneity", norm, scaled))
    # tail domination holds on the sample itself at D = norm (Markov)
    if orlicz.orlicz_tail_check(expo, psi12, max(norm, 1e-12)) != 0:
        failures.append(("tail_at_norm",))
    # exponential-moment cap: mean exp(|X|/D) = B forces
    # norm <= D (B + M - 1)/(M - 1); deterministic on the sample
    D = 2.0
    B = float(np.mean(np.exp(expo / D)))
    cap = D * (B + 1.0)
    if norm > cap * (1.0 + 1e-8):
        failures.append(("moment_cap", norm, cap))
    return not failures, {"failures": failures}


def check_bernstein_massart(seed: int, R: int = 20_000) -> tuple[bool, dict]:
    s = 256
    bern = bernstein_trial(s, R, [math.sqrt(s), 2.0 * math.sqrt(s)],
                           derive_seed(seed, 21))
    mass = massart_trial(s=128, T=64, R=R, etas=[0.5, 1.0, 2.0],
                         seed=derive_seed(seed, 22))
    failures = [("bernstein", t.threshold, t.freq, t.bound)
                for t in bern if not t.ok]
    failures += [("massart", t.threshold, t.freq, t.bound)
                 for t in mass if not t.ok]
    return not failures, {"failures": failures}


SUITES = {
    "geometry": check_geometry,
    "properties": check_evcf_properties,
    "brackets": check_brackets,
    "orlicz": check_orlicz,
    "bernstein_massart": check_bernstein_massart,
}


def run_suites(seed: int, names=None) -> dict:
    results = {}
    for i, name in enumerate(names or SUITES):
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        ok, details = SUITES[name](derive_seed(seed, 100 + i))
        results[name] = {"ok": ok, **details}
    return results
