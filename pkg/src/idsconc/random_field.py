"""Seeded stationary random potentials with finite-range correlations.

Randomness is counter-based: the value at a site is a pure function of
(seed, site coordinates) via a splitmix64 hash chain, so queries are
reproducible under any evaluation order or parallel schedule, and
overlapping site sets always agree exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lattice import Site

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = (x + _GOLDEN).astype(np.uint64)
        x = ((x ^ (x >> _U64(30))) * _MIX1).astype(np.uint64)
        x = ((x ^ (x >> _U64(27))) * _MIX2).astype(np.uint64)
        return x ^ (x >> _U64(31))


def derive_seed(seed: int, *indices: int) -> int:
    """Deterministic child seed from a master seed and integer tags."""
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    for idx in indices:
        with np.errstate(over="ignore"):
            state = _splitmix64(state ^ np.uint64(idx & 0xFFFFFFFFFFFFFFFF))
    return int(state)


def site_uniforms(seed: int, sites) -> np.ndarray:
    """Uniform(0,1) variates addressed by site, vectorized over sites."""
    coords = np.asarray(sites, dtype=np.int64)
    if coords.ndim == 1:
        coords = coords[:, None]
    state = np.full(len(coords), seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for j in range(coords.shape[1]):
            state = _splitmix64(state ^ coords[:, j].view(np.uint64))
        state = _splitmix64(state)
    return (state >> _U64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class Marginal:
    """Single-site distribution with bounded support."""

    kind: str  # "uniform" | "bernoulli" | "discrete"
    params: tuple = ()

    @staticmethod
    def uniform(low: float = 0.0, high: float = 1.0) -> "Marginal":
        if not high >= low:
            raise ValueError("uniform requires high >= low")
        return Marginal("uniform", (float(low), float(high)))

    @staticmethod
    def bernoulli(p: float, v0: float = 0.0, v1: float = 1.0) -> "Marginal":
        if not 0.0 <= p <= 1.0:
            raise ValueError("bernoulli requires p in [0, 1]")
        return Marginal("bernoulli", (float(p), float(v0), float(v1)))

    @staticmethod
    def discrete(atoms) -> "Marginal":
        """atoms: sequence of (value, weight); weights normalized here."""
        atoms = tuple((float(v), float(w)) for v, w in atoms)
        total = sum(w for _, w in atoms)
        if total <= 0:
            raise ValueError("discrete marginal needs positive total weight")
        return Marginal("discrete", tuple((v, w / total) for v, w in atoms))

    def draw(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "uniform":
            low, high = self.params
            return low + (high - low) * u
        if self.kind == "bernoulli":
            p, v0, v1 = self.params
            return np.where(u < p, v1, v0)
        if self.kind == "discrete":
            values = np.array([v for v, _ in self.params])
            cdf = np.cumsum([w for _, w in self.params])
            idx = np.searchsorted(cdf, u, side="right")
            return values[np.minimum(idx, len(values) - 1)]
        raise ValueError(f"unsupported marginal kind {self.kind!r}")

    def support(self) -> tuple[float, float]:
        if self.kind == "uniform":
            return self.params[0], self.params[1]
        if self.kind == "bernoulli":
            _, v0, v1 = self.params
            return min(v0, v1), max(v0, v1)
        values = [v for v, _ in self.params]
        return min(values), max(values)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}

    @staticmethod
    def from_dict(d: dict) -> "Marginal":
        params = [tuple(p) if isinstance(p, list) else p for p in d["params"]]
        return Marginal(d["kind"], tuple(params))


@dataclass(frozen=True)
class FieldSpec:
    """Stationary field: marginal, moving-average radius rho, master seed.

    rho = 0 gives an i.i.d. field; rho > 0 averages auxiliary i.i.d.
    variables over the l1 ball of radius rho, so sets farther apart than
    2*rho share no auxiliaries (independence radius r = 2*rho).
    """

    marginal: Marginal = field(default_factory=Marginal.uniform)
    rho: int = 0
    seed: int = 0

    @property
    def independence_radius(self) -> int:
        return 2 * self.rho

    def with_seed(self, seed: int) -> "FieldSpec":
        return FieldSpec(self.marginal, self.rho, seed)

    def to_dict(self) -> dict:
        return {"marginal": self.marginal.to_dict(),
                "rho": self.rho, "seed": self.seed}

    @staticmethod
    def from_dict(d: dict) -> "FieldSpec":
        return FieldSpec(Marginal.from_dict(d["marginal"]),
                         int(d.get("rho", 0)), int(d.get("seed", 0)))


@dataclass(frozen=True)
class PotentialSample:
    """A realization restricted to a finite site set."""

    sites: tuple[Site, ...]
    values: dict
    spec: FieldSpec

    def value(self, site: Site) -> float:
        return self.values[site]

    def array_for(self, sites) -> np.ndarray:
        return np.array([self.values[s] for s in sites])

    def infnorm_distance(self, other: "PotentialSample") -> float:
        common = set(self.sites) & set(other.sites)
        return max(abs(self.values[s] - other.values[s]) for s in common)


def _l1_ball_offsets(dim: int, rho: int) -> list[Site]:
    out = []
    for off in itertools.product(range(-rho, rho + 1), repeat=dim):
        if sum(abs(c) for c in off) <= rho:
            out.append(off)
    return out


def sample(spec: FieldSpec, sites) -> PotentialSample:
    """Draw the field at the given finite site set."""
    sites = tuple(tuple(int(c) for c in s) for s in sites)
    if not sites:
        return PotentialSample((), {}, spec)
    dim = len(sites[0])
    if spec.rho == 0:
        vals = spec.marginal.draw(site_uniforms(spec.seed, sites))
        return PotentialSample(sites, dict(zip(sites, map(float, vals))), spec)
    offsets = _l1_ball_offsets(dim, spec.rho)
    aux_sites = sorted({tuple(c + o for c, o in zip(s, off))
                        for s in sites for off in offsets})
    aux_vals = dict(zip(aux_sites,
                        spec.marginal.draw(site_uniforms(spec.seed, aux_sites))))
    values = {}
    for s in sites:
        window = [aux_vals[tuple(c + o for c, o in zip(s, off))]
                  for off in offsets]
        values[s] = float(np.mean(window))
    return PotentialSample(sites, values, spec)


def translate(omega: PotentialSample, z: Site) -> PotentialSample:
    """(gamma_z omega)_y = omega_{y+z}: shifts the sample's index set by -z."""
    if omega.sites and len(z) != len(omega.sites[0]):
        raise ValueError("dimension mismatch in translate")
    z = tuple(int(c) for c in z)
    shifted = {tuple(c - dz for c, dz in zip(s, z)): v
               for s, v in omega.values.items()}
    sites = tuple(tuple(c - dz for c, dz in zip(s, z)) for s in omega.sites)
    return PotentialSample(sites, shifted, omega.spec)


def project(omega: PotentialSample, sites) -> PotentialSample:
    """Restriction of the value map to a subset of the sample's sites."""
    sites = tuple(tuple(int(c) for c in s) for s in sites)
    missing = [s for s in sites if s not in omega.values]
    if missing:
        raise KeyError(f"projection target not covered, e.g. {missing[0]}")
    return PotentialSample(sites, {s: omega.values[s] for s in sites},
                           omega.spec)
