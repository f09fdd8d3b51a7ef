"""Exact lattice geometry: cubes, l1 distances, boundaries, interiors, tilings.

Sites are integer coordinate tuples.  Cubes are stored as (dim, side, origin)
and only materialize their site lists on demand, since n^d site lists are the
memory bottleneck everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

Site = tuple[int, ...]


def l1_distance(x: Site, y: Site) -> int:
    """l1 distance between two lattice sites."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return sum(abs(a - b) for a, b in zip(x, y))


def set_distance(a, b) -> int:
    """Minimum pairwise l1 distance between two nonempty site sets."""
    a, b = list(a), list(b)
    if not a or not b:
        raise ValueError("set_distance requires nonempty site sets")
    return min(l1_distance(x, y) for x in a for y in b)


@dataclass(frozen=True)
class Cube:
    """Axis-aligned lattice cube {x : origin_i <= x_i < origin_i + side}."""

    dim: int
    side: int
    origin: Site = field(default=())

    def __post_init__(self):
        if self.dim < 1 or self.side < 1:
            raise ValueError("dim and side must be positive")
        origin = self.origin if self.origin else (0,) * self.dim
        if len(origin) != self.dim:
            raise ValueError("origin length must equal dim")
        object.__setattr__(self, "origin", tuple(int(c) for c in origin))

    @property
    def site_count(self) -> int:
        return self.side ** self.dim

    def sites(self) -> list[Site]:
        ranges = [range(o, o + self.side) for o in self.origin]
        return list(itertools.product(*ranges))

    def contains(self, x: Site) -> bool:
        return all(o <= c < o + self.side for o, c in zip(self.origin, x))

    def translate(self, z: Site) -> "Cube":
        return Cube(self.dim, self.side,
                    tuple(o + int(dz) for o, dz in zip(self.origin, z)))

    def distance_to(self, x: Site) -> int:
        """l1 distance from x to the nearest site of the cube (0 if inside)."""
        d = 0
        for o, c in zip(self.origin, x):
            if c < o:
                d += o - c
            elif c > o + self.side - 1:
                d += c - (o + self.side - 1)
        return d

    def interior_count(self, r: int) -> int:
        """|cube^r| in closed form: max(side - 2r, 0)^dim."""
        return max(self.side - 2 * r, 0) ** self.dim

    def interior_sites(self, r: int) -> list[Site]:
        """Sites deeper than r inside the cube (empty when side <= 2r)."""
        if self.side - 2 * r <= 0:
            return []
        ranges = [range(o + r, o + self.side - r) for o in self.origin]
        return list(itertools.product(*ranges))

    def interior_cube(self, r: int) -> "Cube":
        if self.side - 2 * r <= 0:
            raise ValueError(f"empty interior: side {self.side}, r {r}")
        return Cube(self.dim, self.side - 2 * r,
                    tuple(o + r for o in self.origin))


def interior(cube: Cube, r: int) -> list[Site]:
    return cube.interior_sites(r)


def interior_by_enumeration(cube: Cube, r: int) -> list[Site]:
    """Brute-force cross-check of Cube.interior_sites for tests."""
    complement_dist = cube.distance_to  # 0 inside, so compute directly
    out = []
    for x in cube.sites():
        # distance to the complement = 1 + distance to the cube hull from
        # outside; inside a box it is min over axes of distance to the faces
        dist = min(min(c - o, o + cube.side - 1 - c)
                   for o, c in zip(cube.origin, x)) + 1
        if dist > r:
            out.append(x)
    del complement_dist
    return out


def boundary_count(cube: Cube, r: int) -> int:
    """|boundary^r| counting the inner and the outer shell.

    The outer shell is enumerated over the surrounding box of padding r,
    so this is O((side + 2r)^dim); fine at test scale.
    """
    if r <= 0:
        return 0
    inner = cube.site_count - cube.interior_count(r)
    outer = 0
    ranges = [range(o - r, o + cube.side + r) for o in cube.origin]
    for x in itertools.product(*ranges):
        if not cube.contains(x) and cube.distance_to(x) <= r:
            outer += 1
    return inner + outer


def b_function(cube: Cube) -> int:
    """Almost-additivity penalty b = 8 * |cube \\ cube^1|."""
    return 8 * (cube.site_count - cube.interior_count(1))


@dataclass(frozen=True)
class TilingSet:
    """Offsets t with side-m cubes Lambda_m + t packed disjointly in Lambda_n."""

    inner_side: int
    outer: Cube
    offsets: tuple[Site, ...]

    def __len__(self) -> int:
        return len(self.offsets)

    def tiles(self) -> list[Cube]:
        m, d = self.inner_side, self.outer.dim
        return [Cube(d, m, t).translate(self.outer.origin) for t in self.offsets]

    @property
    def covered_side(self) -> int:
        return (self.outer.side // self.inner_side) * self.inner_side


def tiling(n: int, m: int, d: int) -> TilingSet:
    """Offsets of the m-grid whose side-m cubes fit inside the side-n cube."""
    if not 2 * m < n:
        raise ValueError(f"tiling requires 2m < n, got m={m}, n={n}")
    k = n // m
    offsets = tuple(itertools.product(*[range(0, k * m, m)] * d))
    return TilingSet(inner_side=m, outer=Cube(d, n), offsets=offsets)
