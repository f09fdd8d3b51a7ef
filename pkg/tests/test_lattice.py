import itertools

import numpy as np
import pytest

from idsconc.lattice import (Cube, b_function, boundary_count,
                             interior_by_enumeration, l1_distance,
                             set_distance, tiling)


def test_l1_distance_basic():
    assert l1_distance((0, 0), (2, -3)) == 5
    assert l1_distance((4,), (4,)) == 0
    with pytest.raises(ValueError):
        l1_distance((0,), (0, 0))


def test_set_distance():
    a = [(0, 0), (1, 0)]
    b = [(3, 0), (5, 5)]
    assert set_distance(a, b) == 2
    with pytest.raises(ValueError):
        set_distance([], a)


def test_cube_sites_and_count():
    cube = Cube(2, 3, (1, -1))
    sites = cube.sites()
    assert len(sites) == cube.site_count == 9
    assert all(cube.contains(s) for s in sites)
    assert not cube.contains((0, 0))
    assert not cube.contains((4, 0))


def test_cube_translate():
    cube = Cube(3, 2).translate((1, 2, 3))
    assert cube.origin == (1, 2, 3)
    assert (1, 2, 3) in cube.sites()


def test_interior_closed_form_matches_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(100):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, 9 - 2 * (d - 1)))
        r = int(rng.integers(0, 4))
        cube = Cube(d, n, tuple(int(z) for z in rng.integers(-4, 4, d)))
        sites = cube.interior_sites(r)
        assert len(sites) == cube.interior_count(r) == max(n - 2 * r, 0) ** d
        assert sites == interior_by_enumeration(cube, r)


def test_interior_cube():
    cube = Cube(2, 5, (1, 1))
    inner = cube.interior_cube(1)
    assert inner.side == 3 and inner.origin == (2, 2)
    assert set(inner.sites()) == set(cube.interior_sites(1))
    with pytest.raises(ValueError):
        cube.interior_cube(3)


def test_boundary_count_1d():
    # side-n segment, r=1: 2 inner + 2 outer sites
    assert boundary_count(Cube(1, 5), 1) == 4
    assert boundary_count(Cube(1, 5), 0) == 0
    # r=2: inner min(4, n), outer 4
    assert boundary_count(Cube(1, 5), 2) == 8


def test_boundary_count_2d_small():
    # 3x3 cube, r=1: inner ring 8, outer ring 12
    assert boundary_count(Cube(2, 3), 1) == 8 + 12


def test_b_function_value_and_cap():
    for d in (1, 2, 3):
        for n in (1, 2, 3, 5):
            cube = Cube(d, n)
            assert b_function(cube) == 8 * (n ** d - max(n - 2, 0) ** d)
            assert b_function(cube) <= 8 * cube.site_count


def test_tiling_partitions_covered_cube():
    for d, m, n in [(1, 3, 10), (2, 2, 7), (3, 1, 4)]:
        ts = tiling(n, m, d)
        assert len(ts) == (n // m) ** d
        assert ts.covered_side == (n // m) * m
        seen = set()
        for tile in ts.tiles():
            sites = set(tile.sites())
            assert len(sites) == m ** d
            assert not seen & sites
            seen |= sites
        assert seen == set(Cube(d, ts.covered_side).sites())


def test_tiling_requires_room():
    with pytest.raises(ValueError):
        tiling(6, 3, 1)


def test_tiling_offsets_are_grid_points():
    ts = tiling(10, 3, 2)
    expected = set(itertools.product(range(0, 9, 3), repeat=2))
    assert set(ts.offsets) == expected
