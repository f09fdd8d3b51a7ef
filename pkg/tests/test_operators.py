import numpy as np
import pytest

from idsconc.lattice import Cube
from idsconc.operators import SolverSizeError, assemble
from idsconc.random_field import FieldSpec, Marginal, sample


def _omega(d, n, seed=0, origin=None):
    cube = Cube(d, n, origin or ())
    spec = FieldSpec(Marginal.uniform(), 0, seed)
    return cube.sites(), sample(spec, cube.sites())


def test_assemble_diagonal_and_symmetry():
    sites, omega = _omega(2, 3)
    op = assemble(sites, omega)
    h = op.dense()
    assert np.array_equal(h, h.T)
    for i, s in enumerate(op.sites):
        assert h[i, i] == 4.0 + omega.values[s]


def test_assemble_neighbor_structure():
    sites, omega = _omega(2, 2)
    op = assemble(sites, omega)
    h = op.dense()
    # 2x2 cube: 4 edges, each -1
    assert (h == -1.0).sum() == 8
    idx = {s: i for i, s in enumerate(op.sites)}
    assert h[idx[(0, 0)], idx[(0, 1)]] == -1.0
    assert h[idx[(0, 0)], idx[(1, 1)]] == 0.0


def test_assemble_1d_path():
    sites, omega = _omega(1, 6)
    op = assemble(sites, omega)
    assert op.is_tridiagonal
    off = op.offdiag()
    assert np.array_equal(off, -np.ones(5))


def test_assemble_1d_with_gap():
    spec = FieldSpec(Marginal.uniform(), 0, 1)
    sites = [(0,), (1,), (5,), (6,)]
    omega = sample(spec, sites)
    op = assemble(sites, omega)
    # the gap between 1 and 5 breaks the coupling
    assert np.array_equal(op.offdiag(), [-1.0, 0.0, -1.0])


def test_assemble_sorting_is_deterministic():
    spec = FieldSpec(Marginal.uniform(), 0, 1)
    sites = Cube(2, 3).sites()
    omega = sample(spec, sites)
    a = assemble(sites, omega)
    b = assemble(list(reversed(sites)), omega)
    assert a.sites == b.sites
    assert np.array_equal(a.diag, b.diag)
    assert np.array_equal(a.dense(), b.dense())


def test_assemble_requires_coverage():
    spec = FieldSpec(Marginal.uniform(), 0, 1)
    omega = sample(spec, [(0,), (1,)])
    with pytest.raises(KeyError):
        assemble([(0,), (2,)], omega)
    with pytest.raises(ValueError):
        assemble([], omega)


def test_gershgorin_interval_contains_spectrum():
    from idsconc.spectra import eigenvalues
    sites, omega = _omega(2, 4, seed=9)
    op = assemble(sites, omega)
    lo, hi = op.gershgorin_interval()
    evals = eigenvalues(op)
    assert lo <= evals.min() and evals.max() <= hi


def test_dump_coo_roundtrip():
    import io
    sites, omega = _omega(1, 3)
    op = assemble(sites, omega)
    buf = io.StringIO()
    op.dump_coo(buf)
    lines = buf.getvalue().strip().splitlines()
    # 3 diagonal entries + 2 edges
    assert len(lines) == 5
    i, j, v = lines[0].split()
    assert i == j == "1"
    assert float(v) == op.diag[0]


def test_solver_size_error_type():
    assert issubclass(SolverSizeError, Exception)
