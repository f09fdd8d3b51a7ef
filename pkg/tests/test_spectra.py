import io
import itertools

import numpy as np
import pytest

from idsconc.lattice import Cube
from idsconc.operators import SolverSizeError, assemble
from idsconc.random_field import FieldSpec, Marginal, sample
from idsconc.spectra import (StepFunction, average, count_below,
                             count_below_from_eigenvalues, eigenvalues, evcf,
                             normalized_evcf, step_from_eigenvalues,
                             sup_norm_distance)


def _step(bp, vals, base=0.0):
    return StepFunction(np.asarray(bp, float), np.asarray(vals, float),
                        base, monotone=True)


# ---------------------------------------------------------------------------
# StepFunction


def test_step_function_evaluation_right_continuous():
    f = _step([1.0, 2.0], [0.5, 1.0])
    assert f(0.0) == 0.0
    assert f(1.0) == 0.5        # right-continuous at the jump
    assert f(1.5) == 0.5
    assert f(2.0) == 1.0
    assert f.left_limit(1.0) == 0.0
    assert f.left_limit(2.0) == 0.5
    assert f.final_value == 1.0


def test_step_function_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        StepFunction(np.array([2.0, 1.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        StepFunction(np.array([1.0]), np.array([0.0, 1.0]))


def test_step_function_transforms():
    f = _step([0.0, 1.0], [0.4, 1.0])
    assert f.scaled(2.0)(0.5) == 0.8
    assert f.shifted_values(0.1)(0.5) == 0.5
    assert f.shifted_values(0.7).clipped(0.0, 1.0)(1.0) == 1.0


def test_step_function_json_roundtrip():
    f = _step([0.0, 1.5], [0.25, 1.0], base=0.0)
    g = StepFunction.from_json_dict(f.to_json_dict())
    assert np.array_equal(f.breakpoints, g.breakpoints)
    assert np.array_equal(f.values, g.values)
    assert f.base == g.base


def test_step_function_csv():
    buf = io.StringIO()
    _step([1.0, 2.0], [0.5, 1.0]).write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,value"
    assert lines[1].startswith("1.0,")


# ---------------------------------------------------------------------------
# eigensolves and counting


def test_eigenvalues_free_laplacian_1d():
    # zero potential: eigenvalues 2 + 2 cos(pi k / (n+1)) ... known closed
    # form 4 sin^2(pi k / (2(n+1)))
    n = 12
    sites = Cube(1, n).sites()
    spec = FieldSpec(Marginal.uniform(0.0, 0.0), 0, 1)
    op = assemble(sites, sample(spec, sites))
    evals = eigenvalues(op)
    k = np.arange(1, n + 1)
    expected = 4.0 * np.sin(np.pi * k / (2 * (n + 1))) ** 2
    assert np.allclose(np.sort(evals), np.sort(expected), atol=1e-10)


def test_eigenvalues_free_laplacian_2d_tensor():
    n = 4
    sites = Cube(2, n).sites()
    spec = FieldSpec(Marginal.uniform(0.0, 0.0), 0, 1)
    evals = eigenvalues(assemble(sites, sample(spec, sites)))
    one_d = 4.0 * np.sin(np.pi * np.arange(1, n + 1) / (2 * (n + 1))) ** 2
    expected = np.sort([a + b for a, b in itertools.product(one_d, one_d)])
    assert np.allclose(np.sort(evals), expected, atol=1e-10)


def test_eigenvalue_count_and_range():
    sites = Cube(3, 3).sites()
    spec = FieldSpec(Marginal.uniform(), 0, 4)
    op = assemble(sites, sample(spec, sites))
    evals = eigenvalues(op)
    assert evals.size == 27
    lo, hi = op.gershgorin_interval()
    assert np.all((evals >= lo - 1e-12) & (evals <= hi + 1e-12))


def test_dense_size_limit():
    spec = FieldSpec(Marginal.uniform(), 0, 1)
    sites = Cube(3, 24).sites()  # 13824 > 10000
    op = assemble(sites, sample(spec, sites))
    with pytest.raises(SolverSizeError):
        eigenvalues(op)


def test_count_below_matches_eigenvalues():
    spec = FieldSpec(Marginal.uniform(), 0, 6)
    sites = Cube(1, 40).sites()
    op = assemble(sites, sample(spec, sites))
    evals = eigenvalues(op)
    mids = 0.5 * (evals[:-1] + evals[1:])
    for i, x in enumerate(mids):
        assert count_below(op, float(x)) == i + 1
    assert count_below_from_eigenvalues(evals, mids[5]) == 6


# ---------------------------------------------------------------------------
# evcf and sup-norm


def test_evcf_counts_multiplicity():
    f = step_from_eigenvalues(np.array([1.0, 1.0, 2.0]))
    assert f(0.9) == 0.0 and f(1.0) == 2.0 and f(2.0) == 3.0


def test_evcf_single_site():
    spec = FieldSpec(Marginal.uniform(), 0, 5)
    omega = sample(spec, [(0,)])
    f = evcf([(0,)], omega)
    lam = 2.0 + omega.values[(0,)]
    assert f(lam - 1e-12) == 0.0 and f(lam) == 1.0


def test_normalized_evcf_preconditions():
    spec = FieldSpec(Marginal.uniform(), 0, 5)
    omega = sample(spec, [(0,), (1,)])
    with pytest.raises(ValueError):
        normalized_evcf([], omega, 1.0)
    with pytest.raises(ValueError):
        normalized_evcf([(0,), (1,)], omega, 1.0)
    f = normalized_evcf([(0,), (1,)], omega, 4.0)
    assert f.final_value == 0.5


def test_sup_norm_exact_simple_cases():
    f = _step([0.0], [1.0])
    g = _step([0.5], [1.0])
    # f jumps at 0, g at 0.5: on [0, 0.5) the gap is 1
    assert sup_norm_distance(f, g) == 1.0
    assert sup_norm_distance(f, f) == 0.0
    h = _step([0.0], [0.25])
    assert sup_norm_distance(f, h) == 0.75


def test_sup_norm_requires_monotone():
    f = StepFunction(np.array([0.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        sup_norm_distance(f, f)


def test_sup_norm_matches_dense_grid_oracle():
    rng = np.random.default_rng(8)
    for _ in range(40):
        a = np.sort(rng.uniform(0, 1, rng.integers(1, 12)))
        b = np.sort(rng.uniform(0, 1, rng.integers(1, 12)))
        f = _step(np.unique(a), np.linspace(0.2, 1, np.unique(a).size))
        g = _step(np.unique(b), np.linspace(0.1, 1, np.unique(b).size))
        exact = sup_norm_distance(f, g)
        # oracle: evaluate on all breakpoints and left limits
        pts = np.unique(np.concatenate([f.breakpoints, g.breakpoints]))
        cand = np.abs(f(pts) - g(pts)).max()
        cand = max(cand, np.abs(f.left_limit(pts) - g.left_limit(pts)).max())
        assert exact == pytest.approx(cand, abs=0.0)


def test_sup_norm_constant_function():
    f = StepFunction(np.array([]), np.array([]), base=0.3, monotone=True)
    g = _step([0.0, 1.0], [0.5, 1.0], base=0.1)
    assert sup_norm_distance(f, g) == 0.7
    assert sup_norm_distance(g, f) == 0.7


def test_average_is_pointwise_mean():
    f = _step([0.0, 1.0], [0.5, 1.0])
    g = _step([0.5], [1.0])
    avg = average([f, g])
    for x in [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0]:
        assert avg(x) == pytest.approx(0.5 * (f(x) + g(x)), abs=1e-15)
    assert avg.monotone


def test_average_weights():
    f = _step([0.0], [1.0])
    g = _step([1.0], [1.0])
    avg = average([f, g], weights=[0.75, 0.25])
    assert avg(0.5) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        average([f, g], weights=[0.5, 0.6])
    with pytest.raises(ValueError):
        average([])
