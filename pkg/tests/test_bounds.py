import math

import pytest

from idsconc import bounds


# frozen oracle values, computed once with independent high-precision
# summation / bisection and pinned here
SERIES_ORACLE = 3.562329639335835
K2_ORACLE = 1074.851732053145


def test_chaining_series_value_and_tail():
    partial, tail = bounds.chaining_series_with_tail()
    assert partial == pytest.approx(SERIES_ORACLE, abs=1e-12)
    assert 0 < tail < 1e-15
    assert bounds.chaining_series() == partial
    # the certified tail really bounds the dropped terms
    p10, t10 = bounds.chaining_series_with_tail(10)
    assert partial - p10 <= t10


def test_k_m_value_and_cap():
    k2 = bounds.k_M(2.0)
    assert k2 == pytest.approx(K2_ORACLE, rel=1e-12)
    assert 1074 < k2 < 1076
    assert k2 < bounds.k_M_cap(2.0)
    assert bounds.k_M_cap(2.0) == pytest.approx(bounds.K_THEOREM1, rel=1e-12)
    assert bounds.K_THEOREM1 == pytest.approx(480 / math.log(1.5)
                                              + 16 / math.log(2), rel=1e-15)
    assert bounds.K_THEOREM1 < 1207
    with pytest.raises(ValueError):
        bounds.k_M(1.5)


def test_k_m_decreasing_in_M():
    assert bounds.k_M(2.0) > bounds.k_M(3.0) > bounds.k_M(10.0)


def test_theorem1_C():
    assert bounds.theorem1_C(1) == 197
    assert bounds.theorem1_C(2) == 445
    assert bounds.theorem1_C(3) == 901


def test_integer_root_exact():
    assert bounds.integer_root(8, 3) == 2
    assert bounds.integer_root(7, 3) == 1
    assert bounds.integer_root(10 ** 6, 2) == 1000
    assert bounds.integer_root(10 ** 6 - 1, 2) == 999
    assert bounds.integer_root(0, 5) == 0
    # values where float rounding of n**(1/k) is wrong
    assert bounds.integer_root(10 ** 18, 2) == 10 ** 9
    assert bounds.integer_root((10 ** 6 + 1) ** 3 - 1, 3) == 10 ** 6
    with pytest.raises(ValueError):
        bounds.integer_root(-1, 2)


def test_geometric_bound_terms():
    rep = bounds.geometric_bound(1, 4000, 10, 0)
    assert rep.terms["volume"] == pytest.approx(32 / 4000)
    assert rep.terms["frame"] == pytest.approx(104 * 1 * 10 / 4000)
    assert rep.terms["tile_boundary"] == pytest.approx(4 / 10)
    assert rep.total == pytest.approx(0.668)
    assert rep.valid


def test_geometric_bound_side_conditions_flag_not_raise():
    rep = bounds.geometric_bound(1, 40, 10, 0)
    assert not rep.valid
    assert rep.side_conditions == {"n > 4m": False, "m > 2r+1": True}


def test_decomposition_bound_dominated_by_explicit():
    for d in (1, 2, 3):
        for n in range(5, 120, 7):
            for m in range(1, n // 4):
                for r in range(0, (m - 1) // 2 + 1):
                    if not (n > 4 * m and m > 2 * r + 1):
                        continue
                    dec = bounds.decomposition_bound(d, n, m, r).total
                    exp = bounds.geometric_bound(d, n, m, r).total
                    assert dec <= exp + 1e-12, (d, n, m, r)


def test_decomposition_bound_preconditions():
    with pytest.raises(ValueError):
        bounds.decomposition_bound(1, 20, 10, 0)
    with pytest.raises(ValueError):
        bounds.decomposition_bound(1, 50, 3, 1)


def test_expectation_convergence_bound():
    assert bounds.expectation_convergence_bound(1, 100, 0) == pytest.approx(0.04)
    # d=3, r=1: (12 + 14 + 108)/n
    assert bounds.expectation_convergence_bound(3, 100, 1) == \
        pytest.approx(134 / 100)
    with pytest.raises(ValueError):
        bounds.expectation_convergence_bound(1, 3, 1)


def test_dimension_k():
    assert [bounds.dimension_k(d, "thm2") for d in (1, 2, 3, 4, 5)] == \
        [4, 3, 2, 2, 2]
    assert [bounds.dimension_k(d, "thm3") for d in (1, 2, 3, 4, 5, 6)] == \
        [6, 4, 3, 3, 2, 2]
    with pytest.raises(ValueError):
        bounds.dimension_k(1, "other")


def test_thm2_error_bound_large_n():
    rep = bounds.thm2_error_bound(3, 10 ** 6, 0, 2)
    expected = (96 / 10 ** 6) + 104 * 7 / 10 ** 3 + 25 / (10 ** 3 - 1)
    assert rep.total == pytest.approx(expected, rel=1e-12)
    assert rep.total < 1.0
    assert rep.valid


def test_thm2_probability_floor_semantics():
    rep = bounds.thm2_probability(3, 10 ** 6, 2.0, 2)
    assert rep.terms["block_side"] == 1000
    assert rep.terms["block_count"] == 1000 ** 3
    expected = math.sqrt(1000.0 ** 3) / (1000 * bounds.k_M(2.0))
    assert rep.terms["exponent"] == pytest.approx(expected, rel=1e-12)
    assert rep.extra["vacuous"] == (rep.total < 0)
    with pytest.raises(ValueError):
        bounds.thm2_probability(1, 10, 2.0, 2)


def test_thm1_min_side():
    rep = bounds.thm1_min_side(3, 0.05, 0.1)
    assert rep.extra["C"] == 901
    assert rep.terms["accuracy"] == pytest.approx((901 / 0.1 + 1) ** 2)
    conf = ((math.log(2 / 0.05) * bounds.K_THEOREM1) ** 2 + 1) ** 2
    assert rep.terms["confidence"] == pytest.approx(conf, rel=1e-12)
    assert rep.total == max(rep.terms.values())
    # headline scale: astronomically large, and honest about it
    assert rep.total > 1e13
    with pytest.raises(ValueError):
        bounds.thm1_min_side(2, 0.05, 0.1)
    with pytest.raises(ValueError):
        bounds.thm1_min_side(3, 0.0, 0.1)


def test_thm3_probability():
    rep = bounds.thm3_probability(3, 10 ** 6, 0, 3)
    block = bounds.integer_root(10 ** 6, 3)
    count = (10 ** 6 // block) ** 3
    assert rep.terms["exponent"] == pytest.approx(count / (24.0 * block))
    assert 0 < rep.total <= 1  # exponent so large the tail underflows
    with pytest.raises(ValueError):
        bounds.thm3_probability(3, 10 ** 6, 0, 2)  # dk - d - 4 <= 0


def test_cor59_probability():
    val = bounds.cor59_probability(100, 0.5, 2.0)
    assert val == pytest.approx(2 * math.exp(-10 * 0.5 / bounds.k_M(2.0)))
    with pytest.raises(ValueError):
        bounds.cor59_probability(0, 0.5, 2.0)


def test_cor511_probability_thresholds_and_overflow():
    rep = bounds.cor511_probability(100, 0.5)
    # tiny s: all side conditions fail, bounds vacuous but finite/reported
    assert not any(rep.side_conditions.values())
    assert rep.total == rep.terms["kappa2_over_24"]
    K2 = bounds.k_M(2.0)
    assert rep.side_conditions["s >= (K2/kappa)^2"] == (100 >= (K2 / 0.5) ** 2)
    # huge exponents must not overflow
    big = bounds.cor511_probability(10 ** 8, 0.01)
    assert math.isinf(big.terms["sharp"]) or big.terms["sharp"] > 0
    with pytest.raises(ValueError):
        bounds.cor511_probability(100, 1.5)


def test_bernstein_bound():
    assert bounds.bernstein_bound(1.0, 1.0, 0.0) == 1.0
    val = bounds.bernstein_bound(25.0, 1.0, 10.0)
    assert val == pytest.approx(math.exp(-50.0 / (25.0 + 10.0 / 3.0)))
    with pytest.raises(ValueError):
        bounds.bernstein_bound(0.0, 1.0, 1.0)


def test_massart_threshold():
    thr = bounds.massart_threshold(2.0, 4.0, 1.0, 1.0)
    assert thr == pytest.approx(2.0 + 2.0 * math.sqrt(5.0) + 2.0)
    with pytest.raises(ValueError):
        bounds.massart_threshold(-1.0, 1.0, 1.0, 1.0)


def test_bound_report_serialization():
    rep = bounds.geometric_bound(1, 4000, 10, 0)
    d = rep.to_dict()
    assert d["valid"] and d["total"] == rep.total
    assert set(d["terms"]) == {"volume", "frame", "tile_boundary"}
