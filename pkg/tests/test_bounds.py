import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmac.bounds import (BoundsReport, DomainError, Inapplicable, Relaxed,
                         Strict, binomial, central_binomial_inequality_holds,
                         construction_applicability, construction_threshold,
                         g_upper_bound, min_m_for, n0_bounds, threshold_ceil,
                         threshold_floor)


# -- binomial -----------------------------------------------------------------

def test_binomial_values():
    assert binomial(4, 2) == 6
    assert binomial(8, 4) == 70
    assert all(binomial(m, 0) == 1 for m in range(0, 20))
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    with pytest.raises(ValueError):
        binomial(-1, 0)


# -- central binomial inequality ------------------------------------------------

def test_central_binomial_examples():
    assert central_binomial_inequality_holds(1)
    assert central_binomial_inequality_holds(4)
    assert central_binomial_inequality_holds(10)


def test_central_binomial_all_small_m():
    assert all(central_binomial_inequality_holds(m) for m in range(1, 61))


def test_central_binomial_rejects_zero():
    with pytest.raises(ValueError):
        central_binomial_inequality_holds(0)


# -- min_m_for --------------------------------------------------------------------

def test_min_m_for_examples():
    assert min_m_for(1) == 1
    assert min_m_for(4) == 4
    assert min_m_for(10) == 5
    assert min_m_for(12) == 6
    assert min_m_for(70) == 8


def test_min_m_for_is_least():
    for K in (2, 4, 10, 70, 1000):
        m = min_m_for(K)
        assert binomial(m, m // 2) >= K
        if m > 1:
            assert binomial(m - 1, (m - 1) // 2) < K


def test_min_m_for_nondecreasing():
    vals = [min_m_for(K) for K in range(1, 3000)]
    assert vals == sorted(vals)


def test_min_m_for_formula_bound_sample():
    for K in (4, 5, 16, 100, 12345, 10 ** 6):
        bound = math.ceil(math.log2(K) + 0.5 * math.log2(math.log2(K)) + 2)
        assert min_m_for(K) <= bound


# -- g_upper_bound ------------------------------------------------------------------

def test_g_upper_examples():
    assert g_upper_bound(4, 2) == 1
    assert g_upper_bound(10, 4) == 6
    assert g_upper_bound(8, 3) == 5


def test_g_upper_window_edges():
    assert g_upper_bound(7, 4) == 3          # n = r+3
    assert g_upper_bound(10, 4) == 6         # n = 2r+2
    assert g_upper_bound(11, 4) == 8         # just outside the window
    assert g_upper_bound(6, 4) == 3          # below the window: n-3
    assert g_upper_bound(9, 3) == 6          # r=3 never enters the window


def test_g_upper_domain():
    with pytest.raises(DomainError):
        g_upper_bound(3, 2)
    with pytest.raises(DomainError):
        g_upper_bound(5, 1)


# -- n0 bounds -------------------------------------------------------------------------

def test_n0_bounds_r2():
    rep = n0_bounds(2)
    assert (rep.n0_exact, rep.n0_lower, rep.n0_upper) == (3, 3, 21)


def test_n0_bounds_r3():
    rep = n0_bounds(3)
    assert (rep.n0_exact, rep.n0_lower, rep.n0_upper) == (8, 8, 24)


def test_n0_bounds_r4():
    rep = n0_bounds(4)
    assert rep.n0_exact is None
    assert (rep.n0_lower, rep.n0_upper) == (10, 28)


def test_n0_bounds_with_n_fills_g_upper():
    rep = n0_bounds(3, n=8)
    assert rep.g_upper == 5
    assert "g_upper" in rep.notes


def test_n0_bounds_lower_strictly_below_upper_for_large_r():
    for r in range(4, 65):
        rep = n0_bounds(r)
        assert rep.n0_lower == 2 * r + 2
        assert rep.n0_lower < rep.n0_upper


def test_n0_bounds_domain():
    with pytest.raises(DomainError):
        n0_bounds(1)


def test_bounds_report_invariants_enforced():
    with pytest.raises(ValueError):
        BoundsReport(2, None, None, 10, 5, None)
    with pytest.raises(ValueError):
        BoundsReport(2, None, None, 3, 21, 2)


def test_report_to_dict_fields():
    d = n0_bounds(5, n=20).to_dict()
    assert set(d) == {"r", "n", "g_upper", "n0_lower", "n0_upper", "n0_exact", "notes"}


# -- threshold floor/ceil -------------------------------------------------------------

def test_threshold_integral_cases():
    # 2*log2(r) + log2(log2(r)) is integral exactly at r = 2, 4, 16, 256
    assert threshold_floor(2) == 21 and threshold_ceil(2) == 21
    assert threshold_floor(4) == 28 and threshold_ceil(4) == 28
    assert threshold_floor(16) == 57 and threshold_ceil(16) == 57


def test_threshold_floor_ceil_consistency():
    for r in range(2, 4097):
        x = construction_threshold(r)
        fl, ce = threshold_floor(r), threshold_ceil(r)
        assert fl <= x <= ce
        assert ce - fl in (0, 1)


# -- construction applicability ---------------------------------------------------------

def test_applicability_strict_at_21_2():
    assert isinstance(construction_applicability(21, 2), Strict)


def test_applicability_examples():
    app = construction_applicability(13, 4)
    assert isinstance(app, Inapplicable)
    assert "k >= r+m+1" in app.reason
    assert isinstance(construction_applicability(8, 3), Inapplicable)


def test_applicability_relaxed_tier():
    app = construction_applicability(16, 2)
    assert isinstance(app, Relaxed)
    assert app.facts["k"] == 8 and app.facts["m"] == 5


def test_applicability_facts_on_strict():
    app = construction_applicability(25, 3)
    assert isinstance(app, Strict)
    assert app.facts == {"k": 12, "m": 6, "ell": 3, "reserve": 13}


def test_applicability_domain():
    with pytest.raises(DomainError):
        construction_applicability(10, 1)


@given(st.integers(min_value=2, max_value=40))
@settings(max_examples=39)
def test_strict_iff_threshold(r):
    thr = threshold_ceil(r)
    assert isinstance(construction_applicability(thr, r), Strict)
    below = construction_applicability(thr - 1, r)
    assert not isinstance(below, Strict)
