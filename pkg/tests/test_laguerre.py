"""Laguerre recurrences, orthonormal function families and the envelope."""

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre, gamma

from heisharm import (
    DomainError,
    bound_envelope,
    breakpoints,
    envelope_values,
    laguerre_norm_constant,
    laguerre_poly,
    normalized_laguerre_table,
    nu,
    orthonormality_defect,
    std_laguerre_fn,
    std_laguerre_table,
)

R = np.array([0.0, 0.3, 1.7, 4.0, 11.5])


def test_poly_low_degree_closed_forms():
    for delta in (0.0, 1.0, 2.5):
        assert np.allclose(laguerre_poly(0, delta, R), 1.0)
        assert np.allclose(laguerre_poly(1, delta, R), 1.0 + delta - R)
        expect2 = 0.5 * (R ** 2 - 2.0 * (delta + 2.0) * R
                         + (delta + 1.0) * (delta + 2.0))
        assert np.allclose(laguerre_poly(2, delta, R), expect2)


@seed(3)
@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=25),
       st.floats(min_value=0.0, max_value=4.0),
       st.floats(min_value=0.0, max_value=60.0))
def test_poly_matches_reference(k, delta, r):
    ours = laguerre_poly(k, delta, r)
    ref = float(eval_genlaguerre(k, delta, r))
    assert ours == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_poly_rejects_bad_params():
    with pytest.raises(DomainError):
        laguerre_poly(-1, 0.0, 1.0)
    with pytest.raises(DomainError):
        laguerre_poly(2, -1.5, 1.0)


def test_std_function_degree_zero():
    for delta in (0.0, 1.0, 3.0):
        expect = R ** (0.5 * delta) * np.exp(-0.5 * R) / np.sqrt(gamma(delta + 1.0))
        assert np.allclose(std_laguerre_fn(0, delta, R), expect)


def test_std_table_consistent_with_fn():
    tab = std_laguerre_table(6, 2.0, R)
    for k in (0, 3, 6):
        assert np.allclose(tab[k], std_laguerre_fn(k, 2.0, R))


def test_orthonormality_defect_small():
    for delta in (0, 1, 2, 3):
        assert orthonormality_defect(40, delta) < 1e-10
    # stays tiny well past the raw-polynomial overflow degree
    assert orthonormality_defect(120, 0) < 1e-9


def test_norm_constant_values():
    assert laguerre_norm_constant(0, 4) == pytest.approx(1.0)
    # C_{2,2}^2 = 2! 1! / 3! = 1/3
    assert laguerre_norm_constant(2, 2) == pytest.approx(np.sqrt(1.0 / 3.0))
    assert laguerre_norm_constant(5, 1) == pytest.approx(1.0)


def test_normalized_table_ground_row():
    r = np.linspace(0.0, 6.0, 50)
    for n, lam in ((1, 0.8), (2, 2.5), (3, 0.1)):
        tab = normalized_laguerre_table(8, lam, n, r)
        assert np.allclose(tab[0], np.exp(-lam * r ** 2 / 4.0), atol=1e-14)


def test_normalized_table_radial_orthogonality():
    # rows are orthogonal against r^(2n-1) dr with weight from the measure
    n, lam, kmax = 2, 1.3, 12
    r = np.linspace(1e-6, 40.0, 20001)
    tab = normalized_laguerre_table(kmax, lam, n, r)
    w = r ** (2 * n - 1)
    g01 = np.trapezoid(tab[0] * tab[1] * w, r)
    g00 = np.trapezoid(tab[0] * tab[0] * w, r)
    assert abs(g01) / g00 < 1e-6


def test_nu_and_breakpoints_scaling():
    assert nu(3, 2) == 16
    b_low = breakpoints(10, 0.5, 1)
    b_high = breakpoints(10, 2.0, 1)
    assert b_low[0] < b_low[1] < b_low[2]
    # each breakpoint scales like lam^(-1/2)
    for lo, hi in zip(b_low, b_high):
        assert lo / hi == pytest.approx(2.0)


def test_bound_envelope_region_tags():
    k, lam, n = 12, 1.0, 1
    b = breakpoints(k, lam, n)
    tags = [bound_envelope(k, lam, n, r, 1.0, 0.05)[0].tag
            for r in (0.5 * b[0], 0.5 * (b[0] + b[1]),
                      0.5 * (b[1] + b[2]), 2.0 * b[2])]
    assert tags == ["core", "oscillatory", "turning", "exponential"]


def test_envelope_values_match_bound_envelope():
    k, lam, n = 7, 0.3, 2
    r = np.array([0.1, 1.0, 5.0, 12.0, 40.0])
    vals = envelope_values(k, lam, n, r, 1.2, 0.06)
    for i, ri in enumerate(r):
        assert vals[i] == pytest.approx(
            bound_envelope(k, lam, n, float(ri), 1.2, 0.06)[1], rel=1e-12)


def test_envelope_origin_finite():
    for n in (1, 2, 3):
        v = envelope_values(5, 1.0, n, np.array([0.0]), 1.0, 0.05)
        assert np.isfinite(v[0]) and v[0] > 0


def test_envelope_rejects_bad_constants():
    with pytest.raises(DomainError):
        envelope_values(3, 1.0, 1, R, -1.0, 0.05)
    with pytest.raises(DomainError):
        envelope_values(3, 0.0, 1, R, 1.0, 0.05)


@seed(5)
@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=60),
       st.floats(min_value=1e-2, max_value=1e2),
       st.integers(min_value=1, max_value=3))
def test_normalized_values_bounded_by_weyl_row(k, lam, n):
    # each row is bounded by its value scale: |C phi| <= C_{k,n} L_k(0) = sqrt(dim)
    r = np.linspace(0.0, 3.0 * np.sqrt(nu(k, n) / lam), 400)
    tab = normalized_laguerre_table(k, lam, n, r)
    cap = np.sqrt(np.exp(
        np.sum(np.log(np.arange(k + 1, k + n)))
        - np.sum(np.log(np.arange(1, n))))) if n > 1 else 1.0
    assert np.max(np.abs(tab[k])) <= cap * (1.0 + 1e-12)
