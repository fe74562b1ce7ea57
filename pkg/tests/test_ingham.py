"""Factor plans, chain products, decay certification and ball geometry."""

import numpy as np
import pytest

from heisharm import (
    DomainError,
    ProfileClassError,
    QuadratureGrid,
    SequencePlan,
    adaptive_N,
    ball_normalizer,
    ball_shift_symmdiff,
    ball_volume,
    box_factor,
    build_chain,
    builtin_theta,
    calibration_grid,
    cauchy_gap,
    chain_coeff,
    chain_coefficients,
    factor_bound_check,
    factor_coeff,
    factor_coeff_envelope,
    factor_coeff_table,
    factor_t_hat,
    forward_radial,
    load_fixture,
    plan_sequences,
    sphere_surface,
    support_radius,
    verify_decay,
)

LENS_TOL = 1e-10


def test_plan_width_formulas():
    theta = builtin_theta("inv-sqrt")
    plan = plan_sequences(theta, 1, J=8, c_n=1.25)
    j = np.arange(1, 9, dtype=float)
    assert np.allclose(plan.rho,
                       1.25 ** 2 * np.e ** 2 * (1.0 + j) ** -0.5 / j + 2.0 ** -j)
    assert np.allclose(plan.tau, 2.0 ** -j)
    assert plan.a == pytest.approx(np.pi ** -0.5)
    assert plan.c == pytest.approx(4.0 ** -0.25)
    assert plan.theta_name == "inv-sqrt"


def test_plan_refuses_divergent_profile():
    with pytest.raises(ProfileClassError):
        plan_sequences(builtin_theta("inv-log"), 1, J=4, c_n=1.0)
    with pytest.raises(DomainError):
        plan_sequences(builtin_theta("inv-sqrt"), 1, J=0, c_n=1.0)


def test_plan_validation():
    good = dict(theta_name="x", declared_class="convergent", n=1, J=3, c_n=1.0)
    with pytest.raises(DomainError):
        SequencePlan(rho=np.array([1.0, 2.0, 3.0]),
                     tau=np.array([1.0, 0.5, 0.25]), **good)
    with pytest.raises(DomainError):
        SequencePlan(rho=np.array([1.0, 0.5]),
                     tau=np.array([1.0, 0.5]), **good)
    with pytest.raises(DomainError):
        SequencePlan(rho=np.array([1.0, 0.5, 0.0]),
                     tau=np.array([1.0, 0.5, 0.25]), **good)


def test_factor_t_hat_values():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=4, c_n=1.0)
    tau1 = plan.tau[0]
    lam = 3.7
    assert factor_t_hat(1, lam, plan) == pytest.approx(
        np.sin(0.5 * tau1 ** 2 * lam) / (0.5 * tau1 ** 2 * lam))
    assert factor_t_hat(1, 1e-9, plan) == pytest.approx(1.0, abs=1e-12)
    assert factor_t_hat(1, 2.0 * np.pi / tau1 ** 2, plan) == pytest.approx(
        0.0, abs=1e-14)
    with pytest.raises(DomainError):
        factor_t_hat(5, 1.0, plan)


def test_factor_coeff_ties_to_forward_transform():
    # a box factor's spectral rows are the scale-invariant unit-ball table at
    # s = lam rho^2 times the interval transform
    rho, tau = 0.8, 0.6
    grid = QuadratureGrid.make(k_max=6, lambda_min=0.5, lambda_max=4.0,
                               lambda_nodes=6)
    vals = forward_radial(box_factor(1, rho, tau), grid).values
    for i, lam in enumerate(grid.lam):
        table = factor_coeff_table(lam * rho ** 2, 6, 1)
        sinc = np.sin(0.5 * tau ** 2 * lam) / (0.5 * tau ** 2 * lam)
        assert np.allclose(vals[:, i], table * sinc, atol=1e-9)
    with pytest.raises(DomainError):
        factor_coeff_table(-1.0, 4, 1)


def test_factor_coeff_matches_table():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=4, c_n=1.2)
    lam, k = 2.5, 3
    s = lam * plan.rho[1] ** 2
    assert factor_coeff(2, k, lam, plan) == pytest.approx(
        float(factor_coeff_table(s, k, 1)[k]), rel=1e-12)
    with pytest.raises(DomainError):
        factor_coeff(2, k, 0.0, plan)


def test_factor_envelope_formula():
    k = np.array([0, 3, 50])
    env = factor_coeff_envelope(k, 2.0, 0.5, 2, 5.1)
    x = 0.5 * np.sqrt((2.0 * k + 2) * 2.0)
    assert np.allclose(env, np.minimum(1.0, 5.1 * x ** -1.5))
    assert factor_coeff_envelope(0, 1e-30, 1.0, 1, 1.3) == 1.0


def test_calibration_grid_shape():
    k, s = calibration_grid(2, k_max=17, s_nodes=9)
    assert k.shape == (18,) and np.array_equal(k, np.arange(18))
    assert s.shape == (9,)
    assert s[0] == pytest.approx(1e-9) and s[-1] == pytest.approx(1e3)


def test_factor_bound_small_replay():
    out = factor_bound_check(1, k_max=60, s_nodes=30, nodes_per_panel=40,
                             thin=3)
    assert out["violations"] == 0
    assert out["max_ratio"] <= 1.0
    assert out["points"] == 61 * out["s_columns"]


def test_adaptive_factor_count():
    inv = builtin_theta("inv-sqrt")
    # nu = 100: floor(10 / sqrt(11)) = 3
    assert adaptive_N(inv, 49, 1.0, 2) == 3
    assert adaptive_N(builtin_theta("zero"), 49, 1.0, 2) == 0
    # Theta(0+) > 1 profiles are clamped to floor(sqrt(nu))
    assert adaptive_N(builtin_theta("inv-sqrt-strong"), 0, 1.0, 1) == 1
    assert adaptive_N(inv, np.array([0, 49]), 1.0, 2).shape == (2,)
    with pytest.raises(DomainError):
        adaptive_N(inv, 3, 0.0, 1)


def test_chain_empty_and_factor_product():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=6, c_n=1.2)
    assert chain_coeff(plan, 0, 5, 2.0) == 1.0
    lam, k = 1.7, 2
    expect = 1.0
    for j in (1, 2, 3):
        expect *= factor_coeff(j, k, lam, plan) * float(factor_t_hat(j, lam, plan))
    assert chain_coeff(plan, 3, k, lam) == pytest.approx(expect, rel=1e-9)
    with pytest.raises(DomainError):
        chain_coeff(plan, 7, 0, 1.0)
    with pytest.raises(DomainError):
        chain_coeff(plan, -1, 0, 1.0)


def test_chain_coefficients_grid():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=6, c_n=1.2)
    grid = QuadratureGrid.make(k_max=8, lambda_min=0.5, lambda_max=5.0,
                               lambda_nodes=6)
    c = chain_coefficients(plan, 2, grid)
    assert c.symmetric and c.values.shape == (9, 6)
    for k, i in ((0, 0), (5, 3)):
        assert c.values[k, i] == pytest.approx(
            chain_coeff(plan, 2, k, grid.lam[i],
                        nodes_per_panel=grid.nodes_per_panel), rel=1e-9)
    chain = build_chain(plan, 2, grid)
    assert chain.N == 2 and chain.plan is plan
    assert np.array_equal(chain.coeffs.values, c.values)


def test_support_radius_formula():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=5, c_n=1.1)
    expect = (plan.a * (plan.rho[0] + plan.rho[1])
              + plan.c * (plan.tau[0] + plan.tau[1]))
    assert support_radius(plan, 2) == pytest.approx(expect, rel=1e-14)
    assert support_radius(plan) == pytest.approx(
        plan.a * plan.rho.sum() + plan.c * plan.tau.sum(), rel=1e-14)
    with pytest.raises(DomainError):
        support_radius(plan, 0)


def test_ball_geometry_values():
    assert ball_volume(1.0, 2) == pytest.approx(np.pi)
    assert ball_volume(1.0, 4) == pytest.approx(np.pi ** 2 / 2.0)
    assert sphere_surface(2, 3.0) == pytest.approx(6.0 * np.pi)
    assert sphere_surface(4, 1.0) == pytest.approx(2.0 * np.pi ** 2)


def test_symmdiff_matches_planar_lens():
    for R, d in ((1.0, 0.3), (0.7, 0.9), (2.5, 4.9)):
        lens = 2.0 * R ** 2 * np.arccos(0.5 * d / R) \
            - 0.5 * d * np.sqrt(4.0 * R ** 2 - d ** 2)
        sd = ball_shift_symmdiff(2, R, d)
        assert abs(sd - (2.0 * np.pi * R ** 2 - 2.0 * lens)) < LENS_TOL


def test_symmdiff_edges_and_bound():
    assert ball_shift_symmdiff(4, 1.3, 0.0) == 0.0
    assert ball_shift_symmdiff(4, 1.3, 2.6) == pytest.approx(
        2.0 * ball_volume(1.3, 4))
    assert ball_shift_symmdiff(4, 1.3, 99.0) == pytest.approx(
        2.0 * ball_volume(1.3, 4))
    xi = np.linspace(0.0, 2.0, 41)
    vals = [ball_shift_symmdiff(2, 1.0, x) for x in xi]
    assert np.all(np.diff(vals) >= 0)
    for dim in (2, 4):
        for d in (0.05, 0.4, 1.0):
            assert ball_shift_symmdiff(dim, 1.0, d) <= d * sphere_surface(dim, 1.0)
    with pytest.raises(DomainError):
        ball_shift_symmdiff(3, 1.0, 0.5)
    with pytest.raises(DomainError):
        ball_shift_symmdiff(2, -1.0, 0.5)


def test_cauchy_gap_within_calibrated_envelope():
    plan = plan_sequences(builtin_theta("inv-sqrt"), 1, J=16)
    grid = QuadratureGrid.make(k_max=32, lambda_min=1e-2, lambda_max=1e2,
                               lambda_nodes=64)
    C = float(load_fixture("chain_gap_constants.json")["C"])
    for k in (1, 2, 4):
        bound, measured = cauchy_gap(plan, k, grid)
        assert measured <= C * bound
    with pytest.raises(DomainError):
        cauchy_gap(plan, 16, grid)


def test_verify_decay_smoke():
    theta = builtin_theta("inv-sqrt")
    plan = plan_sequences(theta, 1, J=16)
    report = verify_decay(plan, theta, k_max=12, lambda_min=0.1,
                          lambda_max=10.0, lambda_nodes=24)
    assert sorted(report) == ["C", "argmax", "k_max", "lambda_range",
                              "max_log_q", "n", "pass", "theta"]
    assert report["pass"] is True
    assert report["C"] == pytest.approx(np.exp(report["max_log_q"]))
    assert 0 <= report["argmax"]["k"] <= 12
    with pytest.raises(ProfileClassError):
        verify_decay(plan, builtin_theta("inv-log"), k_max=4,
                     lambda_nodes=4)
