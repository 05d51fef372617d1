"""Tests for the regularized logarithmic nonlinearity and its inequality oracles."""
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from logfrac_nls.grid import make_grid  # noqa: E402
from logfrac_nls.initial_data import gaussian  # noqa: E402
from logfrac_nls.log_nonlinearity import (  # noqa: E402
    F_split,
    RegularizationLevel,
    check_holder_log,
    check_log_growth,
    check_log_lipschitz,
    g_eps,
    log_density,
    log_growth_sup,
    mu_eps,
    mu_eps_quadrature,
    nonlinear_phase_flow,
    theta_cutoff,
    theta_derivative_jumps,
)


moduli = st.floats(min_value=0.0, max_value=50.0, allow_nan=False)
phases = st.floats(min_value=0.0, max_value=2 * np.pi)
levels = st.floats(min_value=0.0, max_value=1.0)


def test_g_eps_at_zero_and_scalar_shape():
    assert g_eps(0.0, 0.0) == 0.0
    assert g_eps(0.0, 0.1) == 0.0
    assert np.ndim(g_eps(1.0 + 1.0j, 0.1)) == 0
    assert g_eps(1.0, 0.0) == 0.0
    assert g_eps(np.e, 0.0) == pytest.approx(2 * np.e)


def test_regularization_level_rejects_negative():
    with pytest.raises(ValueError):
        RegularizationLevel(-1e-3)
    with pytest.raises(ValueError):
        g_eps(1.0, -0.1)


def test_phase_flow_preserves_modulus():
    grid = make_grid(1, 128, 32.0)
    u = gaussian(grid, phase_k=0.5)
    v = nonlinear_phase_flow(u, -1.0, 0.0, 0.3)
    assert np.max(np.abs(np.abs(v.values) - np.abs(u.values))) < 1e-15
    assert nonlinear_phase_flow(u, 0.0, 0.1, 0.3) is u


@settings(max_examples=50, deadline=None)
@given(
    lam=st.floats(min_value=-2.0, max_value=2.0),
    eps=levels,
    t1=st.floats(min_value=-1.0, max_value=1.0),
    t2=st.floats(min_value=-1.0, max_value=1.0),
)
def test_phase_flow_group_property(lam, eps, t1, t2):
    grid = make_grid(1, 64, 16.0)
    u = gaussian(grid, phase_k=0.5)
    composed = nonlinear_phase_flow(nonlinear_phase_flow(u, lam, eps, t1), lam, eps, t2)
    direct = nonlinear_phase_flow(u, lam, eps, t1 + t2)
    assert (composed - direct).l2_norm() < 1e-12


@settings(max_examples=200, deadline=None)
@given(r1=moduli, t1=phases, r2=moduli, t2=phases, eps=levels, mu=levels)
def test_log_lipschitz_holds(r1, t1, r2, t2, eps, mu):
    u = r1 * np.exp(1j * t1)
    v = r2 * np.exp(1j * t2)
    _, _, holds = check_log_lipschitz(u, v, eps, mu)
    assert bool(holds)


def test_log_lipschitz_vectorized():
    rng = np.random.default_rng(0)
    u = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    v = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    lhs, rhs, holds = check_log_lipschitz(u, v, rng.uniform(0, 1, 1000), rng.uniform(0, 1, 1000))
    assert lhs.shape == rhs.shape == holds.shape == (1000,)
    assert holds.all()


@pytest.mark.parametrize("eps", [1e-3, 0.1, 1.0, 10.0])
def test_mu_closed_form_matches_quadrature(eps):
    for sigma in np.geomspace(1e-6, 1e2, 25):
        exact = mu_eps_quadrature(sigma, eps)
        assert mu_eps(sigma, eps) == pytest.approx(exact, rel=1e-10, abs=1e-300)


def test_mu_at_zero_eps_and_series_branch():
    assert mu_eps(2.0, 0.0) == 4.0
    sigma = np.array([0.0, 1e-9, 5e-3, 2.0])
    out = mu_eps(sigma, 0.1)
    assert out.shape == (4,)
    assert out[0] == 0.0
    # leading term 2 sigma^3 / (3 eps) for sigma << eps
    assert out[1] == pytest.approx(2 * 1e-27 / 0.3, rel=1e-6)
    with pytest.raises(ValueError):
        mu_eps(-1.0, 0.1)


def test_theta_profile():
    r = np.array([0.0, 0.25, 0.375, 0.5, 1.0])
    values = theta_cutoff(r)
    assert values[0] == 1.0 and values[1] == 1.0
    assert values[2] == pytest.approx(0.5)
    assert values[3] == 0.0 and values[4] == 0.0
    assert np.all(np.diff(theta_cutoff(np.linspace(0, 1, 400))) <= 0)
    inner, outer = theta_derivative_jumps()
    assert inner < 1e-3 and outer < 1e-3


@settings(max_examples=100, deadline=None)
@given(r=moduli, t=phases, eps=levels)
def test_split_sums_to_density(r, t, eps):
    z = r * np.exp(1j * t)
    f1, f2 = F_split(z, eps)
    total = log_density(z, eps)
    assert f1 + f2 == pytest.approx(float(total), rel=1e-12, abs=1e-14)
    if r <= 0.25:
        assert f2 == pytest.approx(0.0, abs=1e-15)
    if r >= 0.5:
        assert f1 == 0.0


@pytest.mark.parametrize("delta", [0.1, 0.5, 0.9])
def test_log_growth_bound(delta):
    r = np.geomspace(1e-12, 1e12, 20001)
    _, _, ratio = check_log_growth(r, delta)
    sup = log_growth_sup(delta)
    assert ratio.max() <= sup * (1 + 1e-9)
    assert ratio.max() == pytest.approx(sup, rel=1e-3)


def test_log_growth_rejects_bad_delta():
    with pytest.raises(ValueError):
        check_log_growth(1.0, 1.0)
    with pytest.raises(ValueError):
        log_growth_sup(0.0)


def test_holder_bracket_ratio_is_bounded():
    rng = np.random.default_rng(7)
    u = rng.standard_normal(20000) * 5 + 1j * rng.standard_normal(20000) * 5
    v = u + (rng.standard_normal(20000) + 1j * rng.standard_normal(20000)) * 0.3
    eps = rng.uniform(1e-4, 0.9, 20000)
    lhs, bracket = check_holder_log(u, v, eps, 0.5)
    assert np.all(bracket > 0)
    assert np.max(lhs / bracket) < 5.0
    for bad in (-0.1, 1.0):
        with pytest.raises(ValueError):
            check_holder_log(u, v, np.full_like(eps, bad), 0.5)


def test_holder_accepts_zero_eps():
    u = np.array([0.3 + 0.4j, 2.0, 1e-9j])
    lhs, bracket = check_holder_log(u, u, 0.0, 0.5)
    assert np.all(lhs == 0.0)
    assert np.all(bracket == 0.0)
    lhs, bracket = check_holder_log(0.0, 0.0, 0.25, 0.5)
    assert lhs == 0.0
    assert bracket == 0.25
    lhs, bracket = check_holder_log(u, np.zeros(3), 0.0, 0.5)
    assert np.all(np.isfinite(lhs)) and np.all(bracket > 0)


@settings(max_examples=100, deadline=None)
@given(sigma=st.floats(min_value=0.0, max_value=1e3), eps=st.floats(min_value=1e-6, max_value=10.0))
def test_mu_bounds(sigma, eps):
    value = float(mu_eps(sigma, eps))
    assert 0.0 <= value <= sigma ** 2 * (1 + 1e-12)
