"""Tests for the periodic grid, fields and unitary transforms."""
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from logfrac_nls.grid import (  # noqa: E402
    BoundaryGuardError,
    ComplexField,
    GridError,
    GridMismatchError,
    NonFiniteFieldError,
    check_boundary,
    forward,
    inner_product,
    inverse,
    make_grid,
    sample,
    spectral_tail_fraction,
)
from logfrac_nls.initial_data import gaussian  # noqa: E402


@pytest.mark.parametrize("d,n,L", [(3, 64, 10.0), (1, 100, 10.0), (1, 4, 10.0), (1, 64, 0.0), (1, 64, -1.0)])
def test_make_grid_rejects_invalid(d, n, L):
    with pytest.raises(GridError):
        make_grid(d, n, L)


def test_grid_geometry():
    grid = make_grid(1, 64, 16.0)
    assert grid.h == pytest.approx(0.25)
    assert grid.axis[0] == pytest.approx(-8.0)
    assert grid.axis[-1] == pytest.approx(8.0 - 0.25)
    assert grid.axis_wavenumbers[1] == pytest.approx(2 * np.pi / 16.0)
    assert grid.derivative_k_mesh[0][32] == 0.0
    assert make_grid(2, 16, 4.0).shape == (16, 16)


def test_outer_shell_2d():
    grid = make_grid(2, 8, 4.0)
    mask = grid.outer_shell
    assert mask.sum() == 8 * 8 - 6 * 6
    assert not mask[3, 4]


def test_field_is_copied_and_read_only():
    grid = make_grid(1, 16, 4.0)
    raw = np.ones(16, dtype=complex)
    u = ComplexField(grid, raw)
    raw[0] = 5.0
    assert u.values[0] == 1.0
    with pytest.raises(ValueError):
        u.values[0] = 2.0


def test_sample_reports_non_finite_position():
    grid = make_grid(1, 16, 4.0)
    with pytest.raises(NonFiniteFieldError, match="x ="):
        sample(grid, lambda x: 1.0 / (x + 2.0))


def test_sample_broadcasts_scalars():
    grid = make_grid(2, 8, 4.0)
    u = sample(grid, lambda x, y: 2.0)
    assert u.values.shape == (8, 8)
    assert np.all(u.values == 2.0)


def test_mismatched_grids_rejected():
    a = ComplexField(make_grid(1, 16, 4.0), np.ones(16))
    b = ComplexField(make_grid(1, 16, 8.0), np.ones(16))
    with pytest.raises(GridMismatchError):
        a + b
    with pytest.raises(GridMismatchError):
        inner_product(a, b)
    with pytest.raises(GridMismatchError):
        forward(a, make_grid(1, 32, 4.0))


@settings(max_examples=25, deadline=None)
@given(
    width=st.floats(min_value=0.5, max_value=2.0),
    center=st.floats(min_value=-2.0, max_value=2.0),
    k=st.floats(min_value=-3.0, max_value=3.0),
)
def test_parseval_with_unitary_transform(width, center, k):
    grid = make_grid(1, 128, 32.0)
    u = gaussian(grid, width=width, center=center, phase_k=k)
    spec = forward(u)
    assert spec.l2_norm() == pytest.approx(u.l2_norm(), rel=1e-13)
    back = inverse(spec)
    assert np.max(np.abs(back.values - u.values)) < 1e-13


def test_inner_product_matches_norm():
    grid = make_grid(2, 32, 16.0)
    u = gaussian(grid, width=1.5)
    assert inner_product(u, u).real == pytest.approx(u.l2_norm() ** 2, rel=1e-14)
    # ||exp(-r^2/(2w^2))||^2 = pi w^2 in 2D
    assert u.l2_norm() ** 2 == pytest.approx(np.pi * 1.5 ** 2, rel=1e-10)


def test_small_box_examples():
    grid = make_grid(1, 8, 8.0)
    assert grid.h == 1.0
    assert list(grid.axis) == [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
    assert np.max(np.abs(grid.axis_wavenumbers)) == pytest.approx(np.pi)
    ones = sample(grid, lambda x: 1.0)
    assert inner_product(ones, ones) == pytest.approx(8.0)
    k1, k2 = 2 * np.pi / grid.L, 4 * np.pi / grid.L
    a = sample(grid, lambda x: np.exp(1j * k1 * x))
    b = sample(grid, lambda x: np.exp(1j * k2 * x))
    assert abs(inner_product(a, b)) < 1e-12


def test_plane_wave_has_single_mode():
    grid = make_grid(1, 32, 16.0)
    k0 = 3 * 2 * np.pi / grid.L
    modes = np.abs(forward(sample(grid, lambda x: np.exp(1j * k0 * x))).modes)
    assert np.count_nonzero(modes > 1e-10) == 1
    assert grid.axis_wavenumbers[np.argmax(modes)] == pytest.approx(k0)
    const = np.abs(forward(sample(grid, lambda x: 1.0)).modes)
    assert np.argmax(const) == 0 and np.count_nonzero(const > 1e-10) == 1


def test_boundary_guard():
    grid = make_grid(1, 64, 8.0)
    check_boundary(gaussian(grid, width=0.5))
    with pytest.raises(BoundaryGuardError):
        check_boundary(gaussian(grid, width=3.0))


def test_spectral_tail_fraction():
    grid = make_grid(1, 128, 32.0)
    assert spectral_tail_fraction(gaussian(grid)) < 1e-15
    rough = sample(grid, lambda x: np.cos(grid.n / 2 * 2 * np.pi * x / grid.L * 0.9))
    assert spectral_tail_fraction(rough) > 0.5
