"""Tests for mass, momentum, energies and the observable series."""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from logfrac_nls.grid import make_grid  # noqa: E402
from logfrac_nls.initial_data import gaussian, gausson  # noqa: E402
from logfrac_nls.observables import (  # noqa: E402
    ObservableSeries,
    csv_header,
    energy,
    energy_eps,
    energy_space_split,
    h1_seminorm,
    hs_seminorm,
    mass,
    momentum,
    record_observables,
    w1_diagnostic,
    w2_defect,
    weighted_norm,
)


@pytest.fixture
def grid():
    return make_grid(1, 256, 32.0)


def test_mass_of_gaussian(grid):
    assert mass(gaussian(grid)) == pytest.approx(np.sqrt(np.pi), rel=1e-12)


def test_momentum_of_boosted_gaussian(grid):
    # J = k * ||u||^2 for u = exp(-x^2/2) e^{ikx}
    u = gaussian(grid, phase_k=1.5)
    (j,) = momentum(u)
    assert j == pytest.approx(1.5 * np.sqrt(np.pi), rel=1e-10)
    (j0,) = momentum(gaussian(grid))
    assert abs(j0) < 1e-14


def test_momentum_has_one_component_per_axis():
    g2 = make_grid(2, 32, 16.0)
    assert len(momentum(gaussian(g2, phase_k=1.0))) == 2


def test_energy_of_gaussian_s_one(grid):
    # 1/2 ||u'||^2 = sqrt(pi)/4; int |u|^2 (log|u|^2 - 1) = -3 sqrt(pi)/2
    u = gaussian(grid)
    expected = np.sqrt(np.pi) / 4 + 0.5 * (-1.0) * (-1.5 * np.sqrt(np.pi))
    assert energy(u, -1.0, 1.0) == pytest.approx(expected, rel=1e-10)
    assert h1_seminorm(u) == pytest.approx(hs_seminorm(u, 1.0), rel=1e-12)


def test_energy_eps_approaches_energy(grid):
    u = gaussian(grid)
    e0 = energy(u, -1.0, 0.5)
    gaps = [abs(energy_eps(u, -1.0, eps, 0.5) - e0) for eps in (0.1, 0.01, 0.001)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert energy_eps(u, -1.0, 0.0, 0.5) == pytest.approx(e0, rel=1e-12)


def test_weighted_norm_zero_alpha_is_l2(grid):
    u = gaussian(grid, center=2.0)
    assert weighted_norm(u, 0.0) == pytest.approx(u.l2_norm(), rel=1e-14)
    assert weighted_norm(u, 1.0) > u.l2_norm()


def test_defects_are_finite_for_compact_amplitudes(grid):
    u = gausson(grid, -1.0)
    # |u|^2 log|u|^2 = -x^2 e^{-x^2}: int = -sqrt(pi)/2
    assert w1_diagnostic(u) == pytest.approx(np.sqrt(np.pi) / 2, rel=1e-10)
    assert w2_defect(u) > 0
    f1, f2 = energy_space_split(u, 0.0)
    assert f1 + f2 == pytest.approx(-np.sqrt(np.pi) / 2, rel=1e-10)


def test_csv_header_expands_momentum():
    header = csv_header(2)
    assert header[:4] == ["t", "mass", "momentum_0", "momentum_1"]
    assert header[-4:] == ["w2_defect", "w1", "f1_eps", "f2_eps"]


def test_series_requires_increasing_times(grid):
    u = gaussian(grid)
    series = ObservableSeries(1)
    series.append(record_observables(u, 0.0, 0.5, -1.0, 0.1))
    series.append(record_observables(u, 0.1, 0.5, -1.0, 0.1, alpha=0.5))
    with pytest.raises(ValueError):
        series.append(record_observables(u, 0.1, 0.5, -1.0, 0.1))
    rows = series.rows()
    assert len(rows) == 2
    assert len(rows[0]) == len(series.header)
    assert rows[0][series.header.index("weighted_alpha")] == ""
    assert float(rows[0][1]) == mass(u)


def test_record_skips_optional_columns(grid):
    rec = record_observables(
        gaussian(grid), 0.0, 0.5, 1.0, 0.1, include_h1=False, include_w2=False, include_energy_space=False
    )
    assert rec.h1_semi is None and rec.w2_defect is None
    assert rec.w1 is None and rec.f1_eps is None and rec.f2_eps is None
    assert rec.l2 == pytest.approx(np.sqrt(rec.mass))


def test_record_carries_energy_space_split(grid):
    u = gaussian(grid, width=0.7)
    rec = record_observables(u, 0.0, 0.5, -1.0, 0.05)
    f1, f2 = energy_space_split(u, 0.05)
    assert (rec.f1_eps, rec.f2_eps) == (f1, f2)
    assert rec.f1_eps <= 0.0
    assert rec.w1 == w1_diagnostic(u)
