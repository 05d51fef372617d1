"""Conserved and monitored quantities of a state."""
from dataclasses import dataclass, field, fields
from typing import List, Optional, Tuple

import numpy as np

from .fractional_ops import as_order, hs_seminorm_sq, weight
from .grid import ComplexField, apply_multiplier, spectral_sum
from .log_nonlinearity import F_split, as_eps, as_lam, log_amplitude, mu_eps


MOMENTUM_REAL_TOL = 1e-10


def mass(u: ComplexField) -> float:
    return float(u.grid.cell_volume * np.sum(np.abs(u.values) ** 2))


def gradient(u: ComplexField) -> Tuple[ComplexField, ...]:
    """Spectral gradient; the Nyquist mode is dropped so real fields stay real."""
    return tuple(apply_multiplier(u, 1j * k) for k in u.grid.derivative_k_mesh)


def momentum(u: ComplexField) -> Tuple[float, ...]:
    """J = Im int conj(u) grad u, one component per axis."""
    grads = gradient(u)
    h = u.grid.cell_volume
    out = []
    for g in grads:
        integral = complex(h * np.sum(np.conj(u.values) * g.values))
        scale = u.l2_norm() * g.l2_norm()
        if abs(integral.real) > MOMENTUM_REAL_TOL * max(scale, 1e-300):
            print(f"[WARN] Momentum integrand has a real part {integral.real:.3e} (scale {scale:.3e})")
        out.append(integral.imag)
    return tuple(out)


def kinetic_energy(u: ComplexField, s) -> float:
    return 0.5 * hs_seminorm_sq(u, s)


def energy(u: ComplexField, lam, s) -> float:
    """E(u) = 1/2 ||(-Delta)^{s/2} u||^2 + (lam/2) int |u|^2 (log|u|^2 - 1)."""
    lam = as_lam(lam)
    density = np.abs(u.values) ** 2
    potential = np.sum(density * (2.0 * log_amplitude(u.values, 0.0) - 1.0))
    return kinetic_energy(u, s) + 0.5 * lam * u.grid.cell_volume * float(potential)


def energy_eps(u: ComplexField, lam, eps, s) -> float:
    """E_eps(u) = 1/2 ||(-Delta)^{s/2} u||^2 + (lam/2) int |u|^2 log((|u|+eps)^2) - (lam/2) int mu_eps(|u|)."""
    lam = as_lam(lam)
    eps = as_eps(eps)
    r = np.abs(u.values)
    log_term = np.sum(r ** 2 * 2.0 * log_amplitude(u.values, eps))
    mu_term = np.sum(mu_eps(r, eps))
    return kinetic_energy(u, s) + 0.5 * lam * u.grid.cell_volume * float(log_term - mu_term)


def hs_seminorm(u: ComplexField, s) -> float:
    return float(np.sqrt(hs_seminorm_sq(u, s)))


def h1_seminorm(u: ComplexField) -> float:
    return float(np.sqrt(spectral_sum(u, u.grid.k_abs ** 2)))


def weighted_norm(u: ComplexField, alpha) -> float:
    """||<x>^alpha u||."""
    return float(np.sqrt(u.grid.cell_volume * np.sum((weight(u.grid, alpha) * np.abs(u.values)) ** 2)))


def w2_defect(u: ComplexField) -> float:
    """||u log|u|^2||."""
    integrand = np.abs(u.values) * np.abs(2.0 * log_amplitude(u.values, 0.0))
    return float(np.sqrt(u.grid.cell_volume * np.sum(integrand ** 2)))


def w1_diagnostic(u: ComplexField) -> float:
    """int |u|^2 |log|u|^2|."""
    integrand = np.abs(u.values) ** 2 * np.abs(2.0 * log_amplitude(u.values, 0.0))
    return float(u.grid.cell_volume * np.sum(integrand))


def energy_space_split(u: ComplexField, eps) -> Tuple[float, float]:
    """(int F1_eps(u), int F2_eps(u)): the small-amplitude and large-amplitude parts of the log density."""
    f1, f2 = F_split(u.values, eps)
    h = u.grid.cell_volume
    return float(h * np.sum(f1)), float(h * np.sum(f2))


@dataclass
class ObservableRecord:
    """One row of monitored quantities at time t."""
    t: float
    mass: float
    momentum: Tuple[float, ...]
    energy: float
    energy_eps: float
    l2: float
    hs_semi: float
    h1_semi: Optional[float] = None
    weighted_alpha: Optional[float] = None
    w2_defect: Optional[float] = None
    w1: Optional[float] = None
    f1_eps: Optional[float] = None
    f2_eps: Optional[float] = None

    def to_row(self) -> List[str]:
        row = [_fmt(self.t), _fmt(self.mass)]
        row += [_fmt(p) for p in self.momentum]
        row += [_fmt(self.energy), _fmt(self.energy_eps), _fmt(self.l2), _fmt(self.hs_semi)]
        row += [_fmt(self.h1_semi), _fmt(self.weighted_alpha), _fmt(self.w2_defect)]
        row += [_fmt(self.w1), _fmt(self.f1_eps), _fmt(self.f2_eps)]
        return row


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else format(float(value), ".17g")


def csv_header(d: int) -> List[str]:
    names = [f.name for f in fields(ObservableRecord)]
    momentum_cols = [f"momentum_{i}" for i in range(d)]
    idx = names.index("momentum")
    return names[:idx] + momentum_cols + names[idx + 1:]


@dataclass
class ObservableSeries:
    d: int
    records: List[ObservableRecord] = field(default_factory=list)

    def append(self, record: ObservableRecord) -> None:
        if self.records and record.t <= self.records[-1].t:
            raise ValueError(f"Observable times must increase: {record.t} after {self.records[-1].t}")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def header(self) -> List[str]:
        return csv_header(self.d)

    def rows(self) -> List[List[str]]:
        return [r.to_row() for r in self.records]

    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)


def record_observables(
    u: ComplexField,
    t: float,
    s,
    lam,
    eps,
    alpha: Optional[float] = None,
    include_h1: bool = True,
    include_w2: bool = True,
    include_energy_space: bool = True,
) -> ObservableRecord:
    s = as_order(s)
    m = mass(u)
    f1, f2 = energy_space_split(u, eps) if include_energy_space else (None, None)
    return ObservableRecord(
        t=float(t),
        mass=m,
        momentum=momentum(u),
        energy=energy(u, lam, s),
        energy_eps=energy_eps(u, lam, eps, s),
        l2=float(np.sqrt(m)),
        hs_semi=hs_seminorm(u, s),
        h1_semi=h1_seminorm(u) if include_h1 else None,
        weighted_alpha=weighted_norm(u, alpha) if alpha is not None else None,
        w2_defect=w2_defect(u) if include_w2 else None,
        w1=w1_diagnostic(u) if include_energy_space else None,
        f1_eps=f1,
        f2_eps=f2,
    )
