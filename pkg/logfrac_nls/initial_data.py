"""Initial-datum families. All of them are Schwartz-class on the scale of the box."""
from typing import Dict, Optional

import numpy as np

from .grid import ComplexField, Grid, sample


FAMILIES = {
    "gaussian": {"width": 1.0, "center": 0.0, "phase_k": 0.0},
    "gausson": {},
    "random_bandlimited": {"band": 3.0, "seed": 0, "envelope_width": None},
    "plane_gaussian": {"k0": 1.0, "width": 1.0},
}


def gaussian(grid: Grid, width: float = 1.0, center: float = 0.0, phase_k: float = 0.0) -> ComplexField:
    """exp(-|x - c e_1|^2 / (2 w^2)) exp(i k x_1); center and phase act along the first axis."""
    if width <= 0:
        raise ValueError(f"Gaussian width must be positive, got {width}")

    def f(*xs):
        shifted = [xs[0] - center] + list(xs[1:])
        r2 = sum(x ** 2 for x in shifted)
        return np.exp(-r2 / (2 * width ** 2)) * np.exp(1j * phase_k * xs[0])

    return sample(grid, f)


def plane_gaussian(grid: Grid, k0: float = 1.0, width: float = 1.0) -> ComplexField:
    """A plane wave e^{i k0 x_1} under a centred Gaussian envelope."""
    return gaussian(grid, width=width, center=0.0, phase_k=k0)


def gausson(grid: Grid, lam: float) -> ComplexField:
    """Stationary profile exp(-|lam| |x|^2 / 2) of the s = 1 equation with lam < 0."""
    if lam >= 0:
        raise ValueError(f"The Gaussian stationary profile needs lam < 0, got lam={lam}")
    a = abs(lam)
    return sample(grid, lambda *xs: np.exp(-a * sum(x ** 2 for x in xs) / 2))


def _bandlimited_wavevectors(grid: Grid, band: float) -> np.ndarray:
    m_max = int(np.floor(band * grid.L / (2 * np.pi)))
    m = np.arange(-m_max, m_max + 1)
    lattice = np.stack(np.meshgrid(*((m,) * grid.d), indexing="ij"), axis=-1).reshape(-1, grid.d)
    k = 2 * np.pi * lattice / grid.L
    return k[np.sqrt(np.sum(k ** 2, axis=1)) <= band]


def bandlimited_field(
    grid: Grid,
    band: float,
    rng: np.random.Generator,
    envelope_width: Optional[float] = None,
) -> ComplexField:
    """
    Random Fourier series over integer frequencies with |2 pi m / L| <= band.

    The draws depend only on (band, L, rng state), never on n, so the same
    continuous field is sampled on every resolution.
    """
    if band <= 0:
        raise ValueError(f"Band must be positive, got {band}")
    width = envelope_width if envelope_width is not None else grid.L / 16
    k = _bandlimited_wavevectors(grid, band)
    coeffs = (rng.standard_normal(len(k)) + 1j * rng.standard_normal(len(k))) / np.sqrt(2)
    series = np.zeros(grid.shape, dtype=np.complex128)
    for kv, c in zip(k, coeffs):
        series += c * np.exp(1j * sum(kk * x for kk, x in zip(kv, grid.mesh)))
    envelope = np.exp(-grid.radius_sq / (2 * width ** 2))
    return ComplexField(grid, series * envelope)


def random_bandlimited(
    grid: Grid,
    band: float = 3.0,
    seed: int = 0,
    envelope_width: Optional[float] = None,
) -> ComplexField:
    """Seeded band-limited datum, scaled to unit peak amplitude."""
    u = bandlimited_field(grid, band, np.random.default_rng(seed), envelope_width)
    peak = float(np.max(np.abs(u.values)))
    return u.with_values(u.values / peak) if peak > 0 else u


def resolve_datum(grid: Grid, family: str, params: Optional[Dict] = None, lam: float = -1.0) -> ComplexField:
    """Build the named family on a grid; unknown families or keys raise ValueError."""
    if family not in FAMILIES:
        raise ValueError(f"Unknown initial datum family '{family}', expected one of {sorted(FAMILIES)}")
    params = dict(params or {})
    unknown = set(params) - set(FAMILIES[family])
    if unknown:
        raise ValueError(f"Unknown parameters for '{family}': {sorted(unknown)}")
    merged = {**FAMILIES[family], **params}

    if family == "gaussian":
        return gaussian(grid, **merged)
    if family == "plane_gaussian":
        return plane_gaussian(grid, **merged)
    if family == "gausson":
        return gausson(grid, lam)
    merged["seed"] = int(merged["seed"])
    return random_bandlimited(grid, **merged)
