"""Realizations of the fractional Laplacian, its propagator, the moment weight and the commutator."""
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gamma, zeta

from .grid import ComplexField, Grid, apply_multiplier, spectral_sum
from .initial_data import bandlimited_field


MAX_QUADRATURE_POINTS = 512
KERNELS = ("periodized", "minimal_image")


class CostGuardError(Exception):
    """Raised when an O(n^2) quadrature is requested on d=2 or an oversize grid."""
    pass


@dataclass(frozen=True)
class FractionalOrder:
    """Exponent s of (-Delta)^s, 0 < s <= 1 (s = 1 is the classical limit)."""
    s: float

    def __post_init__(self):
        if not (0.0 < float(self.s) <= 1.0):
            raise ValueError(f"Fractional order must satisfy 0 < s <= 1, got s={self.s}")


@dataclass(frozen=True)
class MomentOrder:
    """Exponent alpha of the weight <x>^alpha; alpha = 0 is the identity-weight control."""
    alpha: float

    def __post_init__(self):
        if not (0.0 <= float(self.alpha) <= 1.0):
            raise ValueError(f"Moment order must satisfy 0 <= alpha <= 1, got alpha={self.alpha}")

    def admissible(self, s: Union[float, FractionalOrder]) -> bool:
        s = as_order(s)
        return 0.0 < self.alpha < 2 * s and self.alpha <= 1.0


OrderLike = Union[float, FractionalOrder]
MomentLike = Union[float, MomentOrder]


def as_order(s: OrderLike) -> float:
    if isinstance(s, FractionalOrder):
        return float(s.s)
    return float(FractionalOrder(float(s)).s)


def as_moment(alpha: MomentLike) -> float:
    if isinstance(alpha, MomentOrder):
        return float(alpha.alpha)
    return float(MomentOrder(float(alpha)).alpha)


def normalization_constant(d: int, s: OrderLike) -> float:
    """C_{d,s} = 4^s Gamma(d/2+s) / (pi^{d/2} |Gamma(-s)|), defined for 0 < s < 1."""
    s = as_order(s)
    if s >= 1.0:
        raise ValueError("The singular-integral constant is only defined for 0 < s < 1")
    return float(4 ** s * gamma(d / 2 + s) / (np.pi ** (d / 2) * abs(gamma(-s))))


def symbol(grid: Grid, power: float) -> np.ndarray:
    """|k|^power with the k = 0 mode set to zero."""
    with np.errstate(divide="ignore"):
        mult = grid.k_abs ** power
    mult[grid.k_abs == 0] = 0.0
    return mult


def frac_laplacian(u: ComplexField, s: OrderLike) -> ComplexField:
    return apply_multiplier(u, symbol(u.grid, 2 * as_order(s)))


def half_power(u: ComplexField, s: OrderLike) -> ComplexField:
    """(-Delta)^{s/2} u."""
    return apply_multiplier(u, symbol(u.grid, as_order(s)))


def propagator_multiplier(grid: Grid, s: OrderLike, t: float) -> np.ndarray:
    return np.exp(-1j * t * symbol(grid, 2 * as_order(s)))


def linear_propagator(u: ComplexField, s: OrderLike, t: float) -> ComplexField:
    """Exact flow of i u_t = (-Delta)^s u over time t (either sign)."""
    return apply_multiplier(u, propagator_multiplier(u.grid, s, t))


def hs_seminorm_sq(u: ComplexField, s: OrderLike) -> float:
    return spectral_sum(u, symbol(u.grid, 2 * as_order(s)))


def hs_norm(u: ComplexField, s: OrderLike) -> float:
    """Full H^s norm: sqrt(||u||^2 + ||(-Delta)^{s/2} u||^2)."""
    return float(np.sqrt(u.l2_norm() ** 2 + hs_seminorm_sq(u, s)))


def _guard_quadrature(u: ComplexField, s: float) -> None:
    grid = u.grid
    if grid.d != 1:
        raise CostGuardError(f"Pairwise quadratures are limited to d=1, got d={grid.d}")
    if grid.n > MAX_QUADRATURE_POINTS:
        raise CostGuardError(f"Pairwise quadratures are limited to n <= {MAX_QUADRATURE_POINTS}, got n={grid.n}")
    if s >= 1.0:
        raise ValueError("Pairwise quadratures need 0 < s < 1")


def offset_kernel(grid: Grid, s: OrderLike, kernel: str = "periodized") -> np.ndarray:
    """
    Kernel values at offsets r_j = j*h, j = 1..n-1.

    "minimal_image" uses min(r, L - r)^{-(d+2s)}. "periodized" sums the kernel over
    all periodic images, which in closed form is L^{-p} [zeta(p, r/L) + zeta(p, 1 - r/L)].
    """
    s = as_order(s)
    p = grid.d + 2 * s
    r = np.arange(1, grid.n) * grid.h
    if kernel == "minimal_image":
        return np.minimum(r, grid.L - r) ** (-p)
    if kernel == "periodized":
        q = r / grid.L
        return grid.L ** (-p) * (zeta(p, q) + zeta(p, 1.0 - q))
    raise ValueError(f"Unknown kernel '{kernel}', expected one of {KERNELS}")


def gagliardo_seminorm_sq(u: ComplexField, s: OrderLike, kernel: str = "periodized") -> float:
    """Double sum of |u(x)-u(y)|^2 K(x-y) h^2 over ordered pairs, diagonal excluded."""
    s = as_order(s)
    _guard_quadrature(u, s)
    h = u.grid.h
    weights = offset_kernel(u.grid, s, kernel)
    total = 0.0
    for j, w in enumerate(weights, start=1):
        diff = u.values - np.roll(u.values, -j)
        total += w * float(np.sum(np.abs(diff) ** 2))
    return total * h * h


def gagliardo_constant(d: int, s: OrderLike) -> float:
    """Continuum ratio between the Gagliardo seminorm and ||(-Delta)^{s/2} u||^2."""
    return 2.0 / normalization_constant(d, s)


def singular_integral_laplacian(u: ComplexField, s: OrderLike, kernel: str = "periodized") -> ComplexField:
    """-(C/2) sum_y [u(x+y) + u(x-y) - 2u(x)] K(y) h over periodic offsets y != 0."""
    s = as_order(s)
    _guard_quadrature(u, s)
    grid = u.grid
    weights = offset_kernel(grid, s, kernel)
    acc = np.zeros(grid.shape, dtype=np.complex128)
    for j, w in enumerate(weights, start=1):
        acc += w * (np.roll(u.values, -j) + np.roll(u.values, j) - 2.0 * u.values)
    c = normalization_constant(grid.d, s)
    return u.with_values(-0.5 * c * grid.h * acc)


def weight(grid: Grid, alpha: MomentLike) -> np.ndarray:
    """<x>^alpha = (1 + |x|^2)^{alpha/2} in the chart [-L/2, L/2)^d."""
    return (1.0 + grid.radius_sq) ** (as_moment(alpha) / 2)


def weight_multiply(u: ComplexField, alpha: MomentLike) -> ComplexField:
    return u.with_values(weight(u.grid, alpha) * u.values)


def commutator_apply(u: ComplexField, s: OrderLike, alpha: MomentLike) -> ComplexField:
    """[(-Delta)^s, <x>^alpha] u."""
    return frac_laplacian(weight_multiply(u, alpha), s) - weight_multiply(frac_laplacian(u, s), alpha)


def commutator_ratio(u: ComplexField, s: OrderLike, alpha: MomentLike) -> float:
    norm = hs_norm(u, s)
    if norm == 0.0:
        return 0.0
    return commutator_apply(u, s, alpha).l2_norm() / norm


def commutator_norm_estimate(
    grid: Grid,
    s: OrderLike,
    alpha: MomentLike,
    ensemble_size: int = 32,
    seed: int = 0,
    band: float = 3.0,
    envelope_width: float = None,
) -> float:
    """
    Empirical H^s -> L^2 norm of the commutator: max ratio over a seeded ensemble.

    Fields are band-limited random series under a Gaussian envelope of width L/16,
    so the seam of the coordinate chart carries no mass. The coefficients depend on
    (band, L, seed) only, so the ensemble is identical under grid refinement.

    Args:
        grid: grid the ensemble is sampled on
        s: fractional order in (0, 1]
        alpha: weight exponent; 0 gives 0 without sampling
        ensemble_size: number of random fields (at least 16)
        seed: seed of the coefficient generator
        band: fields carry modes with |k| <= band
        envelope_width: Gaussian envelope width (default L/16)

    Returns:
        max over the ensemble of ||[(-Delta)^s, <x>^alpha] u|| / ||u||_{H^s}
    """
    if ensemble_size < 16:
        raise ValueError(f"Ensemble size must be at least 16, got {ensemble_size}")
    s = as_order(s)
    alpha = as_moment(alpha)
    if alpha == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    width = envelope_width if envelope_width is not None else grid.L / 16
    best = 0.0
    for _ in range(ensemble_size):
        u = bandlimited_field(grid, band, rng, envelope_width=width)
        best = max(best, commutator_ratio(u, s, alpha))
    return best
