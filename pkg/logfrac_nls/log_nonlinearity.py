"""
The logarithmic nonlinearity and its regularization.

Pointwise functions accept scalars or numpy arrays. The eps = 0 logarithm is
taken to be zero below UNDERFLOW_FLOOR, which is the limit of z log|z| at 0.
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import integrate, optimize

from .grid import UNDERFLOW_FLOOR, ComplexField


ArrayLike = Union[complex, float, np.ndarray]

THETA_INNER = 0.25
THETA_OUTER = 0.5
LIPSCHITZ_SLACK = 1e-12
MU_SERIES_SWITCH = 0.1
MU_SERIES_TERMS = 24


@dataclass(frozen=True)
class RegularizationLevel:
    eps: float

    def __post_init__(self):
        if not (np.isfinite(self.eps) and self.eps >= 0):
            raise ValueError(f"Regularization level must be finite and >= 0, got eps={self.eps}")


@dataclass(frozen=True)
class CouplingConstant:
    lam: float

    def __post_init__(self):
        if not np.isfinite(self.lam):
            raise ValueError(f"Coupling constant must be finite, got lam={self.lam}")


def as_eps(eps: Union[float, RegularizationLevel]) -> float:
    if isinstance(eps, RegularizationLevel):
        return float(eps.eps)
    return float(RegularizationLevel(float(eps)).eps)


def as_lam(lam: Union[float, CouplingConstant]) -> float:
    if isinstance(lam, CouplingConstant):
        return float(lam.lam)
    return float(CouplingConstant(float(lam)).lam)


def _scalar_or_array(out: np.ndarray, template):
    return out[()] if np.ndim(template) == 0 else out


def log_amplitude(z: ArrayLike, eps: float) -> np.ndarray:
    """log(|z| + eps), with 0 where eps = 0 and |z| < UNDERFLOW_FLOOR."""
    eps = as_eps(eps)
    r = np.abs(np.asarray(z))
    if eps > 0:
        return np.log(r + eps)
    out = np.zeros(r.shape, dtype=np.float64)
    live = r >= UNDERFLOW_FLOOR
    out[live] = np.log(r[live])
    return out


def g_eps(z: ArrayLike, eps: Union[float, RegularizationLevel]) -> ArrayLike:
    """2 z log(|z| + eps)."""
    arr = np.asarray(z, dtype=np.complex128)
    out = 2.0 * arr * log_amplitude(arr, eps)
    return _scalar_or_array(out, z)


def g_eps_field(u: ComplexField, eps: Union[float, RegularizationLevel]) -> ComplexField:
    return u.with_values(g_eps(u.values, eps))


def nonlinear_phase_flow(
    u: ComplexField,
    lam: Union[float, CouplingConstant],
    eps: Union[float, RegularizationLevel],
    dt: float,
) -> ComplexField:
    """Exact flow of i u_t = 2 lam u log(|u| + eps); |u| is constant along it."""
    lam = as_lam(lam)
    if lam == 0.0 or dt == 0.0:
        return u
    phase = -2.0 * lam * dt * log_amplitude(u.values, eps)
    return u.with_values(u.values * np.exp(1j * phase))


def mu_eps(sigma: ArrayLike, eps: Union[float, RegularizationLevel]) -> ArrayLike:
    """
    mu_eps(sigma) = int_0^sigma 2 tau^2 / (tau + eps) d tau.

    Closed form sigma^2 - 2 eps sigma + 2 eps^2 log(1 + sigma/eps). For sigma/eps
    below MU_SERIES_SWITCH the closed form cancels badly and the alternating
    series 2 eps^2 sum_{k>=3} (-1)^{k+1} x^k / k is used instead.
    """
    eps = as_eps(eps)
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("mu_eps needs sigma >= 0")
    if eps == 0.0:
        return _scalar_or_array(s ** 2, sigma)

    x = s / eps
    out = s ** 2 - 2 * eps * s + 2 * eps ** 2 * np.log1p(x)
    small = x < MU_SERIES_SWITCH
    if np.any(small):
        xs = x[small] if x.ndim else x
        k = np.arange(3, 3 + MU_SERIES_TERMS)
        signs = np.where(k % 2 == 1, 1.0, -1.0)
        terms = signs * np.power.outer(xs, k) / k
        series = 2 * eps ** 2 * np.sum(terms, axis=-1)
        if x.ndim:
            out[small] = series
        else:
            out = series
    return _scalar_or_array(np.asarray(out), sigma)


def mu_eps_quadrature(sigma: float, eps: float) -> float:
    """Adaptive-quadrature oracle for mu_eps."""
    eps = as_eps(eps)
    if sigma < 0:
        raise ValueError("mu_eps needs sigma >= 0")
    points = [eps] if 0.0 < eps < sigma else None
    value, _ = integrate.quad(
        lambda tau: 2 * tau ** 2 / (tau + eps), 0.0, float(sigma),
        epsabs=0.0, epsrel=1e-13, limit=200, points=points,
    )
    return value


def smoothstep(t: ArrayLike) -> ArrayLike:
    """Quintic 6t^5 - 15t^4 + 10t^3 clamped to [0, 1]; C^2 at both ends."""
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
    return t ** 3 * (t * (6 * t - 15) + 10)


def radial_cutoff(r: ArrayLike, inner: float, outer: float) -> ArrayLike:
    """1 on r <= inner, 0 on r >= outer, smoothstep in between."""
    out = 1.0 - smoothstep((np.asarray(r, dtype=np.float64) - inner) / (outer - inner))
    return _scalar_or_array(np.asarray(out), r)


def theta_cutoff(z: ArrayLike) -> ArrayLike:
    return radial_cutoff(np.abs(np.asarray(z)), THETA_INNER, THETA_OUTER)


def theta_derivative_jumps(step: float = 1e-6) -> Tuple[float, float]:
    """One-sided finite-difference derivative jumps of theta at |z| = 1/4 and 1/2."""
    jumps = []
    for r0 in (THETA_INNER, THETA_OUTER):
        left = (theta_cutoff(r0) - theta_cutoff(r0 - step)) / step
        right = (theta_cutoff(r0 + step) - theta_cutoff(r0)) / step
        jumps.append(float(abs(right - left)))
    return jumps[0], jumps[1]


def log_density(z: ArrayLike, eps: float) -> np.ndarray:
    """|z|^2 log((|z| + eps)^2)."""
    arr = np.asarray(z)
    return np.abs(arr) ** 2 * 2.0 * log_amplitude(arr, eps)


def F_split(z: ArrayLike, eps: Union[float, RegularizationLevel]) -> Tuple[ArrayLike, ArrayLike]:
    """(theta |z|^2 log((|z|+eps)^2), the remainder); the pair sums to the full density."""
    total = log_density(z, eps)
    f1 = theta_cutoff(z) * total
    f2 = total - f1
    return _scalar_or_array(np.asarray(f1), z), _scalar_or_array(np.asarray(f2), z)


def check_log_lipschitz(u: ArrayLike, v: ArrayLike, eps: ArrayLike, mu: ArrayLike):
    """
    Both sides of |Im (u log(|u|+eps) - v log(|v|+mu)) conj(u-v)| <= |u-v|^2 + |eps-mu| |u-v|.

    Returns (lhs, rhs, holds), elementwise when given arrays.
    """
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    eps = np.asarray(eps, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    if np.any(eps < 0) or np.any(mu < 0):
        raise ValueError("Regularization levels must be >= 0")
    lu = _log_amplitude_broadcast(u, eps)
    lv = _log_amplitude_broadcast(v, mu)
    diff = u - v
    lhs = np.abs(np.imag((u * lu - v * lv) * np.conj(diff)))
    rhs = np.abs(diff) ** 2 + np.abs(eps - mu) * np.abs(diff)
    holds = lhs <= rhs + LIPSCHITZ_SLACK * (1.0 + rhs)
    return lhs, rhs, holds


def _log_amplitude_broadcast(z: np.ndarray, eps: np.ndarray) -> np.ndarray:
    r, e = np.broadcast_arrays(np.abs(z), eps)
    out = np.zeros(r.shape, dtype=np.float64)
    live = (r + e) >= UNDERFLOW_FLOOR
    out[live] = np.log(r[live] + e[live])
    return out


def check_log_growth(z: ArrayLike, delta: float):
    """(|z log|z|^2|, |z|^{1-delta} + |z|^{1+delta}, ratio) with ratio 0 at z = 0."""
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    r = np.abs(np.asarray(z, dtype=np.complex128))
    lhs = r * np.abs(2.0 * log_amplitude(r, 0.0))
    rhs = r ** (1 - delta) + r ** (1 + delta)
    ratio = np.divide(lhs, rhs, out=np.zeros_like(lhs), where=rhs > 0)
    return lhs, rhs, ratio


def log_growth_sup(delta: float) -> float:
    """
    sup_r |r log r^2| / (r^{1-delta} + r^{1+delta}).

    With y = delta log r the ratio is |y| / (delta cosh y), maximal where y tanh y = 1.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    y = optimize.brentq(lambda t: t * np.tanh(t) - 1.0, 0.5, 2.0, xtol=1e-15)
    return float(y / (delta * np.cosh(y)))


def check_holder_log(u: ArrayLike, v: ArrayLike, eps: ArrayLike, a: float):
    """
    (|v log(|v|+eps) - u log|u||, bracket) with bracket
    eps + |u-v| + (1 + |u|^{1-a} log+|u| + |v|^{1-a} log+|v|) |u-v|^a.
    """
    if not (0.0 < a < 1.0):
        raise ValueError(f"Hoelder exponent must lie in (0, 1), got {a}")
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    eps = np.asarray(eps, dtype=np.float64)
    if np.any((eps < 0) | (eps >= 1)):
        raise ValueError("eps must lie in [0, 1)")
    ru, rv = np.abs(u), np.abs(v)
    lhs = np.abs(v * _log_amplitude_broadcast(v, eps) - u * log_amplitude(u, 0.0))
    log_plus_u = np.maximum(log_amplitude(ru, 0.0), 0.0)
    log_plus_v = np.maximum(log_amplitude(rv, 0.0), 0.0)
    dist = np.abs(u - v)
    bracket = eps + dist + (1 + ru ** (1 - a) * log_plus_u + rv ** (1 - a) * log_plus_v) * dist ** a
    return lhs, bracket
