"""Periodic box discretization, unitary transforms and quadrature inner products."""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Tuple

import numpy as np


UNDERFLOW_FLOOR = 1e-300  # amplitudes below this count as exact zeros
BOUNDARY_TOL = 1e-10
TAIL_TOL = 1e-8


class GridError(Exception):
    """Raised when grid parameters are invalid."""
    pass


class GridMismatchError(Exception):
    """Raised when two fields (or a field and a grid) do not share a grid."""
    pass


class NonFiniteFieldError(Exception):
    """Raised when a field holds NaN or Inf values."""
    pass


class BoundaryGuardError(Exception):
    """Raised when a field carries mass on the outermost grid shell."""
    pass


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Torus [-L/2, L/2)^d with n points per axis."""
    d: int
    n: int
    L: float

    def __post_init__(self):
        if self.d not in (1, 2):
            raise GridError(f"Dimension must be 1 or 2, got d={self.d}")
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)):
            raise GridError(f"Points per axis must be a power of two, got n={self.n}")
        if self.n < 8:
            raise GridError(f"Points per axis must be at least 8, got n={self.n}")
        if not (np.isfinite(self.L) and self.L > 0):
            raise GridError(f"Box length must be positive and finite, got L={self.L}")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n ** self.d

    @property
    def cell_volume(self) -> float:
        return self.h ** self.d

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.L / 2 + np.arange(self.n) * self.h

    @cached_property
    def coords(self) -> Tuple[np.ndarray, ...]:
        return (self.axis,) * self.d

    @cached_property
    def axis_wavenumbers(self) -> np.ndarray:
        # k = 2*pi*m/L in FFT ordering; index n/2 holds the Nyquist value -pi*n/L
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, ...]:
        return (self.axis_wavenumbers,) * self.d

    @cached_property
    def mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.coords, indexing="ij"))

    @cached_property
    def k_mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.wavenumbers, indexing="ij"))

    @cached_property
    def k_abs(self) -> np.ndarray:
        return np.sqrt(sum(k ** 2 for k in self.k_mesh))

    @cached_property
    def derivative_k_mesh(self) -> Tuple[np.ndarray, ...]:
        """Wavenumbers for odd derivatives: the unpaired Nyquist mode is zeroed."""
        k = self.axis_wavenumbers.copy()
        k[self.n // 2] = 0.0
        return tuple(np.meshgrid(*((k,) * self.d), indexing="ij"))

    @cached_property
    def radius_sq(self) -> np.ndarray:
        return sum(x ** 2 for x in self.mesh)

    @cached_property
    def outer_shell(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        for ax in range(self.d):
            index = [slice(None)] * self.d
            index[ax] = 0
            mask[tuple(index)] = True
            index[ax] = self.n - 1
            mask[tuple(index)] = True
        return mask


def make_grid(d: int, n: int, L: float) -> Grid:
    """Build a periodic grid; rejects d outside {1, 2} and n not a power of two."""
    return Grid(d=int(d), n=int(n), L=float(L))


def _first_bad_index(values: np.ndarray) -> Tuple[int, ...]:
    bad = np.argwhere(~np.isfinite(values))
    return tuple(int(i) for i in bad[0])


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Physical-space samples of u on a grid. Treated as immutable."""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != self.grid.shape:
            if values.size == self.grid.size:
                values = values.reshape(self.grid.shape)
            else:
                raise GridMismatchError(
                    f"Field has {values.size} entries, grid expects {self.grid.size}"
                )
        if not np.isfinite(values).all():
            idx = _first_bad_index(values)
            raise NonFiniteFieldError(f"Non-finite field value at grid index {idx}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "ComplexField":
        return ComplexField(self.grid, values)

    def _other_values(self, other) -> np.ndarray:
        if isinstance(other, ComplexField):
            require_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return self.with_values(self.values + self._other_values(other))

    def __sub__(self, other):
        return self.with_values(self.values - self._other_values(other))

    def __mul__(self, other):
        return self.with_values(self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def conj(self) -> "ComplexField":
        return self.with_values(np.conj(self.values))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.cell_volume * np.sum(np.abs(self.values) ** 2)))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Unitary discrete Fourier coefficients of a field, in FFT ordering."""
    grid: Grid
    modes: np.ndarray

    def __post_init__(self):
        modes = np.array(self.modes, dtype=np.complex128)
        if modes.shape != self.grid.shape:
            raise GridMismatchError(
                f"Spectrum has shape {modes.shape}, grid expects {self.grid.shape}"
            )
        modes.setflags(write=False)
        object.__setattr__(self, "modes", modes)

    def l2_norm(self) -> float:
        # Parseval with the unitary transform: same quadrature weight as physical space
        return float(np.sqrt(self.grid.cell_volume * np.sum(np.abs(self.modes) ** 2)))


def require_same_grid(a, b) -> None:
    ga = a if isinstance(a, Grid) else a.grid
    gb = b if isinstance(b, Grid) else b.grid
    if ga != gb:
        raise GridMismatchError(f"Grid mismatch: {ga} vs {gb}")


def sample(grid: Grid, f: Callable[..., np.ndarray]) -> ComplexField:
    """
    Evaluate f on the grid.

    f is called with one coordinate array per axis (meshgrid, ij-indexing) and may
    return a scalar, which is broadcast.
    """
    values = np.broadcast_to(np.asarray(f(*grid.mesh), dtype=np.complex128), grid.shape)
    if not np.isfinite(values).all():
        idx = _first_bad_index(values)
        position = tuple(float(grid.mesh[ax][idx]) for ax in range(grid.d))
        raise NonFiniteFieldError(f"Non-finite sample at x = {position} (grid index {idx})")
    return ComplexField(grid, values)


def forward(field: ComplexField, grid: Optional[Grid] = None) -> SpectralField:
    if grid is not None:
        require_same_grid(field, grid)
    return SpectralField(field.grid, np.fft.fftn(field.values, norm="ortho"))


def inverse(spec: SpectralField, grid: Optional[Grid] = None) -> ComplexField:
    if grid is not None:
        require_same_grid(spec, grid)
    return ComplexField(spec.grid, np.fft.ifftn(spec.modes, norm="ortho"))


def apply_multiplier(field: ComplexField, multiplier: np.ndarray) -> ComplexField:
    """Multiply the spectrum by a symbol array and transform back."""
    modes = np.fft.fftn(field.values, norm="ortho") * multiplier
    return ComplexField(field.grid, np.fft.ifftn(modes, norm="ortho"))


def inner_product(f: ComplexField, g: ComplexField) -> complex:
    """(f, g) = h^d * sum f conj(g)."""
    require_same_grid(f, g)
    return complex(f.grid.cell_volume * np.sum(f.values * np.conj(g.values)))


def spectral_sum(field: ComplexField, weight: np.ndarray) -> float:
    """h^d * sum weight_k |u_k|^2 over unitary coefficients."""
    modes = np.fft.fftn(field.values, norm="ortho")
    return float(field.grid.cell_volume * np.sum(weight * np.abs(modes) ** 2))


def boundary_amplitude_ratio(field: ComplexField) -> float:
    peak = float(np.max(np.abs(field.values)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(field.values[field.grid.outer_shell]))) / peak


def check_boundary(field: ComplexField, tol: float = BOUNDARY_TOL) -> float:
    """Raise BoundaryGuardError unless max |u| on the outer shell < tol * max |u|."""
    ratio = boundary_amplitude_ratio(field)
    if ratio >= tol:
        raise BoundaryGuardError(
            f"Boundary amplitude ratio {ratio:.3e} exceeds {tol:.1e}; enlarge L or localize the datum"
        )
    return ratio


def spectral_tail_fraction(field: ComplexField) -> float:
    """Share of spectral energy in the top octave (|m| > n/4 along any axis)."""
    grid = field.grid
    power = np.abs(np.fft.fftn(field.values, norm="ortho")) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return 0.0
    m = np.abs(np.fft.fftfreq(grid.n) * grid.n)
    m_mesh = np.meshgrid(*((m,) * grid.d), indexing="ij")
    tail = np.zeros(grid.shape, dtype=bool)
    for mm in m_mesh:
        tail |= mm > grid.n // 4
    return float(np.sum(power[tail])) / total
