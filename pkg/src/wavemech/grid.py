"""Spatial discretization and the complex wave-field container.

A :class:`Grid` is a uniform periodic 1-D mesh together with its discrete
Fourier wavenumbers; a :class:`WaveField` is a complex amplitude array living
on a grid at one instant.  Both are immutable value objects: propagation and
every other transformation produce new snapshots instead of mutating state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    """Uniform periodic mesh of ``n_points`` cells starting at ``x_min``.

    ``x[j] = x_min + j*dx`` for ``j = 0 .. n_points-1`` (the right endpoint
    ``x_min + L`` is identified with ``x_min``).  Wavenumbers follow the
    standard DFT layout, non-negative frequencies first, then negative ones,
    with spacing ``2*pi/L`` and ``max |k| = pi/dx``.
    """

    n_points: int
    x_min: float
    dx: float
    x: np.ndarray = field(repr=False, compare=False)
    k: np.ndarray = field(repr=False, compare=False)

    @property
    def length(self) -> float:
        return self.n_points * self.dx

    @property
    def x_max(self) -> float:
        return self.x_min + self.length

    def same_mesh(self, other: "Grid") -> bool:
        return (
            self.n_points == other.n_points
            and self.x_min == other.x_min
            and self.dx == other.dx
        )


@dataclass(frozen=True)
class WaveField:
    """Complex amplitudes on a grid at one time.

    Holds the wave function of either the quantum or the classical equation;
    modulus and phase (the polar decomposition) are recovered with
    :func:`modulus_phase`.
    """

    grid: Grid
    psi: np.ndarray = field(repr=False, compare=False)
    time: float = 0.0

    def __post_init__(self):
        if self.psi.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"field length {self.psi.shape} does not match grid "
                f"({self.grid.n_points} points)"
            )

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


def make_grid(n_points: int, x_min: float, x_max: float) -> Grid:
    """Build a uniform periodic grid on ``[x_min, x_max)``.

    ``n_points`` must be a power of two (and at least 8) so the spectral
    transforms stay fast and exactly invertible.
    """
    if n_points < 8 or (n_points & (n_points - 1)) != 0:
        raise ConfigurationError(
            f"n_points must be a power of two >= 8, got {n_points}"
        )
    if not (np.isfinite(x_min) and np.isfinite(x_max)) or x_max <= x_min:
        raise ConfigurationError(
            f"degenerate domain [{x_min}, {x_max}]"
        )
    dx = (x_max - x_min) / n_points
    x = x_min + dx * np.arange(n_points)
    k = 2.0 * np.pi * np.fft.fftfreq(n_points, d=dx)
    return Grid(n_points=n_points, x_min=float(x_min), dx=float(dx),
                x=_readonly(x), k=_readonly(k))


def make_field(grid: Grid, psi: np.ndarray, time: float = 0.0) -> WaveField:
    """Wrap amplitudes into an immutable WaveField (copies and locks them)."""
    amp = np.array(psi, dtype=np.complex128)
    return WaveField(grid=grid, psi=_readonly(amp), time=float(time))


def norm(fld: WaveField) -> float:
    """Total probability ``sum |psi|^2 dx`` (rectangle rule, exact on a
    periodic mesh)."""
    return float(np.sum(np.abs(fld.psi) ** 2) * fld.grid.dx)


def modulus_phase(fld: WaveField, hbar: float = 1.0):
    """Polar decomposition ``psi = R exp(i S / hbar)``.

    Returns ``(R, S)`` with ``R >= 0`` and ``arg`` taken in ``(-pi, pi]``;
    no phase unwrapping is attempted, and ``S`` is reported as 0 wherever
    ``R`` vanishes.  Consumers that need a phase gradient should use the
    current-based velocity field instead.
    """
    r = np.abs(fld.psi)
    s = hbar * np.angle(fld.psi)
    s = np.where(r == 0.0, 0.0, s)
    return r, s


def from_modulus_phase(grid: Grid, r: np.ndarray, s: np.ndarray,
                       time: float = 0.0, hbar: float = 1.0) -> WaveField:
    """Rebuild a field from its polar decomposition."""
    return make_field(grid, r * np.exp(1j * s / hbar), time)


def spectral_gradient(grid: Grid, values: np.ndarray) -> np.ndarray:
    """d/dx via the Fourier representation (periodic, spectrally accurate)."""
    return np.fft.ifft(1j * grid.k * np.fft.fft(values))
