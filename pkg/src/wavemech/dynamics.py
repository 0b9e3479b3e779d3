"""Split-step spectral propagation and the quantum potential.

One engine advances all three wave equations.  Each step applies half a
kinetic rotation in the spectral domain, a full potential phase in the
spatial domain, and another half kinetic rotation (Strang splitting, second
order, norm-preserving).  The effective potential decides the equation
being solved:

    quantum    ->  U
    classical  ->  U - Q
    epsilon    ->  U - (1 - eps) * Q

with Q the quantum potential recomputed from the current field at every
step.  Because Q carries a 1/R factor it is numerically fragile where the
density is small, so R is smoothed with a centered moving average before the
second derivative is taken (finite differences), and the division is clamped
at a relative density floor.

The kinetic factor also zeroes wavenumbers above a guard cutoff (see
:func:`spectral_cutoff`).  Subtracting Q makes the equation anti-dispersive,
and the plain split-step map then amplifies round-off at the wavenumbers
whose kinetic phase per step approaches pi; the guard removes that band.
Every shipped scenario picks dt small enough that the resonant band lies
beyond the grid Nyquist, which makes the guard a no-op and every step factor
exactly unimodular, so the norm is conserved to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Optional, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter1d

from .errors import ConfigurationError, PropagationDivergedError
from .grid import Grid, WaveField, make_field
from .scenarios import ScenarioConfig, build_initial_state, evaluate_potential


@dataclass(frozen=True)
class EngineMode:
    """Which wave equation to integrate.

    ``q_weight`` is the coefficient of -Q in the effective potential:
    0 for quantum, 1 for classical, ``1 - eps`` in between.  ``epsilon(1.0)``
    therefore reproduces the quantum engine exactly and ``epsilon(0.0)`` the
    classical one.
    """

    kind: str
    eps: float = 1.0

    def __post_init__(self):
        if self.kind not in ("quantum", "classical", "epsilon"):
            raise ConfigurationError(f"unknown engine mode {self.kind!r}")
        if not 0.0 <= self.eps <= 1.0:
            raise ConfigurationError(f"eps must lie in [0, 1], got {self.eps}")

    @staticmethod
    def quantum() -> "EngineMode":
        return EngineMode(kind="quantum", eps=1.0)

    @staticmethod
    def classical() -> "EngineMode":
        return EngineMode(kind="classical", eps=0.0)

    @staticmethod
    def epsilon(eps: float) -> "EngineMode":
        return EngineMode(kind="epsilon", eps=eps)

    @property
    def q_weight(self) -> float:
        if self.kind == "quantum":
            return 0.0
        if self.kind == "classical":
            return 1.0
        return 1.0 - self.eps


def engine_mode_for(config: ScenarioConfig) -> EngineMode:
    if config.engine == "quantum":
        return EngineMode.quantum()
    if config.engine == "classical":
        return EngineMode.classical()
    if config.engine == "epsilon":
        return EngineMode.epsilon(config.eps)
    raise ConfigurationError(
        f"engine {config.engine!r} does not propagate a wave field"
    )


@dataclass(frozen=True)
class QuantumPotentialField:
    """Q(x) = -(hbar^2/2m) R''/R on a grid, with the smoothing and floor
    that produced it."""

    grid: Grid
    values: np.ndarray = dc_field(repr=False, compare=False)
    smoothing_window: int = 1
    density_floor: float = 1e-6
    r_smooth: np.ndarray = dc_field(default=None, repr=False, compare=False)


def smoothed_modulus(fld: WaveField, smoothing_window: int) -> np.ndarray:
    """|psi| passed through an n-point Gaussian smoother with periodic wrap.

    The kernel standard deviation is ``n / sqrt(12)`` cells, the second
    moment of an n-point boxcar, so the smoothing bias matches a moving
    average of the same nominal width.  A Gaussian kernel is used because
    its transfer function is strictly positive: a boxcar's sign-flipped
    side lobes feed curvature of the wrong sign into Q and destabilize the
    classical engine.
    """
    r = np.abs(fld.psi)
    if smoothing_window == 1:
        return r
    sigma_cells = smoothing_window / math.sqrt(12.0)
    return gaussian_filter1d(r, sigma=sigma_cells, mode="wrap")


def quantum_potential(fld: WaveField, smoothing_window: int = 5,
                      density_floor: float = 1e-6,
                      hbar: float = 1.0, mass: float = 1.0
                      ) -> QuantumPotentialField:
    """Quantum potential of a field.

    The modulus is smoothed first (window 1 disables smoothing), the second
    derivative uses central differences with periodic wrap, and the divisor
    is clamped at ``density_floor`` times the peak smoothed modulus so Q
    stays finite in the tails.  In the window-1, floor->0 limit on a smooth
    field this is exactly -(hbar^2/2m) R''/R.  Scale-invariant in the field
    amplitude: psi and c*psi give the same Q for any c > 0.
    """
    if smoothing_window < 1 or smoothing_window % 2 == 0:
        raise ConfigurationError(
            f"smoothing_window must be odd and positive, got {smoothing_window}"
        )
    if density_floor <= 0:
        raise ConfigurationError("density_floor must be positive")
    r_s = smoothed_modulus(fld, smoothing_window)
    peak = r_s.max()
    if peak == 0.0:
        q = np.zeros(fld.grid.n_points)
    else:
        dx = fld.grid.dx
        second = (np.roll(r_s, -1) - 2.0 * r_s + np.roll(r_s, 1)) / (dx * dx)
        q = -(hbar * hbar / (2.0 * mass)) * second / np.maximum(
            r_s, density_floor * peak)
    return QuantumPotentialField(
        grid=fld.grid, values=q, smoothing_window=smoothing_window,
        density_floor=density_floor, r_smooth=r_s)


# modes whose kinetic phase per step reaches this fraction of pi are dropped;
# the split-step resonance sits exactly at pi
_GUARD_PHASE_FRACTION = 0.85


def spectral_cutoff(grid: Grid, dt: float, hbar: float = 1.0,
                    mass: float = 1.0) -> float:
    """Largest wavenumber the propagator keeps.

    The kinetic phase per step, ``hbar k^2 dt / 2m``, must stay clear of pi:
    at pi the split-step map resonates and anti-dispersive (classical-engine)
    modes grow without bound.  Modes at or above 85% of the resonant phase
    are dropped.  When dt is small enough that the cutoff exceeds the grid
    Nyquist, nothing is filtered and the step is exactly unitary; every
    shipped preset is in that regime.
    """
    return math.sqrt(_GUARD_PHASE_FRACTION * 2.0 * math.pi * mass
                     / (hbar * dt))


def kinetic_half_factor(grid: Grid, dt: float, hbar: float = 1.0,
                        mass: float = 1.0) -> np.ndarray:
    """Spectral multiplier for half a kinetic step, guard filter included."""
    cut = spectral_cutoff(grid, dt, hbar, mass)
    factor = np.exp(-1j * (hbar * dt / (4.0 * mass)) * grid.k ** 2)
    if cut >= float(np.abs(grid.k).max()):
        return factor
    return np.where(np.abs(grid.k) <= cut, factor, 0.0)


def split_step(fld: WaveField, potential: np.ndarray, mode: EngineMode,
               dt: float, *, hbar: float = 1.0, mass: float = 1.0,
               smoothing_window: int = 5, density_floor: float = 1e-6
               ) -> WaveField:
    """One Strang step: half kinetic, full effective potential, half kinetic.

    For classical/epsilon modes the quantum potential is recomputed from the
    field after the first half kinetic step and held frozen over the
    potential phase.  The phase factors are unimodular and the guard filter
    only touches wavenumbers that carry round-off for well-resolved fields,
    so the norm is preserved to rounding in every mode.
    """
    if dt <= 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    grid = fld.grid
    kin_half = kinetic_half_factor(grid, dt, hbar, mass)
    psi = np.fft.ifft(np.fft.fft(fld.psi) * kin_half)
    psi = psi * _potential_phase(grid, psi, potential, mode, dt, hbar, mass,
                                 smoothing_window, density_floor)
    psi = np.fft.ifft(np.fft.fft(psi) * kin_half)
    if not np.all(np.isfinite(psi.view(np.float64))):
        raise PropagationDivergedError(
            f"non-finite amplitudes after one {mode.kind} step at "
            f"t={fld.time:.6g}"
        )
    return make_field(grid, psi, fld.time + dt)


def _potential_phase(grid, psi, potential, mode, dt, hbar, mass,
                     smoothing_window, density_floor):
    w = mode.q_weight
    if w == 0.0:
        v_eff = potential
    else:
        q = quantum_potential(WaveField(grid, psi, 0.0), smoothing_window,
                              density_floor, hbar, mass).values
        v_eff = potential - w * q
    return np.exp(-1j * (dt / hbar) * v_eff)


def check_sanity_bound(config: ScenarioConfig, potential: np.ndarray) -> None:
    """Reject configurations whose potential phase rotates too far per step.

    The split-step scheme is unconditionally stable for the kinetic part, so
    the only resolution requirement is on the potential phase;
    ``dt * max|U| / hbar < 0.1`` keeps it well inside a tenth of a radian.
    """
    bound = config.dt * float(np.max(np.abs(potential))) / config.hbar
    if bound >= 0.1:
        raise ConfigurationError(
            f"dt*max|U|/hbar = {bound:.3g} >= 0.1; reduce dt or shrink the "
            f"domain for scenario {config.name!r}"
        )


def propagate(config: ScenarioConfig, compute_q: Optional[bool] = None
              ) -> Iterator[Tuple[WaveField, QuantumPotentialField]]:
    """Run one scenario, yielding (field, quantum potential) snapshots.

    The initial state is yielded first, then every ``snapshot_stride``-th
    step up to ``t_final`` (the final step is always included).  Snapshot Q
    is computed from the yielded field with the scenario's smoothing window
    and floor; in quantum mode, where Q does not enter the propagation, it
    is filled with zeros unless ``compute_q=True`` asks for it anyway.
    """
    mode = engine_mode_for(config)
    grid = config.build_grid()
    potential = evaluate_potential(config.potential, grid)
    check_sanity_bound(config, potential)
    n_steps = int(round(config.t_final / config.dt))
    if n_steps < 1:
        raise ConfigurationError(
            f"t_final={config.t_final} shorter than one step dt={config.dt}")

    hbar, mass, dt = config.hbar, config.mass, config.dt
    w = mode.q_weight
    want_q = bool(compute_q) if compute_q is not None else w != 0.0
    kin_half = kinetic_half_factor(grid, dt, hbar, mass)

    def snapshot(psi: np.ndarray, step: int):
        fld = make_field(grid, psi, step * dt)
        if want_q:
            qf = quantum_potential(fld, config.smoothing_window,
                                   config.density_floor, hbar, mass)
        else:
            qf = QuantumPotentialField(
                grid=grid, values=np.zeros(grid.n_points),
                smoothing_window=config.smoothing_window,
                density_floor=config.density_floor,
                r_smooth=np.abs(psi))
        return fld, qf

    psi = build_initial_state(config.initial, grid).psi
    yield snapshot(psi, 0)
    phase_scale = -1j * (dt / hbar)
    for step in range(1, n_steps + 1):
        psi = np.fft.ifft(np.fft.fft(psi) * kin_half)
        if w == 0.0:
            v_eff = potential
        else:
            q = quantum_potential(WaveField(grid, psi, 0.0),
                                  config.smoothing_window,
                                  config.density_floor, hbar, mass).values
            v_eff = potential - w * q
        psi = psi * np.exp(phase_scale * v_eff)
        psi = np.fft.ifft(np.fft.fft(psi) * kin_half)
        if not np.all(np.isfinite(psi.view(np.float64))):
            raise PropagationDivergedError(
                f"scenario {config.name!r}: non-finite amplitudes at step "
                f"{step} (t={step * dt:.6g}, mode={mode.kind})"
            )
        if step % config.snapshot_stride == 0 or step == n_steps:
            yield snapshot(psi, step)


def rosen_gradient_diagnostic(qf: QuantumPotentialField) -> float:
    """max |dQ/dx| over the supported region, a scalar classicality gauge.

    Small values mean Q is nearly constant where the packet lives, which is
    the condition for wave-guided trajectories to obey Newton's law.  The
    supported region is where the smoothed modulus exceeds ten times the
    clamping floor.
    """
    r_s = qf.r_smooth
    peak = r_s.max() if r_s is not None else 0.0
    if peak == 0.0:
        return 0.0
    mask = r_s > 10.0 * qf.density_floor * peak
    if not np.any(mask):
        return 0.0
    dx = qf.grid.dx
    grad = (np.roll(qf.values, -1) - np.roll(qf.values, 1)) / (2.0 * dx)
    return float(np.max(np.abs(grad[mask])))
