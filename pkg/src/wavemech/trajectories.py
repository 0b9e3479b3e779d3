"""Trajectory ensembles: wave-guided (Bohmian / CSE) and Newtonian.

Wave-guided trajectories integrate dX/dt = v(X, t) where v is the velocity
field carried by the propagated wave function; because that field is
single-valued, trajectories of one run can never cross.  Newtonian
trajectories integrate m X'' = -dU/dx directly with velocity Verlet and are
free to cross.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional

import numpy as np

from .errors import ConfigurationError
from .grid import Grid, WaveField, norm
from .scenarios import PotentialSpec, ScenarioConfig


@dataclass(frozen=True)
class VelocityField:
    """Guiding velocity v(x) at one time, derived from the probability
    current so no phase unwrapping is ever needed."""

    grid: Grid
    v: np.ndarray = dc_field(repr=False, compare=False)
    time: float = 0.0


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Positions of n_traj particles sharing one clock.

    ``positions[i, j]`` is particle i at ``times[j]``.  ``provenance`` is
    "bohmian", "cse" or "newtonian".  Initial velocities are recorded for
    Newtonian ensembles (guided families derive velocity from the field);
    Newtonian ensembles also keep their full velocity history for energy
    diagnostics.  ``clamped`` flags trajectories that ran into the edge of
    the grid and were pinned there.
    """

    times: np.ndarray
    positions: np.ndarray
    provenance: str
    initial_velocities: Optional[np.ndarray] = None
    velocity_history: Optional[np.ndarray] = dc_field(
        default=None, repr=False, compare=False)
    clamped: bool = False

    def __post_init__(self):
        if self.positions.shape[1] != self.times.shape[0]:
            raise ConfigurationError("positions and times disagree in length")
        if np.any(np.diff(self.times) <= 0):
            raise ConfigurationError("snapshot times must strictly increase")

    @property
    def n_traj(self) -> int:
        return self.positions.shape[0]


def velocity_field(fld: WaveField, density_floor: float = 1e-6,
                   hbar: float = 1.0, mass: float = 1.0) -> VelocityField:
    """v = (hbar/m) Im(psi' conj(psi)) / |psi|^2 with a clamped divisor.

    Equals (1/m) dS/dx wherever psi does not vanish; psi' is spectral.
    """
    psi = fld.psi
    dens = np.abs(psi) ** 2
    peak = dens.max()
    if peak == 0.0:
        return VelocityField(fld.grid, np.zeros(fld.grid.n_points), fld.time)
    dpsi = np.fft.ifft(1j * fld.grid.k * np.fft.fft(psi))
    current = np.imag(dpsi * np.conj(psi))
    v = (hbar / mass) * current / np.maximum(dens, density_floor ** 2 * peak)
    return VelocityField(fld.grid, v, fld.time)


def seed_positions(initial_field: WaveField, n_traj: int) -> np.ndarray:
    """Quantile starting positions: seed i sits at the (i - 1/2)/n_traj
    quantile of |psi(x, 0)|^2.

    Consecutive seeds then bracket probability 1/n_traj each, computed from
    the cumulative grid sum with linear interpolation between cell edges.
    """
    if n_traj < 1:
        raise ConfigurationError(f"n_traj must be >= 1, got {n_traj}")
    total = norm(initial_field)
    if abs(total - 1.0) > 1e-6:
        raise ConfigurationError(
            f"seeding requires a normalized field, norm is {total!r}")
    grid = initial_field.grid
    dens = initial_field.density()
    cum = np.concatenate([[0.0], np.cumsum(dens) * grid.dx])
    cum /= cum[-1]
    edges = np.concatenate([[grid.x[0] - 0.5 * grid.dx],
                            grid.x + 0.5 * grid.dx])
    quantiles = (np.arange(1, n_traj + 1) - 0.5) / n_traj
    return np.interp(quantiles, cum, edges)


class GuidedIntegrator:
    """Incremental RK4 advancement of guided trajectories between snapshots.

    The velocity is interpolated linearly in x between grid points and
    linearly in t between the two bracketing snapshots.  Feed snapshots one
    at a time; positions are recorded at every snapshot.

    The snapshot stride must be fine enough that no trajectory moves more
    than ``max_step_cells`` grid cells per interval (the regularized
    velocity field can be arbitrarily fast at density nodes, so the bound is
    checked on the realized motion, which is what the interpolation accuracy
    actually depends on).
    """

    def __init__(self, seeds: np.ndarray, *, density_floor: float = 1e-6,
                 hbar: float = 1.0, mass: float = 1.0,
                 max_step_cells: float = 5.0):
        self.x = np.asarray(seeds, dtype=float).copy()
        self.density_floor = density_floor
        self.hbar = hbar
        self.mass = mass
        self.max_step_cells = max_step_cells
        self.clamped = False
        self._prev: Optional[VelocityField] = None
        self.times: list = []
        self.history: list = []

    def push(self, fld: WaveField) -> None:
        vf = velocity_field(fld, self.density_floor, self.hbar, self.mass)
        if self._prev is None:
            self.times.append(fld.time)
            self.history.append(self.x.copy())
            self._prev = vf
            return
        h = fld.time - self._prev.time
        if h <= 0:
            raise ConfigurationError("snapshots must advance in time")
        grid = fld.grid
        xg = grid.x
        v0, v1 = self._prev.v, vf.v
        vmid = 0.5 * (v0 + v1)
        x = self.x
        k1 = np.interp(x, xg, v0)
        k2 = np.interp(x + 0.5 * h * k1, xg, vmid)
        k3 = np.interp(x + 0.5 * h * k2, xg, vmid)
        k4 = np.interp(x + h * k3, xg, v1)
        x_new = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        moved = float(np.max(np.abs(x_new - x)))
        if moved > self.max_step_cells * grid.dx:
            raise ConfigurationError(
                f"snapshot stride too coarse for trajectory integration: a "
                f"trajectory moved {moved:.3g} in one interval, over "
                f"{self.max_step_cells} cells ({self.max_step_cells * grid.dx:.3g})"
            )
        lo, hi = xg[0], xg[-1]
        if np.any(x_new < lo) or np.any(x_new > hi):
            self.clamped = True
            x_new = np.clip(x_new, lo, hi)
        self.x = x_new
        self.times.append(fld.time)
        self.history.append(x_new.copy())
        self._prev = vf

    def finish(self, provenance: str) -> TrajectoryEnsemble:
        return TrajectoryEnsemble(
            times=np.asarray(self.times),
            positions=np.asarray(self.history).T.copy(),
            provenance=provenance,
            clamped=self.clamped,
        )


def advance_ensemble(fields: Iterable[WaveField], seeds: np.ndarray,
                     provenance: str = "bohmian", *,
                     density_floor: float = 1e-6,
                     hbar: float = 1.0, mass: float = 1.0
                     ) -> TrajectoryEnsemble:
    """Advance seeds through a stream of field snapshots (RK4 per interval)."""
    stepper = GuidedIntegrator(seeds, density_floor=density_floor,
                               hbar=hbar, mass=mass)
    for fld in fields:
        stepper.push(fld)
    if not stepper.times:
        raise ConfigurationError("no snapshots supplied")
    return stepper.finish(provenance)


def _force_function(spec: PotentialSpec):
    """Analytic force -dU/dx for each potential kind."""
    if spec.kind == "free":
        return lambda x: np.zeros_like(x)
    if spec.kind == "linear":
        return lambda x: np.full_like(x, -spec.mass * spec.g)
    if spec.kind == "gaussian_barrier":
        def barrier_force(x):
            dxb = x - spec.x_b
            return (spec.v_b * dxb / spec.sigma_b ** 2
                    * np.exp(-dxb ** 2 / (2.0 * spec.sigma_b ** 2)))
        return barrier_force
    if spec.kind == "harmonic":
        return lambda x: -spec.mass * spec.omega ** 2 * x
    raise ConfigurationError(f"no analytic force for kind {spec.kind!r}")


def newtonian_ensemble(config: ScenarioConfig, seeds: np.ndarray,
                       v0: Optional[float] = None) -> TrajectoryEnsemble:
    """Velocity-Verlet ensemble under the scenario potential.

    Every seed starts with the same velocity ``v0`` (by default
    hbar*k0/mass, the field-free counterpart of the packet's uniform initial
    phase gradient).  Positions and velocities are recorded on the same
    snapshot clock the wave engines use.
    """
    if v0 is None:
        v0 = config.hbar * config.initial.k0 / config.mass
    force = _force_function(config.potential)
    dt, mass = config.dt, config.mass
    n_steps = int(round(config.t_final / config.dt))
    stride = config.snapshot_stride

    x = np.asarray(seeds, dtype=float).copy()
    v = np.full_like(x, float(v0))
    a = force(x) / mass
    times = [0.0]
    xs = [x.copy()]
    vs = [v.copy()]
    for step in range(1, n_steps + 1):
        v_half = v + 0.5 * dt * a
        x = x + dt * v_half
        a = force(x) / mass
        v = v_half + 0.5 * dt * a
        if step % stride == 0 or step == n_steps:
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
                raise ConfigurationError(
                    f"Newtonian integration overflowed at step {step}")
            times.append(step * dt)
            xs.append(x.copy())
            vs.append(v.copy())
    return TrajectoryEnsemble(
        times=np.asarray(times),
        positions=np.asarray(xs).T.copy(),
        provenance="newtonian",
        initial_velocities=np.full(len(seeds), float(v0)),
        velocity_history=np.asarray(vs).T.copy(),
    )


def free_fall_analytic(x0: float, v0: float, g: float, t):
    """Closed-form constant-acceleration trajectory x0 + v0 t - g t^2 / 2."""
    t = np.asarray(t, dtype=float)
    out = x0 + v0 * t - 0.5 * g * t * t
    return out if out.ndim else float(out)


def ensemble_energies(ensemble: TrajectoryEnsemble, spec: PotentialSpec,
                      mass: float = 1.0) -> np.ndarray:
    """Per-trajectory mechanical energy at every snapshot (Newtonian only)."""
    if ensemble.velocity_history is None:
        raise ConfigurationError(
            "energy history needs a Newtonian ensemble with velocities")
    x = ensemble.positions
    v = ensemble.velocity_history
    if spec.kind == "free":
        u = np.zeros_like(x)
    elif spec.kind == "linear":
        u = spec.mass * spec.g * x
    elif spec.kind == "gaussian_barrier":
        u = spec.v_b * np.exp(-((x - spec.x_b) ** 2)
                              / (2.0 * spec.sigma_b ** 2))
    else:
        u = 0.5 * spec.mass * spec.omega ** 2 * x ** 2
    return 0.5 * mass * v ** 2 + u
