"""Diagnostics: energies, widths, transmission, crossings, equivariance.

All functions here are pure consumers of immutable snapshots; nothing in
this module advances a simulation.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .grid import WaveField, norm
from .scenarios import PotentialSpec, ScenarioConfig
from .trajectories import TrajectoryEnsemble, newtonian_ensemble


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of per-snapshot observables."""

    time: float
    norm: float
    mean_x: float
    width: float
    e_classical: float
    e_quantum: float
    transmission_fraction: float  # NaN for non-barrier scenarios
    rosen_diagnostic: float
    crossing_count_to_date: int


@dataclass(frozen=True)
class NarrowingStudyResult:
    """Center-of-mass narrowing sweep, one row per particle count N, ordered
    by N: (N, sigma_cm, max_deviation, max_trajectory_deviation).

    ``max_deviation`` compares the packet mean against the Newtonian
    reference; ``max_trajectory_deviation`` is the worst single-trajectory
    mismatch, reported for context but carrying the non-crossing artifacts
    that narrowing is supposed to suppress.
    """

    rows: List[tuple]


def mean_position(fld: WaveField) -> float:
    dens = fld.density()
    total = np.sum(dens) * fld.grid.dx
    return float(np.sum(fld.grid.x * dens) * fld.grid.dx / total)


def packet_width(fld: WaveField) -> float:
    """Standard deviation of |psi|^2 on the grid."""
    dens = fld.density()
    total = np.sum(dens) * fld.grid.dx
    mu = np.sum(fld.grid.x * dens) * fld.grid.dx / total
    var = np.sum((fld.grid.x - mu) ** 2 * dens) * fld.grid.dx / total
    return float(np.sqrt(max(var, 0.0)))


def dispersion_width(sigma: float, t, hbar: float = 1.0, mass: float = 1.0):
    """Analytic free-packet width parameter sigma(t) = sigma
    sqrt(1 + (hbar t / m sigma^2)^2).

    Relates to the density standard deviation by a factor sqrt(2):
    std(|psi|^2) = sigma(t) / sqrt(2).
    """
    t = np.asarray(t, dtype=float)
    out = sigma * np.sqrt(1.0 + (hbar * t / (mass * sigma ** 2)) ** 2)
    return out if out.ndim else float(out)


def packet_energy(fld: WaveField, potential: np.ndarray,
                  hbar: float = 1.0, mass: float = 1.0):
    """(kinetic, total) energy of a normalized field.

    The kinetic term -(hbar^2/2m) int psi* psi'' dx is evaluated spectrally;
    for a width-sigma Gaussian with wavenumber k0 it equals
    hbar^2 k0^2 / 2m + hbar^2 / 4 m sigma^2.
    """
    grid = fld.grid
    psi_hat = np.fft.fft(fld.psi)
    # |psi_hat|^2 * dx / n integrates |psi|^2 to the norm, so weighting by
    # k^2 gives the kinetic integral in the same convention
    weight = grid.dx / grid.n_points
    e_kin = (hbar ** 2 / (2.0 * mass)) * float(
        np.sum(grid.k ** 2 * np.abs(psi_hat) ** 2) * weight)
    e_pot = float(np.sum(potential * fld.density()) * grid.dx)
    return e_kin, e_kin + e_pot


def classical_point_energy(k0: float, hbar: float = 1.0,
                           mass: float = 1.0) -> float:
    """Kinetic energy hbar^2 k0^2 / 2m of the equivalent point particle."""
    return hbar ** 2 * k0 ** 2 / (2.0 * mass)


def transmission_fraction(fld: WaveField, barrier: PotentialSpec) -> float:
    """Probability past the barrier, cut at x_b + 3 sigma_b (where the
    barrier has dropped to ~1% of its height)."""
    if barrier.kind != "gaussian_barrier":
        raise ConfigurationError(
            f"transmission needs a gaussian_barrier potential, got "
            f"{barrier.kind!r}")
    cut = barrier.x_b + 3.0 * barrier.sigma_b
    dens = fld.density()
    mask = fld.grid.x >= cut
    total = np.sum(dens) * fld.grid.dx
    return float(np.sum(dens[mask]) * fld.grid.dx / total)


def crossing_count(ensemble: TrajectoryEnsemble, margin: float = 0.0) -> int:
    """Adjacent-pair order inversions summed over snapshot transitions.

    The ensemble must be sorted by initial position.  A pair contributes one
    event per transition in which its separation flips sign (beyond
    ``margin``); guided families should report zero, Newtonian families may
    not.
    """
    pos = ensemble.positions
    if pos.shape[0] < 2:
        return 0
    if np.any(np.diff(pos[:, 0]) < -margin):
        raise ConfigurationError(
            "crossing_count expects trajectories sorted by initial position")
    gaps = np.diff(pos, axis=0)
    before, after = gaps[:, :-1], gaps[:, 1:]
    flips = ((before > margin) & (after < -margin)) | \
            ((before < -margin) & (after > margin))
    return int(np.count_nonzero(flips))


def crossing_count_series(ensemble: TrajectoryEnsemble,
                          margin: float = 0.0) -> np.ndarray:
    """Cumulative crossing count at each snapshot (0 at the first)."""
    pos = ensemble.positions
    n_times = pos.shape[1]
    if pos.shape[0] < 2:
        return np.zeros(n_times, dtype=int)
    gaps = np.diff(pos, axis=0)
    before, after = gaps[:, :-1], gaps[:, 1:]
    flips = ((before > margin) & (after < -margin)) | \
            ((before < -margin) & (after > margin))
    events = np.count_nonzero(flips, axis=0)
    return np.concatenate([[0], np.cumsum(events)])


def _density_cdf(fld: WaveField):
    grid = fld.grid
    dens = fld.density()
    cum = np.concatenate([[0.0], np.cumsum(dens) * grid.dx])
    cum /= cum[-1]
    edges = np.concatenate([[grid.x[0] - 0.5 * grid.dx],
                            grid.x + 0.5 * grid.dx])
    return edges, cum


def equivariance_distance(ensemble: TrajectoryEnsemble,
                          fields: Sequence[WaveField], t: float) -> float:
    """Kolmogorov-Smirnov distance between the ensemble's empirical
    distribution at time t and |psi(., t)|^2."""
    idx_e = int(np.argmin(np.abs(ensemble.times - t)))
    if abs(ensemble.times[idx_e] - t) > 1e-9 * max(1.0, abs(t)):
        raise ConfigurationError(f"time {t} not among ensemble snapshots")
    fld = None
    for cand in fields:
        if abs(cand.time - t) <= 1e-9 * max(1.0, abs(t)):
            fld = cand
            break
    if fld is None:
        raise ConfigurationError(f"time {t} not among field snapshots")
    xs = np.sort(ensemble.positions[:, idx_e])
    edges, cum = _density_cdf(fld)
    f = np.interp(xs, edges, cum)
    n = xs.size
    above = np.max(np.arange(1, n + 1) / n - f)
    below = np.max(f - np.arange(0, n) / n)
    return float(max(above, below))


def build_diagnostics(config: ScenarioConfig,
                      fields: Sequence[WaveField],
                      q_values: Sequence[np.ndarray],
                      rosen: Sequence[float],
                      ensemble: Optional[TrajectoryEnsemble]
                      ) -> List[DiagnosticsRecord]:
    """Assemble per-snapshot records from collected run data."""
    grid = fields[0].grid
    from .scenarios import evaluate_potential
    potential = evaluate_potential(config.potential, grid)
    is_barrier = config.potential.kind == "gaussian_barrier"
    e_cl = classical_point_energy(config.initial.k0, config.hbar, config.mass)
    if ensemble is not None:
        crossings = crossing_count_series(ensemble)
    else:
        crossings = np.zeros(len(fields), dtype=int)
    records = []
    for i, fld in enumerate(fields):
        _, e_tot = packet_energy(fld, potential, config.hbar, config.mass)
        records.append(DiagnosticsRecord(
            time=float(fld.time),
            norm=norm(fld),
            mean_x=mean_position(fld),
            width=packet_width(fld),
            e_classical=e_cl,
            e_quantum=e_tot,
            transmission_fraction=(transmission_fraction(fld, config.potential)
                                   if is_barrier else float("nan")),
            rosen_diagnostic=float(rosen[i]),
            crossing_count_to_date=int(crossings[i]),
        ))
    return records


def narrowing_study(base: ScenarioConfig, n_list: Sequence[int]
                    ) -> NarrowingStudyResult:
    """Shrink the packet width as sigma/sqrt(N) and measure how far the
    classical-wave mean strays from the matching Newtonian trajectory.

    Each row runs the classical engine with the rescaled width and records
    the maximum over time of |<x>(t) - X_newton(t)|, where the Newtonian
    reference starts at x0 with velocity hbar k0 / m.  Larger N (narrower
    packets) should track Newton at least as well as smaller N.
    """
    from .runner import run_field_scenario

    if base.engine != "classical":
        raise ConfigurationError("narrowing study needs a classical-engine base")
    if base.initial.kind != "gaussian":
        raise ConfigurationError("narrowing study needs a gaussian initial state")
    grid = base.build_grid()
    rows = []
    for n in n_list:
        if n < 1:
            raise ConfigurationError(f"particle counts must be positive, got {n}")
        sigma_cm = base.initial.sigma / np.sqrt(n)
        if sigma_cm < 8.0 * grid.dx:
            raise ConfigurationError(
                f"sigma_cm = {sigma_cm:.4g} for N = {n} is under 8 grid "
                f"cells (dx = {grid.dx:.4g}); use a finer grid")
        cfg = base.replace(
            name=f"{base.name}_narrow{n}",
            initial=dataclasses.replace(base.initial, sigma=float(sigma_cm)),
        )
        run = run_field_scenario(cfg)
        means = np.array([mean_position(f) for f in run.fields])
        reference = newtonian_ensemble(
            cfg, np.array([base.initial.x0]),
            v0=base.hbar * base.initial.k0 / base.mass)
        deviation = float(np.max(np.abs(means - reference.positions[0])))
        per_traj = float("nan")
        if run.ensemble is not None:
            newton = newtonian_ensemble(cfg, run.ensemble.positions[:, 0])
            per_traj = float(np.max(np.abs(run.ensemble.positions
                                           - newton.positions)))
        rows.append((int(n), float(sigma_cm), deviation, per_traj))
    return NarrowingStudyResult(rows=rows)
