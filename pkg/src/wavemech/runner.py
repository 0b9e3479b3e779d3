"""Run orchestration: one scenario in, snapshots plus diagnostics out.

``run_field_scenario`` drives the wave engines and keeps every snapshot in
memory (desk-scale grids make this cheap); ``run_scenario`` additionally
dispatches Newton-only configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .analysis import DiagnosticsRecord, build_diagnostics
from .dynamics import propagate, rosen_gradient_diagnostic
from .grid import WaveField
from .scenarios import ScenarioConfig, build_initial_state
from .trajectories import (GuidedIntegrator, TrajectoryEnsemble,
                           newtonian_ensemble, seed_positions)

_PROVENANCE = {"quantum": "bohmian", "classical": "cse", "epsilon": "epsilon"}


@dataclass
class FieldRun:
    """Everything produced by one wave-engine run."""

    config: ScenarioConfig
    fields: List[WaveField]
    q_values: List[np.ndarray]
    rosen: List[float]
    ensemble: Optional[TrajectoryEnsemble]
    diagnostics: List[DiagnosticsRecord]

    @property
    def times(self) -> np.ndarray:
        return np.array([f.time for f in self.fields])


def guided_provenance(engine: str) -> str:
    if engine not in _PROVENANCE:
        raise KeyError(f"engine {engine!r} has no guided trajectory family")
    return _PROVENANCE[engine]


def run_field_scenario(config: ScenarioConfig, n_traj: Optional[int] = None,
                       compute_q: Optional[bool] = None) -> FieldRun:
    """Propagate a wave scenario, advancing trajectories alongside.

    ``n_traj`` overrides the configured ensemble size; pass 0 to skip
    trajectories entirely.
    """
    count = config.n_traj if n_traj is None else n_traj
    fields: List[WaveField] = []
    q_values: List[np.ndarray] = []
    rosen: List[float] = []
    stepper: Optional[GuidedIntegrator] = None
    for fld, qf in propagate(config, compute_q=compute_q):
        if stepper is None and count > 0:
            seeds = seed_positions(fld, count)
            stepper = GuidedIntegrator(
                seeds, density_floor=config.density_floor,
                hbar=config.hbar, mass=config.mass)
        if stepper is not None:
            stepper.push(fld)
        fields.append(fld)
        q_values.append(qf.values)
        rosen.append(rosen_gradient_diagnostic(qf))
    ensemble = None
    if stepper is not None:
        ensemble = stepper.finish(guided_provenance(config.engine))
    diagnostics = build_diagnostics(config, fields, q_values, rosen, ensemble)
    return FieldRun(config=config, fields=fields, q_values=q_values,
                    rosen=rosen, ensemble=ensemble, diagnostics=diagnostics)


def run_newtonian_scenario(config: ScenarioConfig,
                           n_traj: Optional[int] = None) -> TrajectoryEnsemble:
    """Newton-only run: quantile seeds from the initial packet, shared v0."""
    count = config.n_traj if n_traj is None else n_traj
    grid = config.build_grid()
    initial = build_initial_state(config.initial, grid)
    seeds = seed_positions(initial, count)
    return newtonian_ensemble(config, seeds)
