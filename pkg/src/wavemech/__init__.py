"""wavemech: 1-D wave mechanics under one split-step spectral engine.

Propagates the quantum Schrodinger equation, the nonlinear classical
Schrodinger equation, and their epsilon-interpolation, with Bohmian, CSE and
Newtonian trajectory ensembles for the same scenarios.
"""

__version__ = "0.1.0"

from .analysis import (DiagnosticsRecord, NarrowingStudyResult,
                       classical_point_energy, crossing_count,
                       dispersion_width, equivariance_distance, mean_position,
                       narrowing_study, packet_energy, packet_width,
                       transmission_fraction)
from .dynamics import (EngineMode, QuantumPotentialField, propagate,
                       quantum_potential, rosen_gradient_diagnostic,
                       split_step)
from .errors import ConfigurationError, PropagationDivergedError
from .grid import (Grid, WaveField, from_modulus_phase, make_field, make_grid,
                   modulus_phase, norm)
from .runner import FieldRun, run_field_scenario, run_newtonian_scenario
from .scenarios import (InitialStateSpec, PotentialSpec, PRESET_NAMES,
                        ScenarioConfig, build_initial_state,
                        evaluate_potential, preset)
from .trajectories import (TrajectoryEnsemble, VelocityField,
                           advance_ensemble, free_fall_analytic,
                           newtonian_ensemble, seed_positions, velocity_field)

__all__ = [
    "ConfigurationError", "PropagationDivergedError",
    "Grid", "WaveField", "make_grid", "make_field", "norm", "modulus_phase",
    "from_modulus_phase",
    "PotentialSpec", "InitialStateSpec", "ScenarioConfig", "PRESET_NAMES",
    "evaluate_potential", "build_initial_state", "preset",
    "EngineMode", "QuantumPotentialField", "quantum_potential", "split_step",
    "propagate", "rosen_gradient_diagnostic",
    "VelocityField", "TrajectoryEnsemble", "velocity_field", "seed_positions",
    "advance_ensemble", "newtonian_ensemble", "free_fall_analytic",
    "DiagnosticsRecord", "NarrowingStudyResult", "packet_energy",
    "classical_point_energy", "transmission_fraction", "crossing_count",
    "equivariance_distance", "narrowing_study", "mean_position",
    "packet_width", "dispersion_width",
    "FieldRun", "run_field_scenario", "run_newtonian_scenario",
]
