import numpy as np
import pytest
from scipy.special import erfinv

from wavemech import (ConfigurationError, InitialStateSpec, PotentialSpec,
                      ScenarioConfig, advance_ensemble, build_initial_state,
                      free_fall_analytic, make_field, make_grid,
                      newtonian_ensemble, preset, seed_positions,
                      velocity_field)
from wavemech.trajectories import ensemble_energies


def plane_wave_field(k0=2.0, t=0.0, n=256):
    g = make_grid(n, 0.0, 2 * np.pi)
    return make_field(g, np.exp(1j * k0 * g.x) / np.sqrt(g.length), time=t)


def test_velocity_plane_wave():
    vf = velocity_field(plane_wave_field(k0=2.0))
    assert np.allclose(vf.v, 2.0, atol=1e-10)


def test_velocity_real_field_is_zero():
    g = make_grid(512, -10.0, 10.0)
    f = build_initial_state(InitialStateSpec(kind="gaussian", sigma=1.0), g)
    vf = velocity_field(f)
    assert np.max(np.abs(vf.v)) < 1e-8


def test_velocity_gaussian_with_momentum():
    g = make_grid(2048, -20.0, 20.0)
    f = build_initial_state(
        InitialStateSpec(kind="gaussian", sigma=1.0, x0=-7.0, k0=2.0), g)
    vf = velocity_field(f)
    dens = f.density()
    under = dens > 1e-4 * dens.max()
    assert np.max(np.abs(vf.v[under] - 2.0)) < 1e-6


def test_seed_positions_uniform_density():
    # grid points at the cell midpoints of [0, 1], so the discrete measure
    # is exactly the uniform distribution on [0, 1]
    dx = 1.0 / 32
    g = make_grid(32, dx / 2, 1.0 + dx / 2)
    f = make_field(g, np.ones(32, dtype=complex))
    seeds = seed_positions(f, 4)
    assert np.allclose(seeds, [0.125, 0.375, 0.625, 0.875], atol=1e-12)


def test_seed_positions_symmetric_median():
    g = make_grid(2048, -20.0, 20.0)
    f = build_initial_state(InitialStateSpec(kind="gaussian", sigma=1.0), g)
    seeds = seed_positions(f, 5)
    assert abs(seeds[2]) < 1e-9
    assert np.allclose(seeds, -seeds[::-1], atol=1e-9)


def test_seed_positions_gaussian_quartiles():
    # density std is sigma/sqrt(2); quartiles sit at
    # +- sqrt(2) erfinv(1/2) * sigma / sqrt(2)
    g = make_grid(2048, -20.0, 20.0)
    f = build_initial_state(InitialStateSpec(kind="gaussian", sigma=1.0), g)
    seeds = seed_positions(f, 2)
    expected = erfinv(0.5)  # = 0.47693627620447..., the quartile position
    assert seeds[1] == pytest.approx(expected, abs=5e-4)
    assert seeds[0] == pytest.approx(-expected, abs=5e-4)


def test_seed_positions_bracket_equal_probability():
    g = make_grid(2048, -20.0, 20.0)
    f = build_initial_state(
        InitialStateSpec(kind="gaussian", sigma=1.0, x0=2.0), g)
    n = 8
    seeds = seed_positions(f, n)
    dens = f.density()
    cum = np.concatenate([[0.0], np.cumsum(dens) * g.dx])
    edges = np.concatenate([[g.x[0] - g.dx / 2], g.x + g.dx / 2])
    probs = np.interp(seeds, edges, cum)
    assert np.allclose(np.diff(probs), 1.0 / n, atol=1e-6)


def test_seed_positions_requires_normalized_field():
    g = make_grid(64, 0.0, 1.0)
    f = make_field(g, np.full(64, 2.0, dtype=complex))
    with pytest.raises(ConfigurationError):
        seed_positions(f, 3)


def test_advance_constant_velocity():
    fields = [plane_wave_field(k0=2.0, t=t, n=64)
              for t in np.linspace(0, 1, 11)]
    ens = advance_ensemble(fields, np.array([0.1]), provenance="bohmian")
    assert ens.positions[0, -1] == pytest.approx(0.1 + 2.0, abs=1e-9)
    assert ens.provenance == "bohmian"


def test_advance_stationary_ground_state():
    g = make_grid(1024, -10.0, 10.0)
    f0 = build_initial_state(InitialStateSpec(kind="gaussian", sigma=1.0), g)
    fields = [make_field(g, f0.psi, time=t) for t in np.linspace(0, 2, 21)]
    seeds = seed_positions(f0, 7)
    ens = advance_ensemble(fields, seeds)
    assert np.max(np.abs(ens.positions - ens.positions[:, :1])) < 1e-6


def test_advance_rejects_coarse_stride():
    # one interval, velocity 2, dt 1: trajectory would jump 2 over a fine grid
    g = make_grid(1024, 0.0, 2 * np.pi)
    fields = [make_field(g, np.exp(2j * g.x) / np.sqrt(g.length), time=t)
              for t in (0.0, 1.0)]
    with pytest.raises(ConfigurationError):
        advance_ensemble(fields, np.array([3.0]))


def test_free_fall_analytic_values():
    assert free_fall_analytic(0.0, 40.0, 9.81, 0.0) == 0.0
    assert free_fall_analytic(0.0, 40.0, 9.81, 4.0) == pytest.approx(81.52)
    assert free_fall_analytic(0.0, 40.0, 0.0, 2.0) == 80.0


def _newton_config(potential, t_final, dt=1e-4, stride=100):
    return ScenarioConfig(
        name="newton-test", n_points=256, x_min=-40.0, x_max=40.0,
        potential=potential,
        initial=InitialStateSpec(kind="gaussian", sigma=1.0),
        engine="newtonian", dt=dt, t_final=t_final, snapshot_stride=stride)


def test_newtonian_free_fall_matches_closed_form():
    cfg = _newton_config(PotentialSpec.linear(g=9.81), t_final=4.0)
    ens = newtonian_ensemble(cfg, np.array([0.0, 5.0]), v0=40.0)
    for i, x0 in enumerate((0.0, 5.0)):
        ref = free_fall_analytic(x0, 40.0, 9.81, ens.times)
        assert np.max(np.abs(ens.positions[i] - ref)) < 1e-9
    assert ens.positions[0, -1] == pytest.approx(81.52, abs=1e-9)


def test_newtonian_harmonic_simultaneous_crossing():
    # x(t) = x(0) cos t from rest: every start reaches the origin at pi/2
    cfg = _newton_config(PotentialSpec.harmonic(omega=1.0), t_final=2.0,
                         dt=np.pi / 20000, stride=500)
    ens = newtonian_ensemble(cfg, np.array([-3.0, -2.0, -1.0]), v0=0.0)
    idx = np.argmin(np.abs(ens.times - np.pi / 2))
    assert ens.times[idx] == pytest.approx(np.pi / 2, abs=1e-9)
    assert np.max(np.abs(ens.positions[:, idx])) < 1e-6


def test_newtonian_barrier_transmission_restores_speed():
    cfg = _newton_config(
        PotentialSpec.gaussian_barrier(v_b=2.0, x_b=0.0, sigma_b=1.0),
        t_final=8.0)
    ens = newtonian_ensemble(cfg, np.array([-8.0, -7.0]), v0=2.5)
    assert np.all(ens.positions[:, -1] > 5.0)  # transmitted
    assert np.allclose(ens.velocity_history[:, -1], 2.5, atol=1e-9)


def test_newtonian_energy_drift():
    cfg = _newton_config(PotentialSpec.harmonic(omega=1.0), t_final=20.0,
                         dt=1e-3, stride=100)
    ens = newtonian_ensemble(cfg, np.array([-2.0, 1.0, 3.0]), v0=0.5)
    energies = ensemble_energies(ens, cfg.potential, cfg.mass)
    rel = np.abs(energies - energies[:, :1]) / np.abs(energies[:, :1])
    assert np.max(rel) < 1e-6


def test_guided_families_never_cross_on_free_packet():
    cfg = preset("free_gauss").replace(t_final=0.5, engine="classical")
    from wavemech import run_field_scenario
    run = run_field_scenario(cfg, n_traj=9)
    gaps = np.diff(run.ensemble.positions, axis=0)
    assert np.all(gaps > 0)
