import numpy as np
import pytest

from wavemech import (ConfigurationError, InitialStateSpec, PotentialSpec,
                      PRESET_NAMES, build_initial_state, evaluate_potential,
                      make_grid, norm, preset)


@pytest.fixture
def grid():
    return make_grid(2048, -20.0, 20.0)


def test_barrier_height_at_center(grid):
    spec = PotentialSpec.gaussian_barrier(v_b=2.0, x_b=0.0, sigma_b=1.0)
    u = evaluate_potential(spec, grid)
    assert u[np.argmin(np.abs(grid.x))] == pytest.approx(2.0, abs=1e-12)
    # Gaussian profile at the grid point nearest one barrier width out
    i1 = np.argmin(np.abs(grid.x - 1.0))
    assert u[i1] == pytest.approx(2.0 * np.exp(-grid.x[i1] ** 2 / 2), rel=1e-12)


def test_harmonic_value():
    g = make_grid(64, -8.0, 8.0)  # x = 2 falls exactly on this mesh
    u = evaluate_potential(PotentialSpec.harmonic(omega=1.0), g)
    i = np.argmin(np.abs(g.x - 2.0))
    assert g.x[i] == 2.0
    assert u[i] == pytest.approx(2.0, rel=1e-12)


def test_free_is_zero(grid):
    assert not np.any(evaluate_potential(PotentialSpec.free(), grid))


def test_linear_slope(grid):
    u = evaluate_potential(PotentialSpec.linear(g=9.81, mass=2.0), grid)
    assert np.allclose(u, 2.0 * 9.81 * grid.x)


def test_evaluate_potential_is_pure(grid):
    spec = PotentialSpec.gaussian_barrier(v_b=4.0, x_b=0.0, sigma_b=1.0)
    assert np.array_equal(evaluate_potential(spec, grid),
                          evaluate_potential(spec, grid))


def test_potential_validation():
    with pytest.raises(ConfigurationError):
        PotentialSpec(kind="coulomb")
    with pytest.raises(ConfigurationError):
        PotentialSpec.gaussian_barrier(v_b=1.0, x_b=0.0, sigma_b=-1.0)
    with pytest.raises(ConfigurationError):
        PotentialSpec.harmonic(omega=0.0)
    with pytest.raises(ConfigurationError):
        PotentialSpec.linear(g=float("inf"))


def test_gaussian_packet_peak(grid):
    f = build_initial_state(
        InitialStateSpec(kind="gaussian", sigma=1.0, x0=-7.0, k0=2.0), grid)
    dens = f.density()
    peak = np.argmax(dens)
    assert abs(grid.x[peak] + 7.0) <= grid.dx
    assert dens[peak] == pytest.approx(1.0 / np.sqrt(np.pi), rel=1e-3)
    assert abs(norm(f) - 1.0) < 1e-10


def test_centered_gaussian_real_and_even(grid):
    f = build_initial_state(
        InitialStateSpec(kind="gaussian", sigma=1.0, x0=0.0, k0=0.0), grid)
    assert np.max(np.abs(f.psi.imag)) == 0.0
    dens = f.density()
    # x = 0 sits at index n/2 on the symmetric grid
    half = grid.n_points // 2
    assert np.allclose(dens[half + 1:], dens[1:half][::-1], rtol=1e-12)


def test_two_gaussian_symmetric_and_renormalized(grid):
    f = build_initial_state(
        InitialStateSpec(kind="two_gaussian", sigma=1.0, x0=3.0, k0=3.0), grid)
    assert abs(norm(f) - 1.0) < 1e-12
    dens = f.density()
    half = grid.n_points // 2
    assert np.allclose(dens[half + 1:], dens[1:half][::-1], atol=1e-12)
    # two peaks near -x0 and +x0
    assert dens[np.argmin(np.abs(grid.x + 3))] > 10 * dens[half]


def test_leaking_packet_warns():
    g = make_grid(256, -4.0, 4.0)
    with pytest.warns(UserWarning):
        build_initial_state(InitialStateSpec(kind="gaussian", sigma=2.0), g)


def test_preset_paper_parameters():
    fg = preset("free_gauss")
    assert (fg.initial.sigma, fg.initial.x0, fg.initial.k0) == (1.0, -7.0, 2.0)
    assert fg.potential.kind == "free"

    tg = preset("interference")
    assert (tg.initial.sigma, tg.initial.x0, tg.initial.k0) == (1.0, 3.0, 3.0)

    lo = preset("barrier_low")
    assert lo.potential.v_b == 2.0
    assert lo.potential.x_b == 0.0
    assert lo.potential.sigma_b == 1.0
    assert (lo.initial.x0, lo.initial.k0) == (-6.0, 2.5)

    hi = preset("barrier_high")
    assert hi.potential.v_b == 4.0
    assert (hi.initial.x0, hi.initial.k0) == (-6.0, 2.5)

    hd = preset("harmonic_displaced")
    assert hd.potential.omega == 1.0
    assert (hd.initial.sigma, hd.initial.x0, hd.initial.k0) == (1.0, -2.0, 0.0)

    hn = preset("harmonic_narrow")
    assert hn.initial.sigma == 0.5
    assert hn.initial.x0 == 0.0

    ff = preset("free_fall")
    assert ff.potential.g == 9.81
    assert ff.hbar * ff.initial.k0 / ff.mass == pytest.approx(40.0)
    assert ff.engine == "newtonian"


def test_unknown_preset_lists_names():
    with pytest.raises(ConfigurationError) as err:
        preset("coulomb_scattering")
    for name in PRESET_NAMES:
        assert name in str(err.value)


def test_config_validation():
    cfg = preset("free_gauss")
    with pytest.raises(ConfigurationError):
        cfg.replace(eps=1.5)
    with pytest.raises(ConfigurationError):
        cfg.replace(smoothing_window=4)
    with pytest.raises(ConfigurationError):
        cfg.replace(dt=-1e-3)
    with pytest.raises(ConfigurationError):
        cfg.replace(engine="semiclassical")
