import numpy as np
import pytest

from wavemech import (ConfigurationError, from_modulus_phase, make_field,
                      make_grid, modulus_phase, norm)
from wavemech.grid import spectral_gradient


def test_wavenumber_layout_8_points():
    g = make_grid(8, 0.0, 8.0)
    assert g.dx == 1.0
    assert np.allclose(g.x, np.arange(8.0))
    expected = np.pi * np.array([0, 1 / 4, 1 / 2, 3 / 4, -1, -3 / 4, -1 / 2, -1 / 4])
    assert np.allclose(g.k, expected)


def test_default_production_grid_spacing():
    g = make_grid(2048, -20.0, 20.0)
    assert g.dx == pytest.approx(40.0 / 2048)
    assert g.dx == pytest.approx(0.01953125)
    # spectral bounds
    assert np.isclose(np.diff(np.sort(g.k)).max(), 2 * np.pi / g.length)
    assert np.isclose(np.abs(g.k).max(), np.pi / g.dx)


@pytest.mark.parametrize("n", [10, 7, 100, 0])
def test_non_power_of_two_rejected(n):
    with pytest.raises(ConfigurationError):
        make_grid(n, 0.0, 1.0)


def test_degenerate_domain_rejected():
    with pytest.raises(ConfigurationError):
        make_grid(16, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        make_grid(16, 2.0, -2.0)


def test_norm_uniform_field():
    g = make_grid(64, 0.0, 5.0)
    f = make_field(g, np.full(64, 1.0 / np.sqrt(g.length)))
    assert norm(f) == pytest.approx(1.0, abs=1e-14)


def test_norm_zero_field():
    g = make_grid(16, 0.0, 1.0)
    assert norm(make_field(g, np.zeros(16))) == 0.0


def test_norm_gaussian_packet():
    from wavemech import InitialStateSpec, build_initial_state
    g = make_grid(2048, -20.0, 20.0)
    f = build_initial_state(InitialStateSpec(kind="gaussian", sigma=1.0), g)
    assert abs(norm(f) - 1.0) < 1e-12


def test_modulus_phase_plane_wave():
    g = make_grid(64, 0.0, 2 * np.pi)
    f = make_field(g, np.exp(2j * g.x))
    r, s = modulus_phase(f)
    assert np.allclose(r, 1.0)
    wrapped = np.angle(np.exp(2j * g.x))
    assert np.allclose(s, wrapped)


def test_modulus_phase_real_positive_and_constant_phase():
    g = make_grid(64, -4.0, 4.0)
    envelope = np.exp(-g.x ** 2)
    _, s = modulus_phase(make_field(g, envelope.astype(complex)))
    assert np.allclose(s, 0.0)
    _, s45 = modulus_phase(make_field(g, (1 + 1j) / np.sqrt(2) * envelope))
    assert np.allclose(s45, np.pi / 4)


def test_phase_zero_convention_at_nodes():
    g = make_grid(16, 0.0, 1.0)
    psi = np.zeros(16, dtype=complex)
    psi[3] = -1.0
    _, s = modulus_phase(make_field(g, psi))
    assert s[0] == 0.0
    assert s[3] == pytest.approx(np.pi)


def test_polar_round_trip_random_fields():
    rng = np.random.default_rng(7)
    g = make_grid(128, -3.0, 3.0)
    for _ in range(5):
        psi = rng.normal(size=128) + 1j * rng.normal(size=128)
        f = make_field(g, psi)
        r, s = modulus_phase(f)
        rebuilt = from_modulus_phase(g, r, s)
        assert np.max(np.abs(rebuilt.psi - psi)) < 1e-14


def test_fft_round_trip_identity():
    rng = np.random.default_rng(11)
    psi = rng.normal(size=256) + 1j * rng.normal(size=256)
    back = np.fft.ifft(np.fft.fft(psi))
    assert np.max(np.abs(back - psi)) / np.max(np.abs(psi)) < 1e-12


def test_parseval_momentum_convention():
    rng = np.random.default_rng(13)
    g = make_grid(256, -5.0, 5.0)
    psi = rng.normal(size=256) + 1j * rng.normal(size=256)
    f = make_field(g, psi)
    # psi_hat = fft(psi) * dx, dk = 2 pi / L
    position_norm = norm(f)
    psi_hat = np.fft.fft(psi) * g.dx
    dk = 2 * np.pi / g.length
    momentum_norm = np.sum(np.abs(psi_hat) ** 2) * dk / (2 * np.pi)
    assert momentum_norm == pytest.approx(position_norm, rel=1e-10)


def test_spectral_gradient_of_plane_wave():
    g = make_grid(64, 0.0, 2 * np.pi)
    dpsi = spectral_gradient(g, np.exp(3j * g.x))
    assert np.max(np.abs(dpsi - 3j * np.exp(3j * g.x))) < 1e-12


def test_fields_are_immutable():
    g = make_grid(16, 0.0, 1.0)
    f = make_field(g, np.ones(16, dtype=complex))
    with pytest.raises(ValueError):
        f.psi[0] = 2.0
    with pytest.raises(ValueError):
        g.x[0] = 5.0
