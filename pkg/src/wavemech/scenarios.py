"""Potentials, initial wave packets and the shipped scenario presets.

Every numerical experiment is described by one :class:`ScenarioConfig`;
the :func:`preset` constructor returns the parameterizations used for the
shipped scenarios (single packet in free space, colliding packets, low and
high Gaussian barrier, displaced and narrow packets in a harmonic trap, and
the Newtonian free-fall ensemble).
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid, WaveField, make_field, make_grid

POTENTIAL_KINDS = ("free", "linear", "gaussian_barrier", "harmonic")
INITIAL_KINDS = ("gaussian", "two_gaussian")
ENGINES = ("quantum", "classical", "epsilon", "newtonian")


@dataclass(frozen=True)
class PotentialSpec:
    """A static scalar potential U(x).

    kinds and parameters:
      free             -- U = 0
      linear           -- U = mass * g * x          (g: acceleration)
      gaussian_barrier -- U = v_b * exp(-(x - x_b)^2 / (2 sigma_b^2))
      harmonic         -- U = mass * omega^2 * x^2 / 2
    """

    kind: str
    g: float = 0.0
    v_b: float = 0.0
    x_b: float = 0.0
    sigma_b: float = 1.0
    omega: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ConfigurationError(
                f"unknown potential kind {self.kind!r}, expected one of "
                f"{POTENTIAL_KINDS}"
            )
        params = (self.g, self.v_b, self.x_b, self.sigma_b, self.omega,
                  self.mass)
        if not all(math.isfinite(p) for p in params):
            raise ConfigurationError("potential parameters must be finite")
        if self.kind == "gaussian_barrier" and self.sigma_b <= 0:
            raise ConfigurationError("barrier width sigma_b must be positive")
        if self.kind == "harmonic" and self.omega <= 0:
            raise ConfigurationError("harmonic omega must be positive")

    @staticmethod
    def free() -> "PotentialSpec":
        return PotentialSpec(kind="free")

    @staticmethod
    def linear(g: float, mass: float = 1.0) -> "PotentialSpec":
        return PotentialSpec(kind="linear", g=g, mass=mass)

    @staticmethod
    def gaussian_barrier(v_b: float, x_b: float, sigma_b: float) -> "PotentialSpec":
        return PotentialSpec(kind="gaussian_barrier", v_b=v_b, x_b=x_b,
                             sigma_b=sigma_b)

    @staticmethod
    def harmonic(omega: float, mass: float = 1.0) -> "PotentialSpec":
        return PotentialSpec(kind="harmonic", omega=omega, mass=mass)


@dataclass(frozen=True)
class InitialStateSpec:
    """Initial wave function: one Gaussian packet or a symmetric pair.

    gaussian:      (sigma sqrt(pi))^(-1/2) exp(-(x - x0)^2 / 2 sigma^2) e^{i k0 x}
    two_gaussian:  packet at -x0 with wavenumber +k0 plus packet at +x0 with
                   wavenumber -k0, renormalized to total probability one.
    """

    kind: str
    sigma: float
    x0: float = 0.0
    k0: float = 0.0

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise ConfigurationError(
                f"unknown initial-state kind {self.kind!r}, expected one of "
                f"{INITIAL_KINDS}"
            )
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigurationError("packet width sigma must be positive")


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one experiment.

    ``engine`` selects the propagator: ``quantum`` (linear Schrodinger),
    ``classical`` (quantum potential subtracted), ``epsilon`` (interpolation
    with degree-of-quantumness ``eps``), or ``newtonian`` for trajectory-only
    runs with no wave field at all.
    """

    name: str
    n_points: int
    x_min: float
    x_max: float
    potential: PotentialSpec
    initial: InitialStateSpec
    engine: str = "quantum"
    eps: float = 0.5
    hbar: float = 1.0
    mass: float = 1.0
    dt: float = 1e-3
    t_final: float = 1.0
    snapshot_stride: int = 10
    n_traj: int = 21
    smoothing_window: int = 5
    density_floor: float = 1e-6

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ConfigurationError(
                f"unknown engine {self.engine!r}, expected one of {ENGINES}"
            )
        if not 0.0 <= self.eps <= 1.0:
            raise ConfigurationError(f"eps must lie in [0, 1], got {self.eps}")
        for label, value in (("hbar", self.hbar), ("mass", self.mass),
                             ("dt", self.dt), ("t_final", self.t_final),
                             ("density_floor", self.density_floor)):
            if not (value > 0 and math.isfinite(value)):
                raise ConfigurationError(f"{label} must be positive, got {value}")
        if self.snapshot_stride < 1:
            raise ConfigurationError("snapshot_stride must be >= 1")
        if self.n_traj < 1:
            raise ConfigurationError("n_traj must be >= 1")
        if self.smoothing_window < 1 or self.smoothing_window % 2 == 0:
            raise ConfigurationError(
                f"smoothing_window must be an odd positive integer, got "
                f"{self.smoothing_window}"
            )

    def build_grid(self) -> Grid:
        return make_grid(self.n_points, self.x_min, self.x_max)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def evaluate_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    """Potential samples U(x_k) on the grid.  Pure: same inputs, same array."""
    x = grid.x
    if spec.kind == "free":
        return np.zeros(grid.n_points)
    if spec.kind == "linear":
        return spec.mass * spec.g * x
    if spec.kind == "gaussian_barrier":
        return spec.v_b * np.exp(-((x - spec.x_b) ** 2) / (2.0 * spec.sigma_b ** 2))
    # harmonic
    return 0.5 * spec.mass * spec.omega ** 2 * x ** 2


def _gaussian_packet(x: np.ndarray, sigma: float, x0: float, k0: float) -> np.ndarray:
    amp = 1.0 / np.sqrt(sigma * np.sqrt(np.pi))
    return amp * np.exp(-((x - x0) ** 2) / (2.0 * sigma ** 2)) * np.exp(1j * k0 * x)


def _tail_probability(sigma: float, x0: float, x_lo: float, x_hi: float) -> float:
    # probability of a width-sigma packet (density std sigma/sqrt(2)) outside
    # [x_lo, x_hi]
    s = sigma / math.sqrt(2.0)
    lo = 0.5 * math.erfc((x0 - x_lo) / (s * math.sqrt(2.0)))
    hi = 0.5 * math.erfc((x_hi - x0) / (s * math.sqrt(2.0)))
    return lo + hi


def build_initial_state(spec: InitialStateSpec, grid: Grid) -> WaveField:
    """Evaluate the initial packet on the grid at t = 0.

    Single packets come out with probability one on the grid; the two-packet
    superposition is written as the plain sum of two unit-norm packets and
    then renormalized to one (the overlap correction is tiny for the shipped
    parameters, so this only rescales the modulus by about 1/sqrt(2)).
    """
    half = 0.5 * (grid.x_max - grid.x_min)
    center = 0.5 * (grid.x_max + grid.x_min)
    if abs(spec.x0 - center) + 6.0 * spec.sigma >= half:
        warnings.warn(
            f"initial packet (x0={spec.x0}, sigma={spec.sigma}) is not well "
            f"inside the domain [{grid.x_min}, {grid.x_max}]",
            stacklevel=2,
        )
    if spec.kind == "gaussian":
        psi = _gaussian_packet(grid.x, spec.sigma, spec.x0, spec.k0)
        leak = _tail_probability(spec.sigma, spec.x0, grid.x_min, grid.x_max)
    else:
        psi = (_gaussian_packet(grid.x, spec.sigma, -spec.x0, spec.k0)
               + _gaussian_packet(grid.x, spec.sigma, spec.x0, -spec.k0))
        leak = (_tail_probability(spec.sigma, -spec.x0, grid.x_min, grid.x_max)
                + _tail_probability(spec.sigma, spec.x0, grid.x_min, grid.x_max)) / 2.0
        total = np.sum(np.abs(psi) ** 2) * grid.dx
        psi = psi / np.sqrt(total)
    if leak > 1e-6:
        warnings.warn(
            f"initial packet leaks probability {leak:.3g} outside the domain",
            stacklevel=2,
        )
    return make_field(grid, psi, time=0.0)


def _barrier_scenario(name: str, v_b: float) -> ScenarioConfig:
    # The classical run piles the packet up against the barrier (near-caustic)
    # and its over-barrier leakage scales with the Q regularization length, so
    # these scenarios get the finest grid and the narrowest smoothing.  The
    # wide domain keeps the dispersed quantum packet's wrap-around below 1e-6
    # until every fraction settles.
    return ScenarioConfig(
        name=name,
        n_points=4096, x_min=-32.0, x_max=32.0,
        potential=PotentialSpec.gaussian_barrier(v_b=v_b, x_b=0.0, sigma_b=1.0),
        initial=InitialStateSpec(kind="gaussian", sigma=1.0, x0=-6.0, k0=2.5),
        dt=1e-4, t_final=5.5, snapshot_stride=100, smoothing_window=3,
    )


def _preset_table() -> dict:
    return {
        # Single packet in free space: disperses in quantum mode, keeps its
        # shape in classical mode.
        "free_gauss": lambda: ScenarioConfig(
            name="free_gauss",
            n_points=2048, x_min=-20.0, x_max=20.0,
            potential=PotentialSpec.free(),
            initial=InitialStateSpec(kind="gaussian", sigma=1.0, x0=-7.0, k0=2.0),
            dt=2e-4, t_final=3.0, snapshot_stride=50,
        ),
        # Two counter-propagating packets; t_final lets them separate again
        # after the collision at t ~ 1.  The finer snapshot spacing keeps the
        # trajectory integrator accurate through the fringe pattern.
        "interference": lambda: ScenarioConfig(
            name="interference",
            n_points=2048, x_min=-20.0, x_max=20.0,
            potential=PotentialSpec.free(),
            initial=InitialStateSpec(kind="two_gaussian", sigma=1.0, x0=3.0, k0=3.0),
            dt=2e-4, t_final=2.0, snapshot_stride=25,
        ),
        # Packet energy 3.375 vs barrier height 2 (partial quantum
        # reflection, full classical transmission) ...
        "barrier_low": lambda: _barrier_scenario("barrier_low", v_b=2.0),
        # ... and vs barrier height 4 (full classical reflection).
        "barrier_high": lambda: _barrier_scenario("barrier_high", v_b=4.0),
        # Ground-state-width packet displaced in a harmonic trap.  The
        # classical run funnels every trajectory through the origin at
        # t = pi/2, which squeezes the packet onto the smoothing scale; the
        # wider window keeps the squeeze regular.
        "harmonic_displaced": lambda: ScenarioConfig(
            name="harmonic_displaced",
            n_points=1024, x_min=-10.0, x_max=10.0,
            potential=PotentialSpec.harmonic(omega=1.0),
            initial=InitialStateSpec(kind="gaussian", sigma=1.0, x0=-2.0, k0=0.0),
            dt=2e-4, t_final=6.3, snapshot_stride=50, smoothing_window=9,
        ),
        # Centered packet narrower than the trap ground state (breathing
        # mode in quantum, squeeze-and-repel in classical).
        "harmonic_narrow": lambda: ScenarioConfig(
            name="harmonic_narrow",
            n_points=1024, x_min=-10.0, x_max=10.0,
            potential=PotentialSpec.harmonic(omega=1.0),
            initial=InitialStateSpec(kind="gaussian", sigma=0.5, x0=0.0, k0=0.0),
            dt=2e-4, t_final=6.3, snapshot_stride=50, smoothing_window=9,
        ),
        # Newton-only constant-force ensemble in SI-style units
        # (v0 = hbar k0 / m = 40 m/s, g = 9.81 m/s^2); runs long enough for
        # trajectories to revisit positions on the way down.
        "free_fall": lambda: ScenarioConfig(
            name="free_fall",
            n_points=2048, x_min=-80.0, x_max=80.0,
            potential=PotentialSpec.linear(g=9.81),
            initial=InitialStateSpec(kind="gaussian", sigma=10.0, x0=0.0, k0=40.0),
            engine="newtonian",
            dt=1e-4, t_final=8.0, snapshot_stride=100,
        ),
    }


PRESET_NAMES = tuple(_preset_table().keys())


def preset(name: str) -> ScenarioConfig:
    """Return the shipped configuration for a named scenario."""
    table = _preset_table()
    if name not in table:
        raise ConfigurationError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}"
        )
    return table[name]()
