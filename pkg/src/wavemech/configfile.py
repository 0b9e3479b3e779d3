"""Flat key = value scenario files (INI sections, parsed with configparser).

Example::

    [grid]
    n_points = 2048
    x_min = -32
    x_max = 32

    [potential]
    kind = gaussian_barrier
    v_b = 2.0
    x_b = 0.0
    sigma_b = 1.0

    [initial]
    kind = gaussian
    sigma = 1.0
    x0 = -6.0
    k0 = 2.5

    [engine]
    mode = quantum
    eps = 0.5

    [physics]
    hbar = 1.0
    mass = 1.0

    [time]
    dt = 0.001
    t_final = 5.5
    snapshot_stride = 25

    [trajectories]
    n_traj = 21

    [numerics]
    smoothing_window = 5
    density_floor = 1e-6

Potential parameters by kind: free (none), linear (g), gaussian_barrier
(v_b, x_b, sigma_b), harmonic (omega).  The particle mass always comes from
[physics].
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .errors import ConfigurationError
from .scenarios import InitialStateSpec, PotentialSpec, ScenarioConfig


def _require(parser: configparser.ConfigParser, section: str, key: str) -> str:
    if not parser.has_option(section, key):
        raise ConfigurationError(
            f"config file is missing '{key}' in section [{section}]")
    return parser.get(section, key)


def _get_float(parser, section, key, default=None) -> float:
    if default is not None and not parser.has_option(section, key):
        return default
    raw = _require(parser, section, key)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigurationError(
            f"[{section}] {key} = {raw!r} is not a number") from exc


def _get_int(parser, section, key, default=None) -> int:
    if default is not None and not parser.has_option(section, key):
        return default
    raw = _require(parser, section, key)
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigurationError(
            f"[{section}] {key} = {raw!r} is not an integer") from exc


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
    for section in ("grid", "potential", "initial"):
        if not parser.has_section(section):
            raise ConfigurationError(
                f"config file {path} is missing section [{section}]")

    mass = _get_float(parser, "physics", "mass", 1.0) \
        if parser.has_section("physics") else 1.0
    hbar = _get_float(parser, "physics", "hbar", 1.0) \
        if parser.has_section("physics") else 1.0

    kind = _require(parser, "potential", "kind")
    if kind == "free":
        potential = PotentialSpec.free()
    elif kind == "linear":
        potential = PotentialSpec.linear(
            g=_get_float(parser, "potential", "g"), mass=mass)
    elif kind == "gaussian_barrier":
        potential = PotentialSpec.gaussian_barrier(
            v_b=_get_float(parser, "potential", "v_b"),
            x_b=_get_float(parser, "potential", "x_b"),
            sigma_b=_get_float(parser, "potential", "sigma_b"))
    elif kind == "harmonic":
        potential = PotentialSpec.harmonic(
            omega=_get_float(parser, "potential", "omega"), mass=mass)
    else:
        raise ConfigurationError(f"unknown potential kind {kind!r} in {path}")

    initial = InitialStateSpec(
        kind=_require(parser, "initial", "kind"),
        sigma=_get_float(parser, "initial", "sigma"),
        x0=_get_float(parser, "initial", "x0", 0.0),
        k0=_get_float(parser, "initial", "k0", 0.0),
    )

    engine = "quantum"
    eps = 0.5
    if parser.has_section("engine"):
        engine = parser.get("engine", "mode", fallback="quantum")
        eps = _get_float(parser, "engine", "eps", 0.5)

    name = path.stem
    if parser.has_section("scenario"):
        name = parser.get("scenario", "name", fallback=name)

    return ScenarioConfig(
        name=name,
        n_points=_get_int(parser, "grid", "n_points"),
        x_min=_get_float(parser, "grid", "x_min"),
        x_max=_get_float(parser, "grid", "x_max"),
        potential=potential,
        initial=initial,
        engine=engine,
        eps=eps,
        hbar=hbar,
        mass=mass,
        dt=_get_float(parser, "time", "dt", 1e-3),
        t_final=_get_float(parser, "time", "t_final", 1.0),
        snapshot_stride=_get_int(parser, "time", "snapshot_stride", 10),
        n_traj=_get_int(parser, "trajectories", "n_traj", 21)
        if parser.has_section("trajectories") else 21,
        smoothing_window=_get_int(parser, "numerics", "smoothing_window", 5)
        if parser.has_section("numerics") else 5,
        density_floor=_get_float(parser, "numerics", "density_floor", 1e-6)
        if parser.has_section("numerics") else 1e-6,
    )
