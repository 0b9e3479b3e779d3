"""Run-directory file formats.

Every run directory holds a subset of:

  density.csv        long format, one row per (snapshot, grid point):
                     t, x, density, quantum_potential
  trajectories_<provenance>.csv
                     one row per snapshot: t, x1, .., xN
  diagnostics.csv    one row per snapshot (see DIAGNOSTICS_COLUMNS)
  manifest.json      fully resolved config echo, tool version, wall-clock
                     duration and an output listing with sha256 digests

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly, so re-running with identical arguments reproduces the CSV
bodies byte for byte.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path
from typing import List, Sequence

import numpy as np

from . import __version__
from .analysis import DiagnosticsRecord
from .errors import ConfigurationError
from .grid import WaveField
from .scenarios import ScenarioConfig
from .trajectories import TrajectoryEnsemble

DIAGNOSTICS_COLUMNS = (
    "time", "norm", "mean_x", "width", "e_classical", "e_quantum",
    "transmission_fraction", "rosen_diagnostic", "crossing_count_to_date",
)

MAX_DENSITY_COLUMNS = 512


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_density_csv(path: Path, fields: Sequence[WaveField],
                      q_values: Sequence[np.ndarray],
                      full_resolution: bool = False) -> None:
    grid = fields[0].grid
    stride = 1
    if not full_resolution:
        while grid.n_points // stride > MAX_DENSITY_COLUMNS:
            stride *= 2
    idx = np.arange(0, grid.n_points, stride)
    xs = grid.x[idx]
    with open(path, "w", newline="") as fh:
        fh.write("t,x,density,quantum_potential\n")
        for fld, q in zip(fields, q_values):
            dens = fld.density()[idx]
            qs = q[idx]
            t_str = _fmt(fld.time)
            for j in range(idx.size):
                fh.write(f"{t_str},{_fmt(xs[j])},{_fmt(dens[j])},"
                         f"{_fmt(qs[j])}\n")


def write_trajectories_csv(path: Path, ensemble: TrajectoryEnsemble) -> None:
    n = ensemble.n_traj
    header = "t," + ",".join(f"x{i}" for i in range(1, n + 1))
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for j, t in enumerate(ensemble.times):
            row = ",".join(_fmt(ensemble.positions[i, j]) for i in range(n))
            fh.write(f"{_fmt(t)},{row}\n")


def write_diagnostics_csv(path: Path,
                          records: Sequence[DiagnosticsRecord]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(DIAGNOSTICS_COLUMNS) + "\n")
        for rec in records:
            fh.write(",".join([
                _fmt(rec.time), _fmt(rec.norm), _fmt(rec.mean_x),
                _fmt(rec.width), _fmt(rec.e_classical), _fmt(rec.e_quantum),
                _fmt(rec.transmission_fraction), _fmt(rec.rosen_diagnostic),
                str(rec.crossing_count_to_date),
            ]) + "\n")


def config_to_dict(config: ScenarioConfig) -> dict:
    raw = dataclasses.asdict(config)
    raw["potential"] = {k: v for k, v in raw["potential"].items()}
    raw["initial"] = {k: v for k, v in raw["initial"].items()}
    return raw


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, config: ScenarioConfig,
                   output_names: Sequence[str],
                   duration_seconds: float) -> Path:
    outputs = []
    for name in output_names:
        p = out_dir / name
        outputs.append({
            "path": name,
            "sha256": sha256_of(p),
            "bytes": p.stat().st_size,
        })
    manifest = {
        "tool": "wavemech",
        "version": __version__,
        "duration_seconds": duration_seconds,
        "config": config_to_dict(config),
        "outputs": outputs,
    }
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_manifest(run_dir: Path) -> dict:
    path = Path(run_dir) / "manifest.json"
    if not path.exists():
        raise ConfigurationError(f"no manifest.json in {run_dir}")
    with open(path) as fh:
        return json.load(fh)


def verify_manifest(run_dir: Path) -> bool:
    """Re-hash every listed output; True when all digests match."""
    manifest = read_manifest(run_dir)
    for entry in manifest["outputs"]:
        p = Path(run_dir) / entry["path"]
        if not p.exists() or sha256_of(p) != entry["sha256"]:
            return False
    return True


def read_trajectories_csv(path: Path):
    """Returns (times, positions[n_traj, n_times])."""
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    return data[:, 0], data[:, 1:].T.copy()


def read_density_csv(path: Path):
    """Returns (times, xs, density[nt, nx], q[nt, nx]) from the long format."""
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    times = np.unique(data[:, 0])
    xs = np.unique(data[:, 1])
    nt, nx = times.size, xs.size
    if nt * nx != data.shape[0]:
        raise ConfigurationError(f"{path} is not a complete (t, x) product")
    dens = data[:, 2].reshape(nt, nx)
    q = data[:, 3].reshape(nt, nx)
    return times, xs, dens, q


def read_diagnostics_csv(path: Path):
    """Returns a dict of column name to array."""
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    return {name: data[:, i] for i, name in enumerate(DIAGNOSTICS_COLUMNS)}


def list_trajectory_files(run_dir: Path) -> List[Path]:
    return sorted(Path(run_dir).glob("trajectories_*.csv"))
