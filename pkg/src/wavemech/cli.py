"""Command-line entry point.

    wavemech run --preset free_gauss --engine quantum --out runs/fg_q
    wavemech run --config my_scenario.cfg --out runs/custom
    wavemech compare runs/fg_classical runs/fg_newtonian

``run`` writes density.csv, trajectories_<provenance>.csv, diagnostics.csv
and manifest.json into the output directory (Newton-only runs write the
trajectory file and manifest only).  ``compare`` prints max-deviation
statistics between two run directories sharing grid and time axes.

Exit codes: 0 success, 2 configuration error, 3 propagation divergence.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .configfile import load_config
from .errors import ConfigurationError, PropagationDivergedError
from .output import (list_trajectory_files, read_density_csv, read_manifest,
                     read_trajectories_csv, write_density_csv,
                     write_diagnostics_csv, write_manifest,
                     write_trajectories_csv)
from .runner import (guided_provenance, run_field_scenario,
                     run_newtonian_scenario)
from .scenarios import PRESET_NAMES, preset


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavemech",
        description="1-D quantum/classical wave mechanics simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write CSV outputs")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_NAMES,
                     help="shipped scenario name")
    src.add_argument("--config", type=Path, help="scenario config file")
    run.add_argument("--engine",
                     choices=("quantum", "classical", "epsilon", "newtonian"),
                     help="override the scenario's engine")
    run.add_argument("--eps", type=float,
                     help="degree of quantumness for --engine epsilon")
    run.add_argument("--trajectories", type=int, metavar="N_E",
                     help="override the ensemble size")
    run.add_argument("--out", type=Path, required=True,
                     help="output directory (created if needed)")
    run.add_argument("--full-density", action="store_true",
                     help="write density.csv at full grid resolution")

    cmp_ = sub.add_parser("compare",
                          help="max-deviation report between two run dirs")
    cmp_.add_argument("run_a", type=Path)
    cmp_.add_argument("run_b", type=Path)
    return parser


def _resolve_config(args):
    if args.preset is not None:
        config = preset(args.preset)
    else:
        config = load_config(args.config)
    changes = {}
    if args.engine is not None:
        changes["engine"] = args.engine
    if args.eps is not None:
        changes["eps"] = args.eps
    if args.trajectories is not None:
        changes["n_traj"] = args.trajectories
    return config.replace(**changes) if changes else config


def _cmd_run(args) -> int:
    config = _resolve_config(args)
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    written = []
    if config.engine == "newtonian":
        ensemble = run_newtonian_scenario(config)
        name = "trajectories_newtonian.csv"
        write_trajectories_csv(out_dir / name, ensemble)
        written.append(name)
    else:
        run = run_field_scenario(config, compute_q=True)
        write_density_csv(out_dir / "density.csv", run.fields, run.q_values,
                          full_resolution=args.full_density)
        written.append("density.csv")
        if run.ensemble is not None:
            name = f"trajectories_{run.ensemble.provenance}.csv"
            write_trajectories_csv(out_dir / name, run.ensemble)
            written.append(name)
        write_diagnostics_csv(out_dir / "diagnostics.csv", run.diagnostics)
        written.append("diagnostics.csv")
    write_manifest(out_dir, config, written, time.monotonic() - started)
    print(f"wrote {', '.join(written)} and manifest.json to {out_dir}")
    return 0


def _axes_match(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and np.allclose(a, b, rtol=0, atol=1e-12)


def _compare_grids(man_a: dict, man_b: dict) -> None:
    for key in ("n_points", "x_min", "x_max"):
        if man_a["config"][key] != man_b["config"][key]:
            raise ConfigurationError(
                f"run directories disagree on grid {key}: "
                f"{man_a['config'][key]} vs {man_b['config'][key]}")


def _cmd_compare(args) -> int:
    dir_a, dir_b = args.run_a, args.run_b
    man_a, man_b = read_manifest(dir_a), read_manifest(dir_b)
    _compare_grids(man_a, man_b)
    print(f"comparing {dir_a} ({man_a['config']['engine']}) vs "
          f"{dir_b} ({man_b['config']['engine']})")

    dens_a, dens_b = dir_a / "density.csv", dir_b / "density.csv"
    if dens_a.exists() and dens_b.exists():
        ta, xa, da, qa = read_density_csv(dens_a)
        tb, xb, db, qb = read_density_csv(dens_b)
        if not (_axes_match(ta, tb) and _axes_match(xa, xb)):
            raise ConfigurationError(
                "density axes differ between the two runs")
        print(f"density: max|rho_a - rho_b| = {np.max(np.abs(da - db)):.6g}")
        print(f"density: max|Q_a - Q_b| = {np.max(np.abs(qa - qb)):.6g}")

    for file_a in list_trajectory_files(dir_a):
        for file_b in list_trajectory_files(dir_b):
            ta, xa = read_trajectories_csv(file_a)
            tb, xb = read_trajectories_csv(file_b)
            if not _axes_match(ta, tb):
                raise ConfigurationError(
                    f"time axes differ between {file_a.name} and "
                    f"{file_b.name}")
            if xa.shape != xb.shape:
                raise ConfigurationError(
                    f"ensemble sizes differ between {file_a.name} and "
                    f"{file_b.name}")
            dev = np.max(np.abs(xa - xb))
            # per-trajectory arc length of the second family, as the
            # deviation yardstick
            path = np.sum(np.abs(np.diff(xb, axis=1)), axis=1)
            with np.errstate(invalid="ignore", divide="ignore"):
                rel = np.max(np.max(np.abs(xa - xb), axis=1)
                             / np.where(path > 0, path, np.inf))
            fam_a = file_a.stem.replace("trajectories_", "")
            fam_b = file_b.stem.replace("trajectories_", "")
            print(f"trajectories {fam_a} vs {fam_b}: max_deviation = "
                  f"{dev:.6g}, max_deviation/path = {rel:.6g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_compare(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except PropagationDivergedError as exc:
        print(f"propagation diverged: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
