"""Deterministic CSV and JSON-manifest output.

All floats are written with 17 significant digits so that a rerun with an
identical configuration reproduces identical bytes, and round-tripping
through text loses nothing.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .grids import WaveFunction


def fmt(value) -> str:
    """17-significant-digit representation (exact round trip for float64)."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return str(value)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_manifest(path, command: str, config: dict, wall_times=None,
                   extra: dict | None = None) -> Path:
    """JSON manifest with the fully resolved configuration and timings."""
    path = Path(path)
    doc = {
        "command": command,
        "version": __version__,
        "config": config,
        "wall_times_s": wall_times if wall_times is not None else [],
    }
    if extra:
        doc.update(extra)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_ramp_csv(path, samples) -> Path:
    """Ramp export: one row per sample, columns t,a,a_dot,a_ddot,g,tau."""
    rows = [(s.t, s.a, s.a_dot, s.a_ddot, s.g, s.tau) for s in samples]
    return write_csv(path, ["t", "a", "a_dot", "a_ddot", "g", "tau"], rows)


def write_trajectory_csv(path, trajectory) -> Path:
    rows = zip(trajectory.t, trajectory.energy, trajectory.norm,
               trajectory.central_density)
    return write_csv(path, ["t", "E", "norm", "central_density"], rows)


def write_wavefunction(path_prefix, psi: WaveFunction, n_atoms: float, g: float,
                       t: float) -> tuple[Path, Path]:
    """Snapshot as CSV x,re,im plus a JSON sidecar describing the grid."""
    prefix = Path(path_prefix)
    csv_path = write_csv(prefix.with_suffix(".csv"), ["x", "re", "im"],
                         zip(psi.grid.x, psi.values.real, psi.values.imag))
    sidecar = {
        "geometry": psi.grid.geometry,
        "L": psi.grid.box,
        "M": psi.grid.points,
        "N": n_atoms,
        "g": g,
        "t": t,
    }
    json_path = prefix.with_suffix(".json")
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def read_wavefunction(path_prefix):
    """Inverse of write_wavefunction; returns (x, values, sidecar dict)."""
    prefix = Path(path_prefix)
    raw = np.loadtxt(prefix.with_suffix(".csv"), delimiter=",", skiprows=1)
    sidecar = json.loads(prefix.with_suffix(".json").read_text())
    return raw[:, 0], raw[:, 1] + 1j * raw[:, 2], sidecar
