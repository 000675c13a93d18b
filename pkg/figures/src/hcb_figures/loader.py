"""CSV loading for the figure scripts.

These scripts are read-only consumers of preset output directories; they
never recompute any physics. Loading fails fast, naming the absent file or
the missing column.
"""

import json
from pathlib import Path

import numpy as np


class MissingInputError(FileNotFoundError):
    pass


class BadColumnsError(ValueError):
    pass


REQUIRED_COLUMNS = {
    "density.csv": ["j", "n_j"],
    "momentum.csv": ["q", "q_phys", "n_q"],
    "noise.csv": ["q1", "q2", "re", "im"],
}


def load_csv(path: Path, kind: str = None) -> dict:
    """Columns of one CSV as a name -> array dict, validated against `kind`."""
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(f"required input {path} does not exist")
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    required = REQUIRED_COLUMNS.get(kind or path.name)
    if required and header != required:
        if kind and kind.startswith("noise_cut"):
            required = ["q1", "re", "im"]
        if header != required:
            raise BadColumnsError(
                f"{path} has columns {header}, expected {required}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, k] for k, name in enumerate(header)}


def load_cut(path: Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(f"required input {path} does not exist")
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    if header != ["q1", "re", "im"]:
        raise BadColumnsError(f"{path} has columns {header}, expected q1,re,im")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, k] for k, name in enumerate(header)}


def load_manifest(run_dir: Path) -> dict:
    path = Path(run_dir) / "manifest.json"
    if not path.is_file():
        raise MissingInputError(f"required input {path} does not exist")
    return json.loads(path.read_text())


def sorted_runs(preset_dir: Path, prefix: str):
    """Run directories of one preset, sorted by their numeric suffix."""
    preset_dir = Path(preset_dir)
    if not preset_dir.is_dir():
        raise MissingInputError(f"preset directory {preset_dir} does not exist")
    runs = [p for p in preset_dir.iterdir()
            if p.is_dir() and p.name.startswith(prefix)]
    if not runs:
        raise MissingInputError(
            f"no {prefix}* run directories under {preset_dir}")
    return sorted(runs, key=lambda p: float(p.name.split("-", 1)[1]))


def cut_files(run_dir: Path):
    """Available noise cuts of one run, sorted by q2."""
    run_dir = Path(run_dir)
    cuts = sorted(run_dir.glob("noise_cut_q2-*.csv"),
                  key=lambda p: int(p.stem.rsplit("-", 1)[1]))
    if not cuts:
        raise MissingInputError(f"no noise_cut_q2-*.csv under {run_dir}")
    return cuts
