"""Three-panel trap-family figure: density, momentum distribution, noise cut.

Reads a fig1 preset directory (omega-* runs) and renders one panel per
observable with one series per trap curvature, colored black/blue/green/red
in order of increasing curvature.
"""

import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .loader import load_csv, load_cut, sorted_runs

SERIES_COLORS = ("black", "blue", "green", "red")


def make_fig1(preset_dir, out_path=None) -> Path:
    preset_dir = Path(preset_dir)
    runs = sorted_runs(preset_dir, "omega-")
    fig, axes = plt.subplots(3, 1, figsize=(5, 9))
    for run, color in zip(runs, SERIES_COLORS):
        label = run.name.replace("omega-", "$\\Omega/J$=")
        dens = load_csv(run / "density.csv")
        axes[0].plot(dens["j"], dens["n_j"], color=color, label=label)
        mom = load_csv(run / "momentum.csv")
        axes[1].plot(mom["q"], mom["n_q"], color=color, label=label)
        cut = load_cut(run / "noise_cut_q2-0.csv")
        axes[2].plot(cut["q1"], cut["re"], color=color, label=label)
    axes[0].set_xlabel("site $j$")
    axes[0].set_ylabel("density $n_j$")
    axes[1].set_xlabel("$q$")
    axes[1].set_ylabel("$\\langle n_q \\rangle$")
    axes[2].set_xlabel("$q_1$")
    axes[2].set_ylabel("$\\Delta(q_1, 0)$")
    for ax, tag in zip(axes, "abc"):
        ax.set_title(f"({tag})", loc="left")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path) if out_path else preset_dir / "fig1.svg"
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("preset_dir", type=Path,
                        help="fig1 preset output directory")
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args(argv)
    print(make_fig1(args.preset_dir, args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
