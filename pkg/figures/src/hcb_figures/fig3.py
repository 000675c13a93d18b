"""Quasiperiodic-disorder figure: coherence on the left, Bragg zooms on the right.

Left column: momentum distribution (a) and q2=0 noise cut (b) for each
disorder amplitude, colored black/green/red/blue in increasing order.
Right column: blowups (c), (d) of the same series around the Fibonacci
indices, where the Bragg peaks hide at the left panels' scale.
"""

import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .loader import load_csv, load_cut, load_manifest, sorted_runs

SERIES_COLORS = ("black", "green", "red", "blue")


def _bragg_window(runs):
    """Fibonacci indices and a zoom window from the run manifests."""
    for run in runs:
        manifest = load_manifest(run)
        pot = manifest["scenario"]["potential"]
        if pot["type"] == "quasiperiodic":
            L = manifest["scenario"]["L"]
            peaks = sorted({pot["gamma_num"] % L, (L - pot["gamma_num"]) % L})
            lo = max(1, min(peaks) - 4)
            hi = min(L - 1, max(peaks) + 4)
            return peaks, (lo, hi)
    raise ValueError("no quasiperiodic run in the preset directory")


def make_fig3(preset_dir, out_path=None) -> Path:
    preset_dir = Path(preset_dir)
    runs = sorted_runs(preset_dir, "lambda-")
    peaks, (lo, hi) = _bragg_window(runs)
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    (ax_nq, ax_nq_zoom), (ax_dd, ax_dd_zoom) = axes
    for run, color in zip(runs, SERIES_COLORS):
        label = run.name.replace("lambda-", "$\\lambda$=")
        mom = load_csv(run / "momentum.csv")
        cut = load_cut(run / "noise_cut_q2-0.csv")
        ax_nq.plot(mom["q"], mom["n_q"], color=color, label=label)
        ax_dd.plot(cut["q1"], cut["re"], color=color, label=label)
        sel = slice(lo, hi + 1)
        ax_nq_zoom.plot(mom["q"][sel], mom["n_q"][sel], color=color,
                        marker=".", label=label)
        ax_dd_zoom.plot(cut["q1"][sel], cut["re"][sel], color=color,
                        marker=".", label=label)
    for ax in (ax_nq_zoom, ax_dd_zoom):
        for p in peaks:
            ax.axvline(p, color="0.8", lw=0.6, zorder=0)
    ax_nq.set_ylabel("$\\langle n_q \\rangle$")
    ax_dd.set_ylabel("$\\Delta(q_1, 0)$")
    for ax in (ax_dd, ax_dd_zoom):
        ax.set_xlabel("$q_1$")
    ax_nq.set_xlabel("$q$")
    ax_nq_zoom.set_xlabel("$q$")
    titles = ["(a)", "(c) Bragg zoom", "(b)", "(d) Bragg zoom"]
    for ax, title in zip(axes.ravel(), titles):
        ax.set_title(title, loc="left")
    ax_nq.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path) if out_path else preset_dir / "fig3.svg"
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("preset_dir", type=Path,
                        help="fig3 or fig3-small preset output directory")
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args(argv)
    print(make_fig3(args.preset_dir, args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
