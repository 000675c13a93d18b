"""Noise-map cut families for the Mott and non-Mott trap states.

Panel (a): Mott state, one series per fixed q2 cut. Panel (b): the same cuts
for the non-Mott state. Panel (c): blowup of (b) without the dominant q2=0
series. The q2=0 series is red in the Mott panel and blue in the non-Mott
one; the remaining cuts are black, green and yellow in increasing q2.
"""

import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .loader import cut_files, load_cut, sorted_runs

OTHER_CUT_COLORS = ("black", "green", "gold")


def _plot_cuts(ax, run, zero_color, skip_zero=False):
    files = cut_files(run)
    others = iter(OTHER_CUT_COLORS)
    for path in files:
        q2 = int(path.stem.rsplit("-", 1)[1])
        if q2 == 0:
            if skip_zero:
                continue
            color = zero_color
        else:
            color = next(others, "gray")
        cut = load_cut(path)
        ax.plot(cut["q1"], cut["re"], color=color, label=f"$q_2$={q2}")


def make_fig2(preset_dir, out_path=None) -> Path:
    preset_dir = Path(preset_dir)
    runs = sorted_runs(preset_dir, "omega-")
    # largest curvature is the Mott state, smallest the non-Mott one
    mott, non_mott = runs[-1], runs[0]
    fig, axes = plt.subplots(3, 1, figsize=(5, 9))
    _plot_cuts(axes[0], mott, zero_color="red")
    _plot_cuts(axes[1], non_mott, zero_color="blue")
    _plot_cuts(axes[2], non_mott, zero_color="blue", skip_zero=True)
    axes[0].set_title(f"(a) Mott ({mott.name})", loc="left")
    axes[1].set_title(f"(b) non-Mott ({non_mott.name})", loc="left")
    axes[2].set_title("(c) blowup of (b), $q_2 \\neq 0$", loc="left")
    for ax in axes:
        ax.set_xlabel("$q_1$")
        ax.set_ylabel("$\\Delta(q_1, q_2)$")
        ax.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path) if out_path else preset_dir / "fig2.svg"
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("preset_dir", type=Path,
                        help="fig2 preset output directory")
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args(argv)
    print(make_fig2(args.preset_dir, args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
