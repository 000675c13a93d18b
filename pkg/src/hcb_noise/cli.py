"""Command-line front end: single runs, figure presets, oracle gate, benchmark.

Exit codes: 0 success, 2 scenario validation error, 3 degenerate Fermi level,
4 I/O error, 5 oracle-check deviation.
"""

import argparse
import hashlib
import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DegenerateFermiError, ScenarioError, HcbError
from .scenario import (Flat, Harmonic, LatticeScenario, Quasiperiodic,
                       fibonacci_approximant, load_scenario, scenario_to_dict,
                       validate)
from .spectral import solve, write_gmatrix_csv, write_spectrum_csv
from .twopoint import (compute_correlations, occupied_site_count,
                       write_density_csv, write_momentum_csv)
from .fourpoint import delta_cut, four_point, noise_map
from . import oracle as ed

EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4
EXIT_ORACLE = 5


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _array_checksum(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()


def _write_noise_csv(delta: np.ndarray, path: Path) -> None:
    L = delta.shape[0]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q1,q2,re,im\n")
        for q1 in range(L):
            for q2 in range(L):
                v = delta[q1, q2]
                fh.write(f"{q1},{q2},{v.real:.17g},{v.imag:.17g}\n")


def _write_cut_csv(cut: np.ndarray, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q1,re,im\n")
        for q1, v in enumerate(cut):
            fh.write(f"{q1},{v.real:.17g},{v.imag:.17g}\n")


def run_scenario(scenario: LatticeScenario, out_dir: Path, threads: int = 1,
                 cuts=(0,), dump_spectral: bool = False,
                 batch_elements=None) -> dict:
    """Full pipeline for one scenario; returns the manifest dictionary."""
    out_dir.mkdir(parents=True, exist_ok=True)
    warnings = validate(scenario)
    timings = {}
    t0 = time.perf_counter()
    spectral = solve(scenario)
    timings["spectral_seconds"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    corr = compute_correlations(spectral, scenario.normalization)
    timings["twopoint_seconds"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    noise = noise_map(scenario, spectral, corr, threads=threads,
                      batch_elements=batch_elements)
    timings["fourpoint_seconds"] = time.perf_counter() - t0

    # trap rescaling applies to the reported momentum/noise data only
    factor = 1.0
    if scenario.trap_renorm and not isinstance(scenario.potential, Flat):
        Z = occupied_site_count(corr.density, scenario.density_threshold)
        factor = scenario.N / Z

    t0 = time.perf_counter()
    files = {}
    write_density_csv(corr.density, out_dir / "density.csv")
    files["density"] = "density.csv"
    write_momentum_csv(factor * corr.nq, out_dir / "momentum.csv")
    files["momentum"] = "momentum.csv"
    _write_noise_csv(factor * noise.delta, out_dir / "noise.csv")
    files["noise"] = "noise.csv"
    for q2 in cuts:
        name = f"noise_cut_q2-{q2}.csv"
        _write_cut_csv(factor * delta_cut(noise, q2), out_dir / name)
        files[f"cut_q2_{q2}"] = name
    if dump_spectral:
        write_spectrum_csv(spectral, out_dir / "spectrum.csv")
        write_gmatrix_csv(spectral, out_dir / "gmatrix.csv")
        files["spectrum"] = "spectrum.csv"
        files["gmatrix"] = "gmatrix.csv"
    timings["io_seconds"] = time.perf_counter() - t0

    manifest = {
        "scenario": scenario_to_dict(scenario),
        "warnings": warnings,
        "engine": {
            "threads": threads,
            "mode": noise.meta.get("mode"),
            "tuple_count": noise.meta.get("tuple_count"),
            "gap_classes": noise.meta.get("gap_classes"),
            "stage1_seconds": noise.meta.get("stage1_seconds"),
            "stage2_seconds": noise.meta.get("stage2_seconds"),
        },
        "trap_renorm_factor": factor,
        "timings": timings,
        "input_checksums": {
            "g": _array_checksum(spectral.g),
            "G": _array_checksum(spectral.G),
            "B": _array_checksum(corr.B),
        },
        "versions": {
            "hcb_noise": __version__,
            "numpy": np.__version__,
        },
        "artifacts": {},
    }
    for key, name in files.items():
        manifest["artifacts"][name] = _sha256(out_dir / name)
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


# ---------------------------------------------------------------------------
# presets mirroring the three published figure setups
# ---------------------------------------------------------------------------

FIG1_OMEGAS = (0.0, 0.008, 0.018, 0.17)
FIG2_OMEGAS = (0.17, 0.008)
FIG3_LAMBDAS = (0.0, 0.5, 1.0, 2.0)
FIG2_CUT_FRACTIONS = (0, 15, 30, 45)     # on the L=55 grid


def _fig_ln(ci: bool, scale_L=None):
    """Lattice and filling for the trap presets (full, CI-scaled, or custom)."""
    if scale_L:
        L = int(scale_L)
        N = max(3, int(round(19 / 55 * L)))
        if N % 2 == 0:
            N += 1     # odd filling keeps the periodic Fermi sea non-degenerate
        return L, N
    return (33, 11) if ci else (55, 19)


def fig2_cuts(L: int):
    return tuple(int(round(q * L / 55)) for q in FIG2_CUT_FRACTIONS)


def preset_runs(name: str, ci: bool = False, full: bool = False, scale_L=None):
    """(run-name, scenario, cuts) triples for a preset."""
    runs = []
    if name in ("fig1", "fig2"):
        L, N = _fig_ln(ci, scale_L)
        omegas = FIG1_OMEGAS if name == "fig1" else FIG2_OMEGAS
        cuts = (0,) if name == "fig1" else fig2_cuts(L)
        for omega in omegas:
            pot = Flat() if omega == 0 else Harmonic(omega)
            sc = LatticeScenario(L=L, N=N, bc="periodic", potential=pot,
                                 trap_renorm=omega > 0)
            runs.append((f"omega-{omega:g}", sc, cuts))
        return runs
    if name in ("fig3", "fig3-small"):
        if name == "fig3" and full:
            L, N, bc = 89, 25, "periodic"
        else:
            L = int(scale_L) if scale_L else 34
            N = max(2, int(round(10 / 34 * L)))
            bc = "open"
        fib = fibonacci_approximant(L)
        for lam in FIG3_LAMBDAS:
            pot = (Flat() if lam == 0 else
                   Quasiperiodic(lam, fib.numerator, fib.denominator, np.pi / 4))
            sc = LatticeScenario(L=L, N=N, bc=bc, potential=pot)
            runs.append((f"lambda-{lam:g}", sc, (0,)))
        return runs
    if name == "mott-sweep":
        L = int(scale_L) if scale_L else 11
        for N in range(1, L + 1):
            sc = LatticeScenario(L=L, N=N, bc="open")
            runs.append((f"N-{N}", sc, (0,)))
        return runs
    raise ScenarioError(f"unknown preset {name!r}")


def run_preset(name, out_dir: Path, ci=False, full=False, threads=1,
               scale_L=None) -> dict:
    if name == "fig3" and not full:
        print("fig3 full size (L=89) is opt-in via --full; running fig3-small parameters")
    runs = preset_runs(name, ci=ci, full=full, scale_L=scale_L)
    preset_dir = out_dir / name
    summary = {"preset": name, "runs": {}}
    sweep_rows = []
    for run_name, sc, cuts in runs:
        t0 = time.perf_counter()
        manifest = run_scenario(sc, preset_dir / run_name, threads=threads, cuts=cuts)
        elapsed = time.perf_counter() - t0
        summary["runs"][run_name] = {
            "seconds": elapsed,
            "scenario": manifest["scenario"],
        }
        print(f"  {name}/{run_name}: L={sc.L} N={sc.N} done in {elapsed:.1f} s")
        if name == "mott-sweep":
            delta00, nq0 = _sweep_point(preset_dir / run_name)
            sweep_rows.append((sc.N, delta00, nq0))
    if sweep_rows:
        with open(preset_dir / "sweep.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("N,delta00,nq0\n")
            for N, d, n0 in sweep_rows:
                fh.write(f"{N},{d:.17g},{n0:.17g}\n")
    with open(preset_dir / "preset_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


def _sweep_point(run_dir: Path):
    noise = np.loadtxt(run_dir / "noise_cut_q2-0.csv", delimiter=",", skiprows=1)
    nq = np.loadtxt(run_dir / "momentum.csv", delimiter=",", skiprows=1)
    return float(noise[0, 1]), float(nq[0, 2])


# ---------------------------------------------------------------------------
# oracle gate
# ---------------------------------------------------------------------------

def _oracle_scenarios(L: int):
    """Sweep scenarios where the string mapping is exact (open, or odd-N ring)."""
    N_open = max(1, L // 2)
    N_ring = N_open if N_open % 2 == 1 else N_open - 1
    if N_ring < 1:
        N_ring = 1
    fib = fibonacci_approximant(max(2, L))
    out = [
        LatticeScenario(L=L, N=N_open, bc="open"),
        LatticeScenario(L=L, N=N_open, bc="open", potential=Harmonic(0.1)),
        LatticeScenario(L=L, N=N_open, bc="open",
                        potential=Quasiperiodic(0.5, fib.numerator, fib.denominator, np.pi / 4)),
        LatticeScenario(L=L, N=L, bc="periodic"),
    ]
    if L > 2:
        out.append(LatticeScenario(L=L, N=N_ring, bc="periodic"))
        out.append(LatticeScenario(L=L, N=N_ring, bc="periodic", potential=Harmonic(0.1)))
    return out


def oracle_check(max_L: int, out_dir: Path, corrupt_g: bool = False) -> int:
    """Exhaustive determinant-engine vs exact-diagonalization sweep up to max_L.

    Writes oracle_report.json and returns the number of failures.
    """
    if max_L > ed.MAX_NOISE_SITES:
        raise ScenarioError(f"oracle check limited to max_L <= {ed.MAX_NOISE_SITES}")
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {"max_L": max_L, "tolerance": 1e-8, "scenarios": [],
              "failures": [], "mov_fingerprint_examples": []}
    worst_overall = 0.0
    for L in range(2, max_L + 1):
        for sc in _oracle_scenarios(L):
            spectral = solve(sc)
            G = spectral.G.copy()
            if corrupt_g:
                G[0, -1] += 0.37     # negative-control hook
            corr = compute_correlations(spectral)
            state = ed.hcb_ground_state(sc)
            worst = 0.0
            worst_tuple = None
            for t in itertools.product(range(L), repeat=4):
                dev = abs(four_point(t, G, corr.B, spectral.g)
                          - ed.oracle_four_point(state, t))
                if dev > worst:
                    worst, worst_tuple = dev, t
            entry = {
                "L": L, "N": sc.N, "bc": sc.bc,
                "potential": type(sc.potential).__name__,
                "max_abs_deviation": worst,
                "worst_tuple": worst_tuple,
            }
            report["scenarios"].append(entry)
            worst_overall = max(worst_overall, worst)
            if worst > 1e-8:
                report["failures"].append(entry)
    # MOV fingerprint list on a reference lattice
    sc = LatticeScenario(L=min(max_L, 4), N=min(max_L, 4) // 2 or 1, bc="open")
    state_b = ed.hcb_ground_state(sc)
    state_s = ed.hcb_ground_state(sc, algebra="spin")
    for t in itertools.product(range(sc.L), repeat=4):
        diff = abs(ed.oracle_four_point(state_b, t)
                   - ed.oracle_four_point(state_s, t, algebra="spin"))
        if diff > 1e-12:
            report["mov_fingerprint_examples"].append(
                {"tuple": t, "difference": diff})
    # Mott constants from the oracle, next to the published ones
    mott = LatticeScenario(L=6, N=6, bc="periodic")
    delta, _ = ed.oracle_noise_map(ed.hcb_ground_state(mott))
    report["mott_constants"] = {
        "L": 6,
        "delta_00": float(delta[0, 0].real),
        "delta_offpeak": float(delta[1, 0].real),
        "closed_form": {"delta_00": 2 - 2 / 6, "delta_offpeak": -2 / 6},
        "published": {"delta_00": 2 - 1 / 6, "delta_offpeak": -1 / 6,
                      "note": "normalization-ambiguous, not asserted"},
    }
    # finite-U convergence of a representative four-point value
    conv_sc = LatticeScenario(L=4, N=2, bc="open")
    hcb_val = ed.oracle_four_point(ed.hcb_ground_state(conv_sc), (0, 1, 1, 0))
    conv = []
    for U in (10.0, 100.0, 1000.0):
        bh = ed.bose_hubbard_ground(conv_sc, U=U, cap=3)
        conv.append({"U": U,
                     "value": ed.oracle_four_point(bh, (0, 1, 1, 0)),
                     "hcb_value": hcb_val})
    report["finite_U_convergence"] = conv
    report["max_abs_deviation_overall"] = worst_overall
    with open(out_dir / "oracle_report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    n_fail = len(report["failures"])
    status = "PASS" if n_fail == 0 else "FAIL"
    print(f"oracle-check up to L={max_L}: {status} "
          f"(worst deviation {worst_overall:.3e}, {n_fail} failing scenarios)")
    return n_fail


# ---------------------------------------------------------------------------
# benchmark
# ---------------------------------------------------------------------------

def benchmark(L_list, threads_list, out_dir: Path) -> Path:
    try:
        import psutil
        proc = psutil.Process()
    except ImportError:
        proc = None
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "benchmark.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("L,threads,tuples,determinants,stage1_seconds,stage2_seconds,"
                 "total_seconds,tuples_per_second,dets_per_second,"
                 "delta_checksum,rss_mb\n")
        for L in L_list:
            N = L // 2 if (L // 2) % 2 == 1 else L // 2 - 1
            N = max(1, N)
            sc = LatticeScenario(L=L, N=N, bc="periodic")
            spectral = solve(sc)
            corr = compute_correlations(spectral)
            for threads in threads_list:
                t0 = time.perf_counter()
                noise = noise_map(sc, spectral, corr, threads=threads)
                total = time.perf_counter() - t0
                rss = proc.memory_info().rss / 2**20 if proc else float("nan")
                checksum = _array_checksum(noise.delta)
                n_dets = noise.meta["det_count"]
                fh.write(f"{L},{threads},{L**4},{n_dets},"
                         f"{noise.meta['stage1_seconds']:.6f},"
                         f"{noise.meta['stage2_seconds']:.6f},{total:.6f},"
                         f"{L**4 / total:.1f},{n_dets / total:.1f},"
                         f"{checksum},{rss:.1f}\n")
                print(f"  L={L} threads={threads}: {total:.2f} s, "
                      f"checksum {checksum[:12]}..., rss {rss:.0f} MB")
    return path


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcb-noise",
        description="Hard-core boson density, momentum distribution and "
                    "time-of-flight noise correlations on 1D lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("scenario", type=Path)
    p_run.add_argument("--out", type=Path, required=True)
    p_run.add_argument("--raw", action="store_true",
                       help="raw normalization (no 1/L factors)")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--stream", action="store_true",
                       help="small determinant batches (lower peak memory)")
    p_run.add_argument("--cuts", type=_int_list, default=[0],
                       help="comma-separated q2 values for noise cuts")
    p_run.add_argument("--dump-spectral", action="store_true")

    p_pre = sub.add_parser("preset", help="run a published-figure preset")
    p_pre.add_argument("name", choices=["fig1", "fig2", "fig3", "fig3-small",
                                        "mott-sweep"])
    p_pre.add_argument("--out", type=Path, required=True)
    p_pre.add_argument("--ci", action="store_true",
                       help="CI-scaled lattice (L=33, N=11 for fig1/fig2)")
    p_pre.add_argument("--full", action="store_true",
                       help="full L=89 lattice for fig3")
    p_pre.add_argument("--threads", type=int, default=1)
    p_pre.add_argument("--scale-L", type=int, default=None,
                       help="custom lattice size for smoke tests")

    p_or = sub.add_parser("oracle-check",
                          help="determinant engine vs exact diagonalization")
    p_or.add_argument("--max-L", type=int, default=6)
    p_or.add_argument("--out", type=Path, required=True)
    p_or.add_argument("--corrupt-g", action="store_true", help=argparse.SUPPRESS)

    p_b = sub.add_parser("benchmark", help="timing and determinism report")
    p_b.add_argument("--L", type=_int_list, default=[13, 21])
    p_b.add_argument("--threads", type=_int_list, default=[1, 4])
    p_b.add_argument("--out", type=Path, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            scenario = load_scenario(args.scenario)
            if args.raw:
                scenario = LatticeScenario(**{**scenario_to_dict(scenario),
                                              "normalization": "raw",
                                              "potential": scenario.potential})
            run_scenario(scenario, args.out, threads=args.threads,
                         cuts=args.cuts, dump_spectral=args.dump_spectral,
                         batch_elements=200_000 if args.stream else None)
        elif args.command == "preset":
            run_preset(args.name, args.out, ci=args.ci, full=args.full,
                       threads=args.threads, scale_L=args.scale_L)
        elif args.command == "oracle-check":
            if oracle_check(args.max_L, args.out, corrupt_g=args.corrupt_g):
                return EXIT_ORACLE
        elif args.command == "benchmark":
            benchmark(args.L, args.threads, args.out)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateFermiError as exc:
        print(f"degenerate Fermi level: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HcbError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
