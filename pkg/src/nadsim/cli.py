"""Command-line interface.

Subcommands:

    simulate  integrate the Schrodinger equation for a scenario and write
              trajectory + population CSVs and a diagnostics summary
    check     evaluate the generalized adiabaticity conditions (table + CSV)
    dressed   write the dressed-state quantity and component time series
    collapse  run the stochastic loop/collapse ensemble (CSV + summary)
    plot      line-plot CSV columns into a standalone SVG

Every command exits 0 only if all requested outputs were written; on any
failure it prints a one-line reason to stderr, removes partial outputs,
and exits 1.  The default output directory is $NADSIM_OUT_DIR or the
current directory.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import adiabaticity as adiab_mod
from . import dynamics, measurement, nads
from .scenario import BUILTIN_SCENARIOS, load_scenario


def _default_out():
    return os.environ.get("NADSIM_OUT_DIR", ".")


class OutputTracker:
    """Records files written by a command so failures can clean up."""

    def __init__(self):
        self.paths = []

    def open(self, path):
        self.paths.append(path)
        return open(path, "w", encoding="utf-8", newline="")

    def cleanup(self):
        for path in self.paths:
            try:
                os.remove(path)
            except OSError:
                pass


def _write_csv(tracker, path, header, columns):
    with tracker.open(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _floats(*arrays):
    return [np.asarray(a, dtype=float).tolist() for a in arrays]


def cmd_simulate(args, tracker):
    scenario = load_scenario(args.scenario)
    grid = scenario.times()
    initial = None
    trajectory = dynamics.integrate(
        scenario.system, scenario.pulse, grid, mode=args.mode, initial=initial
    )
    series = nads.quantities_series(scenario.system, scenario.pulse, grid)
    dressed = nads.construct_nads(scenario.system, scenario.pulse, grid, series=series)
    populations = dynamics.population_series(trajectory, scenario.system, scenario.pulse, dressed)
    diagnostics = None
    if np.any(populations.intensity > 0.0):
        diagnostics = dynamics.coherence_diagnostics(populations)

    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        tracker,
        os.path.join(args.out, "trajectory.csv"),
        ["t", "re_cg", "im_cg", "re_ce", "im_ce"],
        _floats(grid, trajectory.c_g.real, trajectory.c_g.imag,
                trajectory.c_e.real, trajectory.c_e.imag),
    )
    _write_csv(
        tracker,
        os.path.join(args.out, "populations.csv"),
        ["t", "p_g", "p_e", "p_G_real", "p_G_virtual", "p_E_real", "p_E_virtual",
         "intensity", "integrated_intensity"],
        _floats(grid, populations.p_bare_g, populations.p_bare_e,
                populations.p_G_real, populations.p_G_virtual,
                populations.p_E_real, populations.p_E_virtual,
                populations.intensity, populations.integrated_intensity),
    )
    with tracker.open(os.path.join(args.out, "diagnostics.txt")) as fh:
        fh.write(f"mode: {args.mode}\n")
        fh.write("frame: dressed-component populations are reported in the "
                 "rotating (detuning) frame\n")
        if diagnostics is None:
            fh.write("diagnostics: n/a (zero-field scenario)\n")
        else:
            fh.write(f"r_coherent: {diagnostics.r_coherent!r}\n")
            fh.write(f"r_incoherent: {diagnostics.r_incoherent!r}\n")
            fh.write(f"peak_ratio: {diagnostics.peak_ratio!r}\n")
        fh.write(f"final_p_g: {float(populations.p_bare_g[-1])!r}\n")
        fh.write(f"final_p_e: {float(populations.p_bare_e[-1])!r}\n")
    print(f"simulate: wrote trajectory.csv, populations.csv, diagnostics.txt to {args.out}")


def cmd_check(args, tracker):
    scenario = load_scenario(args.scenario)
    settings = scenario.adiabaticity
    n_max = settings.n_max if args.n_max is None else args.n_max
    threshold = settings.threshold if args.threshold is None else args.threshold
    report = adiab_mod.check(
        scenario.system,
        scenario.pulse,
        scenario.times(),
        n_max=n_max,
        threshold=threshold,
        doppler_width=scenario.doppler_width or None,
        laser_width=scenario.laser_width or None,
        margin=settings.margin,
    )
    print(report.to_text())
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "adiabaticity.csv")
    tracker.paths.append(path)
    report.write_csv(path)
    print(f"check: wrote adiabaticity.csv to {args.out}")


def cmd_dressed(args, tracker):
    scenario = load_scenario(args.scenario)
    grid = scenario.times()
    series = nads.quantities_series(scenario.system, scenario.pulse, grid)
    dressed = nads.construct_nads(scenario.system, scenario.pulse, grid, series=series)

    os.makedirs(args.out, exist_ok=True)
    header = ["t", "delta"]
    columns = [grid, np.full(grid.shape, series.delta)]
    for name in ("delta_na", "rabi_na", "lambda1", "lambda2", "lambda1_na",
                 "lambda2_na", "omega_G", "omega_E", "cos_half", "sin_half"):
        values = getattr(series, name)
        header += [f"re_{name}", f"im_{name}"]
        columns += [values.real, values.imag]
    _write_csv(tracker, os.path.join(args.out, "nads_quantities.csv"), header, _floats(*columns))

    header = ["t"]
    columns = [grid]
    for name in ("g_real", "g_virtual", "e_real", "e_virtual", "cos_half", "sin_half"):
        values = getattr(dressed, name)
        header += [f"re_{name}", f"im_{name}"]
        columns += [values.real, values.imag]
    _write_csv(
        tracker, os.path.join(args.out, "dressed_components.csv"), header, _floats(*columns)
    )
    print(f"dressed: wrote nads_quantities.csv, dressed_components.csv to {args.out}")


def cmd_collapse(args, tracker):
    scenario = load_scenario(args.scenario)
    config = scenario.mc_config(trajectories=args.trajectories, seed=args.seed)
    series = nads.quantities_series(scenario.system, scenario.pulse, config.grid)
    stats = measurement.ensemble(config, scenario.system, scenario.pulse, series=series)
    expected = measurement.expected_excited_occupation(
        config, scenario.system, scenario.pulse, series=series
    )
    populations = measurement.expected_population_series(
        config, scenario.system, scenario.pulse, series=series
    )
    diagnostics = dynamics.coherence_diagnostics(populations)

    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        tracker,
        os.path.join(args.out, "ensemble.csv"),
        ["n_trajectories", "seed", "fraction_g", "fraction_e", "mean_loop_count",
         "mean_photons_absorbed", "mean_photons_emitted", "pointer_correlation"],
        [[stats.n_trajectories], [stats.seed], [repr(stats.fraction_ground)],
         [repr(stats.fraction_excited)], [repr(stats.mean_loop_count)],
         [repr(stats.mean_photons_absorbed)], [repr(stats.mean_photons_emitted)],
         [repr(stats.pointer_correlation)]],
    )
    edges, ground, excited, loops = measurement.dwell_histogram(stats, bins=args.bins)
    _write_csv(
        tracker,
        os.path.join(args.out, "dwell_histogram.csv"),
        ["bin_left", "bin_right", "ground_count", "excited_count", "loop_count"],
        _floats(edges[:-1], edges[1:]) + [ground.tolist(), excited.tolist(), loops.tolist()],
    )
    _write_csv(
        tracker,
        os.path.join(args.out, "occupancy.csv"),
        ["t", "p_excited_nads", "p_ground_nads", "expected_p_excited"],
        _floats(config.grid, stats.occupancy_excited,
                1.0 - stats.occupancy_excited, expected),
    )
    with tracker.open(os.path.join(args.out, "summary.txt")) as fh:
        fh.write(f"trajectories: {stats.n_trajectories}\n")
        fh.write(f"seed: {stats.seed}\n")
        fh.write(f"terminal fractions: g {stats.fraction_ground!r}, "
                 f"e {stats.fraction_excited!r}\n")
        fh.write(f"pointer correlation: {stats.pointer_correlation!r}\n")
        fh.write(f"mean loop count: {stats.mean_loop_count!r}\n")
        fh.write(f"mean loop duration: {stats.mean_loop_duration!r}\n")
        fh.write(f"mean photons absorbed/emitted: {stats.mean_photons_absorbed!r} / "
                 f"{stats.mean_photons_emitted!r}\n")
        fh.write(f"expected coherent/incoherent correlations: "
                 f"r_coherent {diagnostics.r_coherent!r}, "
                 f"r_incoherent {diagnostics.r_incoherent!r}\n")
        fh.write(f"peak virtual/real ratio: {diagnostics.peak_ratio!r}\n")
    print(f"collapse: wrote ensemble.csv, dwell_histogram.csv, occupancy.csv, "
          f"summary.txt to {args.out}")


def cmd_plot(args, tracker):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.input, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    if not rows:
        raise ValueError(f"no data rows in {args.input}")
    data = {name: np.array(col) for name, col in zip(header, zip(*rows))}

    x_name = args.x or header[0]
    if x_name not in data:
        raise ValueError(f"column {x_name!r} not found in {args.input}")
    wanted = [name.strip() for name in args.columns.split(",") if name.strip()]
    if not wanted:
        raise ValueError("no columns requested")
    for name in wanted:
        if name not in data:
            raise ValueError(f"column {name!r} not found in {args.input} "
                             f"(available: {', '.join(header)})")

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for name in wanted:
        ax.plot(data[x_name], data[name], label=name)
    ax.set_xlabel(x_name)
    ax.legend()
    fig.tight_layout()
    tracker.paths.append(args.out)
    fig.savefig(args.out, format="svg")
    plt.close(fig)
    print(f"plot: wrote {args.out}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nadsim",
        description="Driven damped two-level system: dressed states, "
                    "adiabaticity, dynamics, collapse statistics.",
        epilog=f"built-in scenarios: {', '.join(BUILTIN_SCENARIOS)}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate the Schrodinger equation")
    p.add_argument("--scenario", required=True, help="scenario file or built-in name")
    p.add_argument("--mode", choices=list(dynamics.MODES), default=dynamics.ROTATING_FRAME)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="evaluate the adiabaticity conditions")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dressed", help="write dressed-state time series")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=cmd_dressed)

    p = sub.add_parser("collapse", help="run the stochastic collapse ensemble")
    p.add_argument("--scenario", required=True)
    p.add_argument("--trajectories", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("plot", help="plot CSV columns to an SVG file")
    p.add_argument("--input", required=True)
    p.add_argument("--columns", required=True, help="comma-separated y columns")
    p.add_argument("--x", default=None, help="x column (default: first)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    tracker = OutputTracker()
    try:
        args.func(args, tracker)
    except Exception as exc:  # one-line reason, partial outputs removed
        tracker.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
