"""Command-line front end.

    eit2des <spectrum|population|greens|troughs|validate> [--config PATH]
            [--out DIR] [--kind rp|nr|abs] [--control on|off] [--t2 PS ...]

Precedence: command-line flags > config file > built-in defaults.
Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 validation failure.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import greens
from .config import parse_config
from .csvio import write_csv
from .errors import ConfigError, FitError, NoSplittingError, NumericalError
from .lindblad import oracle_green_population
from .response import compute_spectrum
from .validation import run_validation

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 1, 2, 3


def _ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def _write_summary(config, outdir, lines):
    text = "\n".join(["# effective configuration", config.echo(), "", "# results", *lines]) + "\n"
    with open(os.path.join(outdir, "summary.txt"), "w") as fh:
        fh.write(text)


def cmd_spectrum(config, out):
    outdir = _ensure_dir(config.output_path)
    control = "on" if config.control_on else "off"
    lines = []
    for t2 in config.t2_list:
        spec = compute_spectrum(config.grid.with_t2(t2), config.signal_kind, config.params, config.control_on)
        w1, w3 = np.meshgrid(spec.grid.omega1, spec.grid.omega3)
        name = f"spectrum_{config.signal_kind}_control-{control}_t2-{t2:g}ps.csv"
        write_csv(os.path.join(outdir, name), ("omega1", "omega3", "value"), (w1, w3, spec.values))
        i, j = np.unravel_index(np.argmax(spec.values), spec.values.shape)
        lines.append(f"{name}: max {spec.values[i, j]:.6g} at omega1={w1[i, j]:.9g} omega3={w3[i, j]:.9g}")
    _write_summary(config, outdir, lines)
    print("\n".join(lines), file=out)
    return EXIT_OK


def cmd_population(config, out):
    outdir = _ensure_dir(config.output_path)
    p = config.params
    n = int(round(config.pop_t_max / config.pop_step))
    t2 = config.pop_step * np.arange(n + 1)
    cols = [t2] + [greens.g_pop(s, e, t2, p) for s, e in (("a", "a"), ("a", "b"), ("b", "a"), ("b", "b"))]
    cols += [oracle_green_population("a", "a", p, t2, config.dt),
             oracle_green_population("b", "b", p, t2, config.dt)]
    header = ("t2", "g_aa_aa", "g_bb_aa", "g_aa_bb", "g_bb_bb", "oracle_aa", "oracle_bb")
    write_csv(os.path.join(outdir, "population.csv"), header, cols)
    lines = [f"population.csv: {len(t2)} samples, t2 in [0, {t2[-1]:g}] ps",
             f"max |g_aa_aa - oracle_aa| = {np.abs(cols[1] - cols[5]).max():.3e}",
             f"max |g_bb_bb - oracle_bb| = {np.abs(cols[4] - cols[6]).max():.3e}"]
    _write_summary(config, outdir, lines)
    print("\n".join(lines), file=out)
    return EXIT_OK


def cmd_greens(config, out):
    outdir = _ensure_dir(config.output_path)
    w = config.grid.omega3
    lines = []
    for control, params in (("on", config.params), ("off", config.params.without_control())):
        for label, fn in (("ab_ab", greens.g_ab_ab), ("ba_ba", greens.g_ba_ba)):
            g = fn(w, params)
            name = f"greens_{label}_control-{control}.csv"
            write_csv(os.path.join(outdir, name), ("omega", "re", "im"), (w, g.real, g.imag))
            lines.append(f"{name}: {len(w)} points")
    _write_summary(config, outdir, lines)
    print("\n".join(lines), file=out)
    return EXIT_OK


def cmd_troughs(config, out):
    lo, hi = greens.trough_positions(config.params)
    glo, ghi = greens.grid_trough_positions(config.params)
    print(f"analytic      {lo:.6f} {hi:.6f}", file=out)
    print(f"grid-refined  {glo:.6f} {ghi:.6f}", file=out)
    print(f"difference    {glo - lo:.3e} {ghi - hi:.3e}", file=out)
    return EXIT_OK


def cmd_validate(config, out):
    results = run_validation(config.params)
    for r in results:
        print(r.line(), file=out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=out)
    return EXIT_OK if not failed else EXIT_VALIDATION


COMMANDS = {
    "spectrum": cmd_spectrum,
    "population": cmd_population,
    "greens": cmd_greens,
    "troughs": cmd_troughs,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="eit2des", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="key = value parameter file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--kind", choices=("rp", "nr", "abs"))
    parser.add_argument("--control", choices=("on", "off"))
    parser.add_argument("--t2", action="append", type=float, help="population time in ps (repeatable)")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.out is not None:
        overrides["output"] = args.out
    if args.kind is not None:
        overrides["kind"] = args.kind
    if args.control is not None:
        overrides["control"] = args.control
    if args.t2:
        overrides["t2"] = ", ".join(repr(t) for t in args.t2)
    try:
        text = ""
        if args.config:
            with open(args.config) as fh:
                text = fh.read()
        config = parse_config(text, overrides)
        return COMMANDS[args.command](config, out)
    except (ConfigError, NoSplittingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FitError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
