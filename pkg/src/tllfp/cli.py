"""Command-line front end.

    tllfp run <config|recipe> [-o out.csv] [--workers N]
    tllfp compare <curve.csv> <config|recipe> [--window 10,50] [-o overlay.csv]
    tllfp collapse <curve.csv>... [--t-end 64] [-o analysis.csv]
    tllfp revival <curve.csv>
    tllfp slope <curve.csv>...

Exit codes: 0 ok, 2 configuration error, 3 numerical error, 4 I/O error.
Errors are reported on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import analysis, runner
from .config import load_config
from .curve import FpCurve
from .errors import ConfigError, NumericalError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _window(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 10,50, got {text!r}")
    return lo, hi


def _emit(text, out):
    if out:
        runner.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_run(args):
    config = load_config(args.config)
    res = runner.run(config, output=args.output, workers=args.workers)
    print(json.dumps({"output": str(res.csv_path), "checksums": res.manifest["checksums"],
                      "wall_clock_s": res.manifest["wall_clock_s"]}))


def cmd_compare(args):
    curve = FpCurve.load(args.curve)
    config = load_config(args.config)
    cmp = runner.compare(curve, config, args.window)
    f = cmp.fit
    print(json.dumps({"curve_id": f.curve_id, "alpha": f.alpha, "mse": f.mse, "window": list(f.window),
                      "at_zero": f.at_zero, "degenerate": f.degenerate,
                      "mse_by_k": {str(k): v for k, v in cmp.mse_by_k.items()}}), file=sys.stderr)
    _emit(runner.table_text(("T", "k", "R_num", "R_analytic"), cmp.overlay), args.output)


def cmd_collapse(args):
    rows = []
    for path in args.curves:
        rows += runner.collapse_rows(FpCurve.load(path), args.window, args.t_end)
    _emit(runner.table_text(runner.ANALYSIS_COLUMNS, rows), args.output)


def cmd_revival(args):
    curve = FpCurve.load(args.curve)
    rev = analysis.detect_revival(curve, args.threshold)
    print(json.dumps({"curve_id": curve.curve_id, "present": rev.present, "time": rev.time,
                      "peak_time": rev.peak_time, "level": rev.level, "degenerate": rev.degenerate}))


def cmd_slope(args):
    rows = []
    for path in args.curves:
        rows += runner.slope_rows(FpCurve.load(path))
    _emit(runner.table_text(("curve_id", "k", "plateaus", "slope", "residual"), rows), args.output)


def build_parser():
    p = argparse.ArgumentParser(prog="tllfp", description="Frame potential of the disordered XXZ chain / Luttinger liquid")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a config file or figure recipe")
    r.add_argument("config")
    r.add_argument("-o", "--output")
    r.add_argument("--workers", type=int)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="fit alpha and overlay the analytic curves")
    c.add_argument("curve")
    c.add_argument("config")
    c.add_argument("--window", type=_window, default=analysis.DEFAULT_WINDOW)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_compare)

    co = sub.add_parser("collapse", help="plateau collapse coordinates")
    co.add_argument("curves", nargs="+")
    co.add_argument("--window", type=_window, default=analysis.DEFAULT_WINDOW)
    co.add_argument("--t-end", type=float, default=None, help="truncate curves here before taking the plateau")
    co.add_argument("-o", "--output")
    co.set_defaults(func=cmd_collapse)

    rv = sub.add_parser("revival", help="detect the finite-size revival")
    rv.add_argument("curve")
    rv.add_argument("--threshold", type=float, default=analysis.REVIVAL_THRESHOLD)
    rv.set_defaults(func=cmd_revival)

    s = sub.add_parser("slope", help="multi-quench plateau slope against m")
    s.add_argument("curves", nargs="+")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_slope)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, ValueError, KeyError) as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, "numerical", exc, realization=exc.realization)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    return EXIT_OK


def _fail(code, kind, exc, **extra):
    print(json.dumps({"error": kind, "message": str(exc), **extra}), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
