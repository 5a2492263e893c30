"""Command-line pipeline: synthesize, simulate, evaluate.

Exit codes: 0 success, 1 configuration or usage error, 2 computation
error.  Output files embed the first 8 hex digits of the config hash so
results never silently mix across configurations.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from ._kernels import set_threads
from .config import load_config
from .errors import (
    BeamTooWideError,
    CalibrationRangeError,
    ConfigError,
    GeometryError,
    NoRealSolutionError,
)
from .io import (
    export_metrics_report,
    export_pattern_csv,
    export_profile_csv,
    export_sweep_json,
)
from .metrics import (
    calibrate_specular,
    compute_pattern_metrics,
    frequency_sweep,
    normalize_pattern,
    total_radiated_power,
)
from .pipeline import build_setup
from .scattering import DIRECTIVITY

_COMPUTE_ERRORS = (
    GeometryError,
    BeamTooWideError,
    NoRealSolutionError,
    CalibrationRangeError,
    ValueError,
    TypeError,
    ArithmeticError,
)


class _Parser(argparse.ArgumentParser):
    """argparse flavor whose usage errors exit 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="reflectsim", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="configuration file path")
    common.add_argument(
        "--out",
        default=None,
        help="output directory (default: $REFLECTSIM_OUT or ./out)",
    )
    common.add_argument("--threads", type=int, default=None, help="compute thread count")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("synth", parents=[common], help="write the element phase profile CSV")
    sub.add_parser("pattern", parents=[common], help="write principal-cut pattern CSVs")
    sub.add_parser("sweep", parents=[common], help="write the frequency sweep report")
    sub.add_parser("metrics", parents=[common], help="write the full metrics report")
    cal = sub.add_parser("calibrate", parents=[common], help="fit the specular weight rho")
    group = cal.add_mutually_exclusive_group(required=True)
    group.add_argument("--target-sir-db", type=float, default=None)
    group.add_argument("--target-specular-gain-db", type=float, default=None)
    return parser


def _out_dir(args):
    out = args.out or os.environ.get("REFLECTSIM_OUT") or "./out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_synth(args, config, out):
    setup = build_setup(config)
    path = out / f"profile_{config.hash8}.csv"
    export_profile_csv(setup.profile, setup.grid, path)
    print(path)
    return 0


def _cmd_pattern(args, config, out):
    setup = build_setup(config)
    raster_pattern = setup.pattern()
    power = total_radiated_power(raster_pattern)
    paths = []
    for phi_deg in (0.0, 90.0):
        cut = setup.pattern(angles=setup.cut(phi_deg=phi_deg))
        cut = normalize_pattern(cut, DIRECTIVITY, total_power=power)
        path = out / f"pattern_phi{int(phi_deg)}_{config.hash8}.csv"
        export_pattern_csv(cut, path)
        paths.append(path)
    for path in paths:
        print(path)
    return 0


def _cmd_sweep(args, config, out):
    report = frequency_sweep(config, config.frequencies)
    path = out / f"sweep_{config.hash8}.json"
    export_sweep_json(report, path, config_sha256=config.sha256)
    offset_base = None
    for row in report.rows:
        peak = "failed" if row.peak_deg is None else f"{row.peak_deg:+8.3f} deg"
        gain = "" if row.gain_db is None else f"  gain {row.gain_db:6.2f} dB"
        err = f"  [{row.error}]" if row.error else ""
        print(f"{row.frequency_ghz:9.3f} GHz  peak {peak}{gain}{err}")
        if abs(row.frequency_ghz - report.design_frequency_ghz) < 1e-9:
            offset_base = row.peak_deg
    if offset_base is not None:
        print(f"design-frequency peak: {offset_base:+.3f} deg")
    print(path)
    return 0


def _cmd_metrics(args, config, out):
    metrics = compute_pattern_metrics(config)
    report = frequency_sweep(config, config.frequencies)
    path = out / f"metrics_{config.hash8}.json"
    rho = config.rho if config.rho is not None else 0.0
    export_metrics_report(
        metrics, report, path, config_sha256=config.sha256, rho=rho
    )
    print(f"peak            {math.degrees(metrics.peak_direction.theta):+.3f} deg")
    print(f"directivity     {metrics.peak_directivity_db:.2f} dB")
    print(f"realized gain   {metrics.realized_gain_db:.2f} dB")
    print(f"hpbw            {metrics.hpbw_deg:.2f} deg")
    sir_text = "unbounded" if math.isinf(metrics.sir_db) else f"{metrics.sir_db:.2f} dB"
    print(f"sir             {sir_text}")
    print(f"eta             {metrics.aperture_efficiency:.4f}")
    print(path)
    return 0


def _cmd_calibrate(args, config, out):
    if args.target_sir_db is not None:
        target = {"sir_db": args.target_sir_db}
    else:
        target = {"specular_gain_db": args.target_specular_gain_db}
    rho = calibrate_specular(config, target)
    print(f"rho = {rho:.6f}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "pattern": _cmd_pattern,
    "sweep": _cmd_sweep,
    "metrics": _cmd_metrics,
    "calibrate": _cmd_calibrate,
}


def run_cli(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"cannot read config: {exc}\n")
        return 1

    if args.threads is not None:
        if args.threads < 1:
            sys.stderr.write("--threads must be >= 1\n")
            return 1
        set_threads(args.threads)

    try:
        out = _out_dir(args)
        return _COMMANDS[args.command](args, config, out)
    except _COMPUTE_ERRORS as exc:
        sys.stderr.write(f"computation error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 2


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
