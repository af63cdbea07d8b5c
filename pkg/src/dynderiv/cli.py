"""Command-line interface.

Subcommands:
  simulate  run the configured plant over one oscillation case, emit a series
  identify  fit a saved or external series, emit a derivative table
  sweep     run the full scenario matrix, emit report.csv / report.txt
  validate  run the built-in oracle suite

Exit codes: 0 success, 1 domain failure (bad data, failed checks),
2 usage error (bad arguments, unreadable files).  All file output is
written atomically and deterministically.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .config import parse_case_config
from .errors import DynDerivError
from .identify import extract_alpha_mode, extract_q_mode, fit_series
from .io import (
    atomic_write,
    parse_monitor_table,
    write_derivative_table,
    write_loop_table,
    write_report,
    write_series,
)
from .kinematics import OscillationMode, OscillationSpec, make_schedule
from .plants import simulate as run_plant
from .scenarios import run_sweep
from .validate import run_validation

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynderiv",
        description="Forced-oscillation identification of longitudinal dynamic derivatives.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a plant over one oscillation case")
    p_sim.add_argument("config", help="case-config JSON file")
    p_sim.add_argument("--out", help="output series file (default: stdout)")
    p_sim.add_argument(
        "--mode", choices=["alpha", "q"],
        help="oscillation mode (default: first mode in the config)",
    )

    p_id = sub.add_parser("identify", help="fit a coefficient series, emit derivatives")
    p_id.add_argument("series", help="series/monitor file to fit")
    p_id.add_argument("--k", type=float, required=True, help="reduced frequency omega*c/(2V)")
    p_id.add_argument("--mode", choices=["alpha", "q"], required=True)
    p_id.add_argument("--amplitude-deg", type=float, required=True, help="pitch amplitude, deg")
    p_id.add_argument("--mean-deg", type=float, default=0.0, help="mean incidence, deg")
    p_id.add_argument("--skip", type=int, default=0, help="start-up cycles to skip")
    p_id.add_argument(
        "--omega", type=float, default=None,
        help="angular frequency of the time column, rad/s "
             "(default: time is in oscillation periods, omega = 2*pi)",
    )
    p_id.add_argument("--chord", type=float, default=None, help="reference chord, m")
    p_id.add_argument("--speed", type=float, default=None,
                      help="freestream speed, m/s (with --chord: omega = 2*k*V/c)")
    p_id.add_argument(
        "--alias", action="append", default=[], metavar="HEADER=CHANNEL",
        help="extra monitor header alias, e.g. lift=CL (repeatable)",
    )
    p_id.add_argument("--out", help="output table file (default: stdout)")

    p_sweep = sub.add_parser("sweep", help="run the scenario matrix from a config")
    p_sweep.add_argument("config", help="case-config JSON file")
    p_sweep.add_argument("--out-dir", default=".", help="output directory (default: .)")

    sub.add_parser("validate", help="run the built-in oracle suite")
    return parser


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read '{path}': {exc.strerror or exc}") from exc


class _UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _cmd_simulate(args: argparse.Namespace) -> int:
    plan = parse_case_config(_read_text(args.config))
    if args.mode is not None:
        mode = OscillationMode(args.mode)
        if mode not in plan.modes:
            raise _UsageError(f"mode '{args.mode}' is not listed in the config's modes")
    else:
        mode = plan.modes[0]
    spec = plan.oscillation.with_mode(mode)
    schedule = make_schedule(spec, plan.condition)
    series = run_plant(plan.plant, schedule, plan.condition)
    _emit(write_series(series), args.out)
    return 0


def _identify_omega(args: argparse.Namespace) -> float:
    if args.omega is not None:
        if args.omega <= 0:
            raise _UsageError("--omega must be > 0")
        return args.omega
    if args.chord is not None or args.speed is not None:
        if args.chord is None or args.speed is None:
            raise _UsageError("--chord and --speed must be given together")
        if args.chord <= 0 or args.speed <= 0:
            raise _UsageError("--chord and --speed must be > 0")
        return 2.0 * args.k * args.speed / args.chord
    # default convention: the time column counts oscillation periods
    return 2.0 * math.pi


def _cmd_identify(args: argparse.Namespace) -> int:
    aliases = {}
    for item in args.alias:
        if "=" not in item:
            raise _UsageError(f"--alias needs HEADER=CHANNEL, got '{item}'")
        header, _, channel = item.partition("=")
        aliases[header.strip().lower()] = channel.strip()
    if args.k <= 0:
        raise _UsageError("--k must be > 0")
    if args.amplitude_deg <= 0:
        raise _UsageError("--amplitude-deg must be > 0")
    omega = _identify_omega(args)
    series = parse_monitor_table(_read_text(args.series), source=args.series,
                                 extra_aliases=aliases or None)
    spec = OscillationSpec.from_degrees(
        mode=OscillationMode(args.mode),
        mean_incidence_deg=args.mean_deg,
        amplitude_deg=args.amplitude_deg,
        reduced_frequency=args.k,
    )
    fits = fit_series(series, omega, args.skip)
    extract = extract_alpha_mode if spec.mode is OscillationMode.ALPHA else extract_q_mode
    dset = extract(fits, spec)
    _emit(write_derivative_table(dset), args.out)
    return 0


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in name)


def _cmd_sweep(args: argparse.Namespace) -> int:
    plan = parse_case_config(_read_text(args.config))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = run_sweep(plan)
    machine, human = write_report(report)
    atomic_write(out_dir / "report.csv", machine)
    atomic_write(out_dir / "report.txt", human)
    # loop plot data per successful scenario, plus a run-metadata sidecar;
    # the data files themselves carry no run metadata (byte determinism)
    for result in report.results:
        if result.incidence_series is not None and result.incidence_history is not None:
            text = write_loop_table(result.incidence_history, result.incidence_series)
            atomic_write(out_dir / f"loops_{_safe_name(result.scenario.name)}.csv", text)
    meta = {
        "tool": "dynderiv",
        "version": __version__,
        "assumptions": {
            "altitude_unit": "m (assumed)",
            "speed_basis": plan.speed_basis,
            "angles": "degrees at this boundary, radians internally",
        },
        "scenarios": [
            {
                "name": r.scenario.name,
                "altitude_m": r.scenario.altitude,
                "vertical_velocity_m_s": r.scenario.vertical_velocity,
                "forward_velocity_m_s": r.scenario.forward_velocity,
                "status": r.status.value,
            }
            for r in report.results
        ],
    }
    atomic_write(out_dir / "run_meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    sys.stdout.write(human)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "identify":
            return _cmd_identify(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return run_validation(sys.stdout)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except DynDerivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
