"""Command-line front end: estimate, sweep, verify, regimes.

Output is machine-readable (JSON or the fixed-column CSV) with floats
serialized at full round-trip precision. Exit codes: 0 success, 1 input
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import shlex
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import __version__
from .core import ParameterError, get_preset
from .crosscheck import run_crosscheck
from .fock import TruncationError
from .sweep import (
    CSV_COLUMNS,
    GridSpec,
    ParameterSet,
    RegimeReport,
    SweepRow,
    regime_report,
    run_sweep,
)

PROG = "kerrmich"


class CliError(Exception):
    """Bad command line; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliError(message)


def parse_n2(text: str) -> float:
    """Kerr coefficient with an optional unit suffix.

    A bare number is read in cm^2/W, the unit the nonlinear-optics
    literature quotes; append m2 (or m2/w) for SI, cm2 to be explicit.
    Returns m^2/W.
    """
    t = text.strip().lower().replace("^", "")
    if t.endswith("/w"):
        t = t[: -len("/w")]
    if t.endswith("cm2"):
        scale, t = 1e-4, t[: -len("cm2")]
    elif t.endswith("m2"):
        scale, t = 1.0, t[: -len("m2")]
    else:
        scale = 1e-4
    try:
        value = float(t)
    except ValueError:
        raise CliError(f"cannot parse Kerr coefficient {text!r}") from None
    return value * scale


def parse_grid(text: str) -> GridSpec:
    """Grid flag of the form name=lo:hi:points[:spacing]."""
    try:
        name, rest = text.split("=", 1)
        parts = rest.split(":")
        if len(parts) not in (3, 4):
            raise ValueError
        lo, hi = float(parts[0]), float(parts[1])
        points = int(parts[2])
        spacing = parts[3] if len(parts) == 4 else "linear"
    except ValueError:
        raise CliError(
            f"malformed grid {text!r}; expected name=lo:hi:points[:linear|log]"
        ) from None
    if name == "n2":
        lo, hi = parse_n2(parts[0]), parse_n2(parts[1])
    return GridSpec(parameter=name, lo=lo, hi=hi, points=points, spacing=spacing)


def _add_physical_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--regime", help="start from a built-in preset (natural, giant-eit)")
    p.add_argument("--wavelength", type=float, help="vacuum wavelength (m)")
    p.add_argument("--tau", type=float, help="pulse duration (s)")
    p.add_argument("--area", type=float, help="beam cross section (m^2)")
    p.add_argument("--power", type=float, help="pulse power (W)")
    p.add_argument(
        "--n2",
        type=str,
        help="Kerr coefficient; bare numbers are cm^2/W, suffix m2 or cm2 to choose",
    )
    p.add_argument("--n0", type=float, help="linear refractive index (default 1)")
    p.add_argument("--eta", type=float, help="detector efficiency in (0,1] (default 1)")
    p.add_argument("--sigma", type=float, help="random-phase std deviation (default 0)")
    p.add_argument("--nt", type=float, help="mean thermal photon number (default 0)")
    p.add_argument(
        "--arm-length",
        type=float,
        help="arm length (m); default is the m=1 operating point, 1 m if n2=0",
    )
    p.add_argument("--signal", type=float, help="arm-length signal x (m, default 0)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", type=Path, help="write to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), help="output format")
    p.add_argument(
        "--threshold",
        type=float,
        default=1e-2,
        help="validity margin threshold (default 1e-2)",
    )
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog=PROG,
        description=(
            "Displacement sensitivity of a Kerr-nonlinear Michelson "
            "interferometer probed with classical pulses, with an exact "
            "Fock-space cross-check."
        ),
    )
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    est = sub.add_parser(
        "estimate", help="resolution and validity for one design, as JSON"
    )
    _add_physical_flags(est)
    _add_common_flags(est)

    sw = sub.add_parser("sweep", help="grid sweep over up to 3 parameters, as CSV")
    _add_physical_flags(sw)
    _add_common_flags(sw)
    sw.add_argument(
        "--grid",
        action="append",
        default=[],
        metavar="NAME=LO:HI:POINTS[:SPACING]",
        help="sweep axis (repeatable, up to 3), e.g. tau=1e-13:1e-10:50:log",
    )
    sw.add_argument(
        "--max-rows", type=int, default=1_000_000, help="row cap (default 1e6)"
    )

    ver = sub.add_parser(
        "verify", help="run the brute-force cross-check suite against the oracle"
    )
    ver.add_argument(
        "--max-photons",
        type=int,
        default=25,
        help="largest photon number simulated (default 25, cap 30)",
    )
    ver.add_argument(
        "--dim-margin",
        type=int,
        default=0,
        help="extra Fock dimensions on top of the default truncation rule",
    )
    ver.add_argument(
        "--tolerance",
        type=float,
        default=1e-9,
        help="relative tolerance for deterministic checks (default 1e-9)",
    )
    ver.add_argument(
        "--cases", type=int, default=0, help="extra random mean cases (default 0)"
    )
    _add_common_flags(ver)

    reg = sub.add_parser("regimes", help="built-in presets and their reports, as JSON")
    _add_common_flags(reg)

    return parser


def _params_from_args(args: argparse.Namespace) -> ParameterSet:
    overrides: dict[str, float] = {}
    for flag, field in (
        ("wavelength", "wavelength"),
        ("tau", "tau"),
        ("area", "area"),
        ("power", "power"),
        ("n0", "n0"),
        ("eta", "eta"),
        ("sigma", "sigma"),
        ("nt", "nt"),
        ("arm_length", "arm_length"),
        ("signal", "signal_x"),
    ):
        value = getattr(args, flag)
        if value is not None:
            overrides[field] = value
    if args.n2 is not None:
        overrides["n2"] = parse_n2(args.n2)

    if args.regime:
        base = ParameterSet.from_preset(args.regime)
        return dataclasses.replace(base, **overrides)

    missing = [
        f"--{name}"
        for name in ("wavelength", "tau", "area", "power", "n2")
        if getattr(args, name) is None
    ]
    if missing:
        raise CliError(
            f"missing {', '.join(missing)} (or use --regime natural|giant-eit)"
        )
    return ParameterSet(
        wavelength=overrides.pop("wavelength"),
        tau=overrides.pop("tau"),
        area=overrides.pop("area"),
        power=overrides.pop("power"),
        n2=overrides.pop("n2"),
        **overrides,
    )


def _manifest(argv: Sequence[str], params: dict, seed: int | None) -> dict:
    return {
        "tool": PROG,
        "version": __version__,
        "command": shlex.join([PROG, *argv]),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "parameters": params,
    }


def _emit_text(text: str, output: Path | None, manifest: dict | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.write_text(text)
    if manifest is not None:
        sidecar = output.with_name(output.name + ".manifest.json")
        sidecar.write_text(json.dumps(manifest, indent=2) + "\n")


def _emit_json(obj: dict, output: Path | None, manifest: dict | None) -> None:
    if output is None:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
        return
    embedded = dict(obj)
    if manifest is not None:
        embedded["manifest"] = manifest
    output.write_text(json.dumps(embedded, indent=2) + "\n")


def _estimate_payload(row: SweepRow, validity: dict) -> dict:
    return {
        "n_photons": row.n_photons,
        "chi": row.chi,
        "k": row.k_per_m,
        "delta_x_m": row.delta_x_m,
        "delta_x_linear_m": row.delta_x_linear_m,
        "improvement": row.improvement,
        "validity": validity,
    }


def _row_validity(row: SweepRow) -> dict:
    return {
        "margin_small_signal": row.margin_small_signal,
        "margin_thermal": row.margin_thermal,
        "margin_dephasing": row.margin_dephasing,
        "margin_operating_point": row.margin_operating_point,
        "margin_nl_dominant": row.margin_nl_dominant,
        "small_signal": row.small_signal,
        "weak_thermal": row.weak_thermal,
        "weak_dephasing": row.weak_dephasing,
        "on_operating_point": row.on_operating_point,
        "nonlinearity_dominant": row.nonlinearity_dominant,
    }


def _rows_csv(rows: Sequence[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(row.csv_values()) for row in rows]
    return "\n".join(lines) + "\n"


def _params_dict(params: ParameterSet) -> dict:
    return dataclasses.asdict(params)


def cmd_estimate(args: argparse.Namespace, argv: Sequence[str]) -> int:
    params = _params_from_args(args)
    row = run_sweep(params, (), threshold=args.threshold)[0]
    manifest = _manifest(argv, _params_dict(params), args.seed)
    if args.format == "csv":
        _emit_text(_rows_csv([row]), args.output, manifest)
    else:
        _emit_json(_estimate_payload(row, _row_validity(row)), args.output, manifest)
    return 0


def cmd_sweep(args: argparse.Namespace, argv: Sequence[str]) -> int:
    params = _params_from_args(args)
    grids = [parse_grid(g) for g in args.grid]
    rows = run_sweep(params, grids, threshold=args.threshold, max_rows=args.max_rows)
    manifest = _manifest(argv, _params_dict(params), args.seed)
    manifest["grids"] = [dataclasses.asdict(g) for g in grids]
    if args.format == "json":
        payload = {"columns": list(CSV_COLUMNS), "rows": [r.as_dict() for r in rows]}
        _emit_json(payload, args.output, manifest)
    else:
        _emit_text(_rows_csv(rows), args.output, manifest)
    return 0


def cmd_verify(args: argparse.Namespace, argv: Sequence[str]) -> int:
    if args.max_photons > 30:
        raise CliError(
            f"--max-photons {args.max_photons} exceeds the desk-scale cap of 30"
        )
    if args.max_photons < 0:
        raise CliError("--max-photons must be >= 0")
    if args.tolerance < 0:
        raise CliError("--tolerance must be >= 0")
    report = run_crosscheck(
        max_photons=args.max_photons,
        tolerance=args.tolerance,
        seed=args.seed,
        extra_cases=args.cases,
        dim_margin=args.dim_margin,
    )
    manifest = _manifest(
        argv,
        {
            "max_photons": args.max_photons,
            "tolerance": args.tolerance,
            "cases": args.cases,
            "dim_margin": args.dim_margin,
        },
        args.seed,
    )
    _emit_text("\n".join(report.lines()) + "\n", args.output, manifest)
    return 0 if report.ok else 2


def _report_payload(report: RegimeReport) -> dict:
    preset = get_preset(report.name)
    return {
        "name": report.name,
        "inputs": {
            "wavelength_m": preset.pulse.wavelength,
            "tau_s": preset.pulse.duration,
            "area_m2": preset.pulse.cross_section,
            "power_w": preset.pulse.power,
            "n2_m2_per_w": preset.medium.kerr_coefficient,
            "n0": preset.medium.linear_index,
            "eta": preset.noise.efficiency,
            "sigma": preset.noise.phase_sigma,
            "nt": preset.noise.thermal_photons,
        },
        "derived": {
            "n_photons": report.row.n_photons,
            "chi": report.row.chi,
            "k": report.row.k_per_m,
        },
        "report": {
            "arm_length_m": report.arm_length_m,
            "x_min_m": report.x_min_m,
            "x_max_m": report.x_max_m,
            "sigma_max": report.sigma_max,
            "nt_max": report.nt_max,
            "delta_x_m": report.row.delta_x_m,
            "delta_x_linear_m": report.row.delta_x_linear_m,
            "improvement": report.row.improvement,
            "notes": list(report.notes),
        },
    }


def cmd_regimes(args: argparse.Namespace, argv: Sequence[str]) -> int:
    payload = {
        "regimes": [
            _report_payload(regime_report(name, threshold=args.threshold))
            for name in ("natural", "giant-eit")
        ]
    }
    manifest = _manifest(argv, {}, args.seed)
    _emit_json(payload, args.output, manifest)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliError("a command is required: estimate, sweep, verify, regimes")
        handler = {
            "estimate": cmd_estimate,
            "sweep": cmd_sweep,
            "verify": cmd_verify,
            "regimes": cmd_regimes,
        }[args.command]
        return handler(args, list(argv))
    except (CliError, ParameterError, TruncationError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
