"""Command-line interface.

Subcommands:

* ``run <config>`` — execute an experiment from a JSON config file.
* ``analyze <dir>`` — summarize a finished run directory into CSV + SVG.
* ``reference --n-max N`` — classical FCI/CISD/HF reference curves.
* ``calibration generate --seed S`` — emit a synthetic calibration file.
* ``calibration rank <file>`` — rank a calibration's qubits by quality.

Exit code 0 on success; any failure prints one categorized
``error: <category>: <message>`` line on stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .experiment import (
    ConfigError,
    DEFAULT_BOND_LENGTH,
    ExperimentConfig,
    analyze,
    reference_table,
    run_experiment,
)
from .sampling import qubit_score, rank_qubits, synthetic_calibration
from .simulator import DeviceModel


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sizecon",
        description="Size-consistency benchmark for noisy quantum simulation of H2 replicas.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a JSON config")
    run_p.add_argument("config", help="path to the experiment config file")

    analyze_p = sub.add_parser("analyze", help="summarize a finished run directory")
    analyze_p.add_argument("directory", help="run directory written by `run`")

    ref_p = sub.add_parser("reference", help="classical FCI/CISD/HF reference curves")
    ref_p.add_argument("--n-max", type=int, required=True, help="largest subsystem count")
    ref_p.add_argument(
        "--bond-length", type=float, default=DEFAULT_BOND_LENGTH,
        help=f"H-H distance in angstrom (default {DEFAULT_BOND_LENGTH})",
    )
    ref_p.add_argument("--output", default="-", help="output CSV path, or - for stdout")

    cal_p = sub.add_parser("calibration", help="device calibration utilities")
    cal_sub = cal_p.add_subparsers(dest="calibration_command", required=True)
    gen_p = cal_sub.add_parser("generate", help="emit a synthetic calibration file")
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--n-qubits", type=int, default=156)
    gen_p.add_argument("--output", default="-", help="output path, or - for stdout")
    rank_p = cal_sub.add_parser("rank", help="rank qubits of a calibration file")
    rank_p.add_argument("file", help="calibration JSON file")
    return parser


def _emit(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _rows_to_csv(rows: list[dict]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _cmd_run(args: argparse.Namespace) -> int:
    path = Path(args.config)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    config = ExperimentConfig.from_json(path.read_text())
    out = run_experiment(config)
    print(f"run complete: {out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    out = analyze(args.directory)
    print(f"analysis written to: {out}")
    return 0


def _cmd_reference(args: argparse.Namespace) -> int:
    rows = reference_table(args.bond_length, args.n_max)
    _emit(_rows_to_csv(rows), args.output)
    return 0


def _cmd_calibration(args: argparse.Namespace) -> int:
    if args.calibration_command == "generate":
        device = synthetic_calibration(n_qubits=args.n_qubits, seed=args.seed)
        _emit(device.to_json(), args.output)
        return 0
    path = Path(args.file)
    if not path.exists():
        raise FileNotFoundError(f"calibration file not found: {path}")
    device = DeviceModel.from_json(path.read_text())
    rows = [
        {"rank": i, "qubit": q, "score": repr(qubit_score(device, q))}
        for i, q in enumerate(rank_qubits(device))
    ]
    _emit(_rows_to_csv(rows), "-")
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "analyze": _cmd_analyze,
    "reference": _cmd_reference,
    "calibration": _cmd_calibration,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
    except FileNotFoundError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
    except (ValueError, RuntimeError) as exc:
        print(f"error: value: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
