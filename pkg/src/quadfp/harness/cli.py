"""``quadfp`` command line.

Exit codes: 0 ok, 1 a required check failed, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import ConfigInvalid, NumericalError, UnknownParameter
from .config import load_raw, parse_values, validate_config
from .output import write_csv
from .scenarios import Run, sweep_table

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadfp", description="Gaussian phase-space scenarios for quadratic open systems")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path)
    common.add_argument("--out-dir", type=Path, default=None, help="override output.dir")
    common.add_argument("--tol", type=float, default=None, help="admissibility tolerance")
    common.add_argument("--hbar", type=float, default=None)
    common.add_argument("--quiet", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run a scenario and write CSV + JSON report")
    sw = sub.add_parser("sweep", parents=[common], help="scan one numeric config leaf")
    sw.add_argument("--param", default=None, help="dotted config path, e.g. model.magnetic.beta")
    sw.add_argument("--values", default=None, help="a,b,c or range:start:stop:n")
    sw.add_argument("--outputs", default=None, help="comma-separated scalar names")
    sw.add_argument("--workers", type=int, default=1)
    sub.add_parser("check", parents=[common], help="evaluate declared checks, write only the report")
    return p


def _overrides(data: dict, args) -> dict:
    if not isinstance(data, dict):
        return data
    if args.tol is not None:
        data.setdefault("tolerances", {})
        if isinstance(data["tolerances"], dict):
            data["tolerances"]["admissibility"] = args.tol
    if args.hbar is not None:
        data["hbar"] = args.hbar
    return data


def _say(args, msg: str):
    if not args.quiet:
        print(msg)


def _run(args) -> int:
    data = _overrides(load_raw(args.config), args)
    if args.command == "sweep":
        return _sweep(args, data)
    cfg = validate_config(data)
    write = args.command == "run"
    run = Run(cfg, args.out_dir, write=write)
    report = run.execute()
    if not write:
        run.table = None
        run.sweep_rows = None
        run.flush()
    for v in report.verdicts:
        tag = "PASS" if v.passed else "FAIL"
        _say(args, f"{tag} {v.name} value={v.value} threshold={v.threshold}{'' if v.required else ' (optional)'}")
    for w in report.warnings:
        _say(args, f"warning: {w}")
    failed = report.failed_required
    return EXIT_CHECK if failed else EXIT_OK


def _sweep(args, data: dict) -> int:
    sw = data.get("sweep") or {}
    param = args.param or sw.get("param")
    values = args.values if args.values is not None else sw.get("values")
    outputs = args.outputs.split(",") if args.outputs else sw.get("outputs")
    if not param or values is None or not outputs:
        raise ConfigInvalid("sweep needs --param, --values and outputs", "sweep")
    data = dict(data)
    data.pop("sweep", None)
    kind = (data.get("scenario") or {}).get("kind")
    # a non-sweep config is itself the per-point scenario
    base_kind = sw.get("base_kind") or (kind if kind != "sweep" else None)
    if kind == "sweep":
        data["scenario"] = dict(data["scenario"], kind=base_kind or "check")
    cfg = validate_config(data)
    raw = cfg.model_dump(mode="python")
    table = sweep_table(raw, param, parse_values(values), [o.strip() for o in outputs], base_kind, args.workers)
    out_dir = args.out_dir if args.out_dir is not None else Path(cfg.output.dir)
    path = out_dir / f"{cfg.scenario.id}.csv"
    write_csv(path, [param] + list(outputs), table)
    _say(args, f"wrote {path} ({len(table)} rows)")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except (ConfigInvalid, UnknownParameter) as exc:
        path = getattr(exc, "path", "")
        print(f"config error{' at ' + path if path else ''}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error in {args.config}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
