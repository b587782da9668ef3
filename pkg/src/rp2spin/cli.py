"""Command line: ``rp2spin verify <suite>`` and ``rp2spin sweep <check>``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import checks
from .errors import Rp2SpinError

OUTPUT_DIR_ENV = "RP2SPIN_OUTPUT_DIR"


def _tol(text: str) -> tuple[str, float]:
    name, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {val!r}") from None


def _values(text: str) -> list[float]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        v = float(part)
        out.append(int(v) if v.is_integer() and "e" not in part.lower()
                   and "." not in part else v)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-n", type=int, default=10_000)
    common.add_argument("--path-steps", type=int, default=None)
    common.add_argument("--tol", type=_tol, action="append", default=[],
                        metavar="NAME=VAL")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, metavar="PATH")

    p = argparse.ArgumentParser(prog="rp2spin",
                                description="Run RP^2 bundle verification suites.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=checks.SUITES + ("all",))
    s = sub.add_parser("sweep", parents=[common], help="run a convergence sweep")
    s.add_argument("check", choices=sorted(checks.SWEEPS))
    s.add_argument("--param", required=True)
    s.add_argument("--values", type=_values, required=True)
    return p


def _destination(args, stem: str) -> Path | None:
    if args.out:
        return Path(args.out)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{stem}.{args.format}"
    return None


def _emit(text: str, dest: Path | None) -> None:
    if dest is None:
        sys.stdout.write(text)
        return
    try:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    except OSError as exc:
        raise Rp2SpinError(f"cannot write {dest}: {exc}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = checks.RunConfig(grid_n=args.grid_n, path_steps=args.path_steps,
                                  tol_overrides=dict(args.tol), seed=args.seed,
                                  output_format=args.format, output_path=args.out)
        if args.command == "verify":
            reports = checks.run_suite(args.suite, config)
            text = (checks.reports_to_json(args.suite, config, reports)
                    if args.format == "json" else checks.reports_to_csv(reports))
            _emit(text, _destination(args, f"verify-{args.suite}"))
            for r in reports:
                if not r.passed:
                    print(f"FAIL {r.check_name}: {r.max_residual:.3e} > {r.tolerance:.3e}",
                          file=sys.stderr)
            return 0 if all(r.passed for r in reports) else 1
        result = checks.convergence_sweep(args.check, args.param, args.values, config)
        text = result.to_json() if args.format == "json" else result.to_csv()
        _emit(text, _destination(args, f"sweep-{args.check}"))
        return 0
    except Rp2SpinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
