"""Command-line entry point: list, run, and run-all over scenario files.

Exit codes: 0 success, 1 scenario validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .plots import emit_plots
from .scenario import ScenarioError, parse_scenario, run_scenario


def bundled_names() -> list:
    root = resources.files("fctdrem").joinpath("scenarios")
    return sorted(p.name[: -len(".toml")] for p in root.iterdir() if p.name.endswith(".toml"))


def bundled_path(name: str) -> Path:
    p = resources.files("fctdrem").joinpath("scenarios").joinpath(f"{name}.toml")
    if not p.is_file():
        raise ScenarioError(f"no bundled scenario named '{name}'; try the 'list' command")
    return Path(str(p))


def _resolve(spec: str) -> Path:
    p = Path(spec)
    if p.is_file():
        return p
    if "/" not in spec and not spec.endswith(".toml"):
        return bundled_path(spec)
    raise ScenarioError(f"scenario file not found: {spec}")


def _run_one(path: Path, out_dir: str, step, horizon) -> None:
    scn = parse_scenario(path, step=step, horizon=horizon)
    table, reports = run_scenario(scn, out_dir)
    emit_plots(table, out_dir, scn.name, scn.mode)
    hits = ", ".join(
        f"{r.estimator}: {'none' if r.hit_time is None else format(r.hit_time, '.6g')}"
        for r in reports
    )
    print(f"{scn.name}: {len(table.rows)} rows -> {out_dir}  (hit {hits})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fctdrem",
        description="Finite-convergence-time DREM estimator simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print bundled scenario names")

    for cmd, help_ in (
        ("run", "run one scenario (a TOML path or a bundled name)"),
        ("run-all", "run every bundled scenario"),
    ):
        p = sub.add_parser(cmd, help=help_)
        if cmd == "run":
            p.add_argument("--scenario", required=True, help="TOML path or bundled name")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--step", type=float, default=None, help="override the time step")
        p.add_argument("--horizon", type=float, default=None, help="override the horizon")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for name in bundled_names():
                print(name)
        elif args.command == "run":
            _run_one(_resolve(args.scenario), args.out, args.step, args.horizon)
        else:  # run-all
            for name in bundled_names():
                _run_one(bundled_path(name), args.out, args.step, args.horizon)
        return 0
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
