"""Command-line interface: run verdict grids, audit the theory, list names."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import ConfigError, CstarSeqError
from .reporting import (
    RunConfig,
    audit_json,
    audit_lines,
    audit_paper,
    list_scenarios,
    run,
    stable_dumps,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstarseq",
        description="Certificate-backed ideal-convergence verdicts in "
                    "C*-algebra valued metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a scenario/metric/ideal grid")
    p_run.add_argument("--config", default=None,
                       help="JSON file with RunConfig fields; flags override")
    p_run.add_argument("--scenario", default=None)
    p_run.add_argument("--metric", default=None)
    p_run.add_argument("--ideal", default=None)
    p_run.add_argument("--eps", type=float, action="append", default=None,
                       help="epsilon level (repeatable; default 0.1 and 0.01)")
    p_run.add_argument("--window", type=int, default=None)
    p_run.add_argument("--limit", type=float, default=None)
    p_run.add_argument("--strict", action="store_true",
                       help="exit 3 when any verdict is Unknown")
    p_run.add_argument("--out", default=None, help="write the JSON report here")
    p_run.add_argument("--table", action="store_true",
                       help="print a human-readable table instead of JSON")

    p_audit = sub.add_parser("audit-paper",
                             help="re-derive the audited claims")
    p_audit.add_argument("--window", type=int, default=None)
    p_audit.add_argument("--out", default=None)
    p_audit.add_argument("--json", action="store_true",
                         help="print the JSON report instead of PASS/FAIL lines")

    sub.add_parser("list-scenarios", help="list scenario/metric/ideal names")
    return parser


_CONFIG_KEYS = {"scenario", "metric", "ideal", "eps_list", "window",
                "limit", "strict", "questions"}


def _load_config_file(path: str) -> dict:
    import json

    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "eps_list" in raw:
        raw["eps_list"] = tuple(raw["eps_list"])
    if "questions" in raw:
        raw["questions"] = tuple(raw["questions"])
    return raw


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            fields = {
                "scenario": "harmonic",
                "metric": "diag",
                "ideal": "fin",
                "eps_list": (0.1, 0.01),
                "window": None,
                "limit": None,
                "strict": False,
            }
            if args.config:
                fields.update(_load_config_file(args.config))
            if args.scenario is not None:
                fields["scenario"] = args.scenario
            if args.metric is not None:
                fields["metric"] = args.metric
            if args.ideal is not None:
                fields["ideal"] = args.ideal
            if args.eps:
                fields["eps_list"] = tuple(args.eps)
            if args.window is not None:
                fields["window"] = args.window
            if args.limit is not None:
                fields["limit"] = args.limit
            if args.strict:
                fields["strict"] = True
            config = RunConfig(**fields)
            report = run(config)
            payload = stable_dumps(report.to_json())
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(payload + "\n")
            if args.table:
                print(report.table())
            else:
                print(payload)
            return report.exit_code

        if args.command == "audit-paper":
            report = audit_paper(window=args.window)
            payload = audit_json(report)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(payload + "\n")
            if args.json:
                print(payload)
            else:
                print(audit_lines(report))
            return 0 if report["all_pass"] else 1

        if args.command == "list-scenarios":
            print(stable_dumps(list_scenarios()))
            return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except CstarSeqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
