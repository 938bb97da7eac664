#!/usr/bin/env python3
"""Run the full claim audit and print one PASS/FAIL line per claim.

Equivalent to ``cstarseq audit-paper``; kept as a standalone script so the
audit can be run straight from a checkout.

Usage:
    python3 scripts/run_paper_audit.py [--window N] [--out report.json]
"""

import argparse
import sys

from cstarseq.reporting import audit_json, audit_lines, audit_paper


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--window", type=int, default=None)
    parser.add_argument("--out", default=None,
                        help="also write the deterministic JSON report here")
    args = parser.parse_args()
    report = audit_paper(window=args.window)
    print(audit_lines(report))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(audit_json(report) + "\n")
        print(f"report written to {args.out}")
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
