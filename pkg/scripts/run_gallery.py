#!/usr/bin/env python3
"""Run the example gallery and print a sign-off table.

Each experiment re-derives its published numbers from scratch and checks them
against the closed forms.  With ``--outdir`` the full reports (including the
data blobs) are written as JSON, one file per experiment.

    python3 scripts/run_gallery.py
    python3 scripts/run_gallery.py --fast rotation-7 doubling
    python3 scripts/run_gallery.py --outdir reports/
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from freelip import DomainError, experiment_to_json, gallery_experiments


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="experiments to run (default: all)")
    ap.add_argument("--fast", action="store_true", help="reduced horizons")
    ap.add_argument("--outdir", type=Path, help="write one JSON report per experiment")
    args = ap.parse_args(argv)

    try:
        results = gallery_experiments(fast=args.fast, names=args.names or None)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.outdir:
        args.outdir.mkdir(parents=True, exist_ok=True)

    width = max(len(name) for name, _ in results)
    failed = 0
    for name, report in results:
        status = "PASS" if report.ok else "FAIL"
        print(f"{status}  {name:<{width}}  {len(report.checks)} checks")
        for check in report.failures():
            failed += 1
            print(f"      failed: {check.name}  {check.detail}")
        if args.outdir:
            path = args.outdir / f"{name}.json"
            path.write_text(json.dumps(experiment_to_json(report), indent=2, sort_keys=True) + "\n")

    print(f"{len(results)} experiments, {failed} failed checks")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
