"""Command-line front end.

Verbs: norm, orbit, classify, rigidity, interval-analyze, gallery, selftest.
Every verb is a thin adapter over the library: it loads JSON inputs, calls
one operation, writes a JSON report (plus a CSV profile where that makes
sense) and prints a one-line summary.  Reports carry no timestamps, so a
fixed input always produces the same bytes.

Exit codes: 0 success, 1 a check or certificate failed, 2 bad input.
The output directory is the --outdir flag if given, else $FREELIP_OUTDIR,
else the working directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .dynamics import (
    ClassificationParams,
    classification_to_json,
    classify_orbit,
    interval_analysis_to_json,
    interval_analyze,
    orbit_norm_profile,
    rigidity_check,
    rigidity_to_json,
)
from .gallery import GALLERY, experiment_to_json, gallery_experiments
from .maps import PiecewiseLinearMap, map_from_json
from .norms import free_norm, norm_flow, norm_result_to_json
from .selftest import run_selftest
from .spaces import AlphaSpace, DomainError, FiniteSpace, space_from_json
from .vectors import coerce_point, vector_from_json

OUTDIR_ENV = "FREELIP_OUTDIR"


class InputError(Exception):
    """Malformed file, flag, or point — reported on stderr with exit code 2."""


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_profile_csv(path: Path, values) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "norm"])
        for k, v in enumerate(values):
            writer.writerow([k, repr(float(v))])


def _resolve_outdir(flag_value: str | None) -> Path:
    raw = flag_value or os.environ.get(OUTDIR_ENV) or "."
    out = Path(raw)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_vector(path: str):
    return vector_from_json(_read_json(path))


def _load_map(map_path: str, space_path: str | None):
    obj = _read_json(map_path)
    if isinstance(obj, dict) and "map" in obj and "space" in obj:
        space = space_from_json(obj["space"])
        return map_from_json(obj["map"], space)
    if space_path is None:
        raise InputError(f"{map_path} has no embedded space; pass --space as well")
    space = space_from_json(_read_json(space_path))
    return map_from_json(obj, space)


def _load_params(path: str | None) -> ClassificationParams:
    if path is None:
        return ClassificationParams()
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: classification params must be a JSON object")
    allowed = {"horizon", "eps_recurrent", "radii", "ladder_size", "tail_fraction"}
    unknown = set(obj) - allowed
    if unknown:
        raise InputError(f"{path}: unknown parameter(s) {sorted(unknown)}")
    if "radii" in obj and obj["radii"] is not None:
        obj["radii"] = tuple(obj["radii"])
    return ClassificationParams(**obj)


def _parse_point(space, text: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--point {text!r}: {exc.msg}") from exc
    if isinstance(raw, list):
        raw = tuple(raw)
    return coerce_point(space, raw)


# ---------------------------------------------------------------------------
# verbs


def _cmd_norm(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    mu = _load_vector(args.vector)
    if args.backend == "flow":
        result = norm_flow(mu, exact=args.exact)
        report = norm_result_to_json(result)
        value = result.value
    else:
        if args.exact:
            raise InputError("--exact only applies to the flow backend")
        value = free_norm(mu, backend=args.backend)
        report = {"value": value, "backend": args.backend, "exact": False}
    _write_json(outdir / "norm.json", report)
    print(f"norm {value!r} (backend {args.backend}) -> {outdir / 'norm.json'}")
    return 0


def _cmd_orbit(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    f = _load_map(args.map, args.space)
    mu = _load_vector(args.vector)
    profile = orbit_norm_profile(f, mu, args.steps, backend=args.backend)
    report = {
        "steps": args.steps,
        "backend": args.backend,
        "profile": [float(v) for v in profile],
    }
    _write_json(outdir / "orbit.json", report)
    _write_profile_csv(outdir / "orbit.csv", profile)
    print(f"orbit profile over {args.steps} steps, final {profile[-1]!r} -> {outdir / 'orbit.json'}")
    return 0


def _cmd_classify(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    f = _load_map(args.map, args.space)
    params = _load_params(args.params)
    x = _parse_point(f.space, args.point)
    report = classify_orbit(f, x, params, power=args.power)
    _write_json(outdir / "classify.json", classification_to_json(report))
    _write_profile_csv(outdir / "classify.csv", report.distances)
    print(f"verdict {report.verdict} (gap {report.gap!r} at {report.gap_time}) -> {outdir / 'classify.json'}")
    return 0


def _cmd_rigidity(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    f = _load_map(args.map, args.space)
    times = tuple(int(t) for t in args.times.split(","))
    if args.sample is not None:
        raw = json.loads(args.sample)
        sample = [coerce_point(f.space, tuple(p) if isinstance(p, list) else p) for p in raw]
    elif isinstance(f.space, FiniteSpace):
        sample = list(f.space.points())
    elif isinstance(f.space, AlphaSpace):
        sample = list(range(f.space.prefix_length + 1))
    else:
        raise InputError("this space needs an explicit --sample of points")
    tolerances = None
    if args.tolerances is not None:
        tolerances = tuple(float(t) for t in args.tolerances.split(","))
    cert = rigidity_check(f, sample, times, args.bound, tolerances)
    _write_json(outdir / "rigidity.json", rigidity_to_json(cert))
    status = "pass" if cert.passed else f"fail ({cert.reason})"
    print(f"rigidity {status} -> {outdir / 'rigidity.json'}")
    return 0 if cert.passed else 1


def _cmd_interval_analyze(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    f = _load_map(args.map, args.space)
    if not isinstance(f, PiecewiseLinearMap):
        raise InputError("interval-analyze needs a piecewise-linear map")
    analysis = interval_analyze(f, depth=args.depth)
    _write_json(outdir / "interval-analysis.json", interval_analysis_to_json(analysis))
    print(f"case {analysis.case} -> {outdir / 'interval-analysis.json'}")
    return 0


def _cmd_gallery(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    names = None if args.name in (None, "all") else [args.name]
    try:
        results = gallery_experiments(fast=args.fast, names=names)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    ok = True
    for key, report in results:
        _write_json(outdir / f"gallery-{key}.json", experiment_to_json(report))
        line = "PASS" if report.ok else "FAIL"
        print(f"{line} {key}")
        for c in report.failures():
            print(f"     failed check {c.name}: {c.detail}")
        ok = ok and report.ok
    return 0 if ok else 1


def _cmd_selftest(args) -> int:
    outdir = _resolve_outdir(args.outdir)
    ok = run_selftest(args.seed, outdir, rounds=args.rounds)
    print(f"selftest {'ok' if ok else 'FAILED'} (seed {args.seed}) -> {outdir / 'selftest.json'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument surface


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freelip",
        description="Workbench for free-space norms and Lipschitz orbit dynamics.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_outdir(p):
        p.add_argument("--outdir", help=f"report directory (default ${OUTDIR_ENV} or .)")

    p = sub.add_parser("norm", help="free-space norm of a vector with certificates")
    p.add_argument("--vector", required=True, help="vector JSON (embeds its space)")
    p.add_argument("--backend", default="flow", choices=("flow", "alpha", "line", "auto"))
    p.add_argument("--exact", action="store_true", help="rational arithmetic (flow backend)")
    add_outdir(p)
    p.set_defaults(fn=_cmd_norm)

    p = sub.add_parser("orbit", help="norm profile of an iterated vector")
    p.add_argument("--map", required=True, help="map JSON ({'space':…, 'map':…} or bare with --space)")
    p.add_argument("--space", help="space JSON when the map file has no embedded space")
    p.add_argument("--vector", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--backend", default="auto", choices=("auto", "flow", "alpha", "line"))
    add_outdir(p)
    p.set_defaults(fn=_cmd_orbit)

    p = sub.add_parser("classify", help="recurrent/escaping/bounded evidence for a point orbit")
    p.add_argument("--map", required=True)
    p.add_argument("--space")
    p.add_argument("--point", required=True, help="point as JSON (number or array)")
    p.add_argument("--params", help="ClassificationParams overrides as JSON file")
    p.add_argument("--power", type=int, default=1, help="classify under this iterate of the map")
    add_outdir(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("rigidity", help="uniform Lipschitz bound + simultaneous returns")
    p.add_argument("--map", required=True)
    p.add_argument("--space")
    p.add_argument("--times", required=True, help="comma-separated iterate times")
    p.add_argument("--bound", type=float, required=True)
    p.add_argument("--sample", help="JSON array of points (default: every point, finite presentations)")
    p.add_argument("--tolerances", help="comma-separated per-time return tolerances")
    add_outdir(p)
    p.set_defaults(fn=_cmd_rigidity)

    p = sub.add_parser("interval-analyze", help="drift sign analysis with escape certificates")
    p.add_argument("--map", required=True)
    p.add_argument("--space")
    p.add_argument("--depth", type=int, default=40)
    add_outdir(p)
    p.set_defaults(fn=_cmd_interval_analyze)

    p = sub.add_parser("gallery", help="run named experiments with built-in checks")
    p.add_argument("name", nargs="?", default="all", help=f"one of {', '.join(GALLERY)} or 'all'")
    p.add_argument("--fast", action="store_true", help="smaller desk scales")
    add_outdir(p)
    p.set_defaults(fn=_cmd_gallery)

    p = sub.add_parser("selftest", help="seeded invariant sweeps; byte-stable reports")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=20)
    add_outdir(p)
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
