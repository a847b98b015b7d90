#!/usr/bin/env python3
"""Dump norm profiles for the canonical orbits as step,norm CSV files.

One file per orbit, plus a verdict line on stdout for each.  The interval
maps push a single unit mass; the block-cycle run pushes the weighted payload
vector whose profile is periodic rather than monotone.

    python3 scripts/escape_profiles.py --outdir profiles/ --horizon 200
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

from freelip import (
    ClassificationParams,
    block_cycle_map,
    block_cycle_space,
    classify_orbit,
    delta,
    interval_map_suite,
    iterate_vector,
    make_free_vector,
    norm_alpha,
    orbit_norm_profile,
)

STARTS = {"identity": 0.75, "ramp": 1.0, "fill": 0.75, "doubling": 0.75}


def write_profile(path: Path, values: list[float]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "norm"])
        for step, value in enumerate(values):
            writer.writerow([step, repr(value)])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", type=Path, default=Path("."))
    ap.add_argument("--horizon", type=int, default=200)
    args = ap.parse_args(argv)
    args.outdir.mkdir(parents=True, exist_ok=True)

    # radii ladder capped at horizon/2 so a linear-drift orbit can cross it
    top = max(2, (args.horizon // 2).bit_length() - 1)
    params = ClassificationParams(
        horizon=args.horizon, radii=tuple(2.0**j for j in range(1, top + 1))
    )
    for name, f in interval_map_suite().items():
        x = STARTS[name]
        report = classify_orbit(f, x, params)
        profile = orbit_norm_profile(f, delta(f.space, x), args.horizon)
        write_profile(args.outdir / f"{name}.csv", profile)
        print(f"{name:<10} start {x:<6g} {report.verdict:<18} final norm {profile[-1]:g}")

    blocks = 10
    sp = block_cycle_space(blocks)
    f = block_cycle_map(sp, blocks)
    starts = [n * (n + 1) // 2 for n in range(1, blocks + 1)]
    mu = make_free_vector(sp, [(s, 1.0 / n**2) for n, s in enumerate(starts, start=1)])
    profile = [norm_alpha(mu)]
    for _ in range(args.horizon):
        mu = iterate_vector(f, mu, 1)
        profile.append(norm_alpha(mu))
    write_profile(args.outdir / "block-cycle.csv", profile)
    peak = max(profile)
    print(f"block-cycle payload: peak {peak:g} at step {profile.index(peak)}, final {profile[-1]:g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
