"""End-to-end acceptance checks for the workbench.

Each test covers one release criterion and prints a single verdict line, so a
plain ``pytest -v tests/test_acceptance.py`` run doubles as the sign-off
sheet.  Tolerances are stated inline next to each check; anything tighter
than float roundoff is asserted exactly.
"""

from __future__ import annotations

import math
import random
import subprocess
import sys
import time
from bisect import bisect_right
from pathlib import Path

import numpy as np

from freelip import (
    BOUNDED,
    ESCAPING,
    RECURRENT,
    AlphaSpace,
    ClassificationParams,
    FiniteMap,
    IntervalSpace,
    block_cycle_map,
    block_cycle_space,
    circle_rotation_experiment,
    classify_orbit,
    dyadic_tail_vector,
    forward_shift_map,
    interval_analyze,
    interval_map_suite,
    iterate_map,
    iterate_vector,
    kronecker_return_times,
    lip_constant,
    make_free_vector,
    norm_alpha,
    norm_flow,
    norm_line,
    operator_norm_estimate,
    power_equivalence_check,
    rigidity_check,
    shift_profile_closed_form,
    tempered_alpha_space,
)

from conftest import random_finite_space

TOL = 1e-9
EXACT_REL = 1e-12  # slack for bounds that hold with equality in exact arithmetic


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] {num:02d} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# 1. the embedding is an isometry, at interactive speed


def test_01_delta_embedding_isometry_timed():
    rng = random.Random(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        sp = random_finite_space(rng, rng.randrange(2, 31))
        pts = list(range(sp.size))
        for i, x in enumerate(pts):
            for y in pts[i + 1 :]:
                got = norm_flow(make_free_vector(sp, [(x, 1.0), (y, -1.0)])).value
                worst = max(worst, abs(got - sp.distance(x, y)))
    elapsed = time.perf_counter() - t0
    ok = worst <= TOL and elapsed < 10.0
    _verdict(1, "delta-embedding-isometry", ok, f"max error {worst:.2e}, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 2. operator norm of a linearized map equals its Lipschitz constant


def test_02_operator_norm_equals_lipschitz():
    rng = random.Random(202)
    worst = 0.0
    for _ in range(50):
        sp = random_finite_space(rng, rng.randrange(3, 13))
        table = (0,) + tuple(rng.randrange(sp.size) for _ in range(sp.size - 1))
        f = FiniteMap(sp, table)
        lip = lip_constant(f)
        op = operator_norm_estimate(f)
        assert lip.exact and op.exact
        worst = max(worst, abs(op.value - lip.value))
    _verdict(2, "operator-norm-equals-lipschitz", worst <= TOL, f"max gap {worst:.2e}")


# ---------------------------------------------------------------------------
# 3. closed-form backends agree with the transport solver


def test_03_norm_backend_agreement():
    rng = random.Random(303)
    worst = 0.0
    for _ in range(100):
        n = rng.randrange(2, 25)
        sp = AlphaSpace([rng.uniform(0.1, 50.0) for _ in range(n)])
        support = rng.sample(range(1, n + 1), rng.randrange(1, n + 1))
        mu = make_free_vector(sp, [(p, rng.uniform(-2.0, 2.0)) for p in support])
        a, b = norm_alpha(mu), norm_flow(mu).value
        worst = max(worst, abs(a - b) / (1.0 + b))
    line = IntervalSpace(0.0, 1.0)
    for _ in range(100):
        support = {round(rng.random(), 6) for _ in range(rng.randrange(1, 12))}
        mu = make_free_vector(line, [(p, rng.uniform(-2.0, 2.0)) for p in support])
        a, b = norm_line(mu), norm_flow(mu).value
        worst = max(worst, abs(a - b) / (1.0 + b))
    _verdict(3, "norm-backend-agreement", worst <= TOL, f"max rel gap {worst:.2e}")


# ---------------------------------------------------------------------------
# 4. tempered weight generator and the forward-shift subsequence bound


def test_04_tempered_weights_and_shift_bound():
    space, report = tempered_alpha_space(12)
    ss = report.data["ss"]
    a = np.asarray(space.alpha_prefix())  # a[i] == weight of point i+1

    exact_ends = all(a[ss[m] - 1] == float(m) for m in range(1, 13))

    ratio = 0.0
    for m in range(1, 13):
        s = ss[m]
        if s >= a.size:
            break
        ratio = max(ratio, float(np.max(a[s:] / a[: a.size - s])))
    ratio_ok = ratio <= 2.0 * (1.0 + EXACT_REL)

    rng = random.Random(404)
    bound_ok = True
    for trial in range(100):
        lam = [rng.uniform(-1.0, 1.0) for _ in range(rng.randrange(1, 41))]
        l1 = sum(abs(c) for c in lam)
        for m in range(1, 12):
            if shift_profile_closed_form(lam, space, ss[m]) > 2.0 * l1 * (1.0 + EXACT_REL):
                bound_ok = False
        if trial < 5:
            # drive a few through the actual operator to keep the closed form honest
            mu = make_free_vector(
                space, [(n, c / space.alpha(n)) for n, c in enumerate(lam, start=1)]
            )
            pushed = iterate_vector(forward_shift_map(space), mu, ss[3])
            direct = norm_flow(pushed).value
            closed = shift_profile_closed_form(lam, space, ss[3])
            assert abs(direct - closed) <= TOL * (1.0 + closed)

    ok = exact_ends and ratio_ok and bound_ok
    _verdict(
        4,
        "tempered-weights-and-shift-bound",
        ok,
        f"block-end weights exact={exact_ends}, max shifted ratio {ratio:.16g}, "
        f"subsequence bound held={bound_ok}",
    )


# ---------------------------------------------------------------------------
# 5. block-cycle dynamics: stated return times, iterate growth, norm profile
#
# The three sub-claims are asserted literally.  Two of them contradict the
# construction itself: the cycle through a block of size n+1 has period n+1
# (so f^{s_n} fixes the block only when n is even), and the pushforward norm
# profile is periodic with period lcm(2..11), not eventually increasing.
# This criterion documents the discrepancy by failing; the true statements
# about the same construction are covered in test_gallery.py.


def test_05_block_cycle_dynamics():
    blocks = 10
    sp = block_cycle_space(blocks)
    f = block_cycle_map(sp, blocks)
    ss = [n * (n + 1) // 2 for n in range(blocks + 1)]

    period_ok = True
    for m in range(1, ss[10]):
        n = bisect_right(ss, m) - 1
        y = m
        for _ in range(ss[n]):
            y = f.apply(y)
        if y != m:
            period_ok = False
            break

    sp21 = block_cycle_space(21)
    f21 = block_cycle_map(sp21, 21)
    lip_ok = all(
        lip_constant(iterate_map(f21, n)).value == 2.0**n for n in range(1, 21)
    )

    mu = make_free_vector(sp, [(ss[n], 1.0 / n**2) for n in range(1, 11)])
    prof = [norm_alpha(mu)]
    v = mu
    for _ in range(3 * ss[10]):
        v = iterate_vector(f, v, 1)
        prof.append(norm_alpha(v))
    increasing_ok = all(prof[k + 1] > prof[k] for k in range(ss[10], len(prof) - 1))

    ok = period_ok and lip_ok and increasing_ok
    _verdict(
        5,
        "block-cycle-dynamics",
        ok,
        f"block-boundary return times={period_ok}, iterate growth 2^n={lip_ok}, "
        f"profile increasing past step {ss[10]}={increasing_ok}",
    )


# ---------------------------------------------------------------------------
# 6. doubling pushforward: structural identity and closed-form profile


def test_06_doubling_pushforward_closed_form():
    f = interval_map_suite()["doubling"]
    N = 40
    mu = dyadic_tail_vector(f.space, N)
    structural_ok = True
    worst = 0.0
    for k in range(1, 31):
        pushed = iterate_vector(f, mu, k)
        expected = make_free_vector(
            f.space,
            [(1.0, float(k))] + [(0.5**n, 1.0) for n in range(1, N - k + 1)],
        )
        if dict(pushed.terms) != dict(expected.terms):
            structural_ok = False
        worst = max(worst, abs(norm_flow(pushed).value - (k + 1.0 - 2.0 ** (k - N))))
    ok = structural_ok and worst <= 1e-12
    _verdict(
        6,
        "doubling-pushforward-closed-form",
        ok,
        f"structure exact={structural_ok}, max profile error {worst:.2e}",
    )


# ---------------------------------------------------------------------------
# 7. interval analyzer: no-drift, unbounded drift, trapped overshoot


def test_07_interval_case_analysis():
    suite = interval_map_suite()
    ident = interval_analyze(suite["identity"])
    ramp = interval_analyze(suite["ramp"])
    dbl = interval_analyze(suite["doubling"], depth=40)

    cases_ok = (ident.case, ramp.case, dbl.case) == ("1", "2", "3.2")

    cert = ramp.side("positive").certificate
    params = ClassificationParams(horizon=1000, radii=tuple(2.0**j for j in range(1, 9)))
    escape_ok = (
        cert is not None
        and classify_orbit(suite["ramp"], cert, params).verdict == ESCAPING
    )

    seq = dbl.side("positive").sequence
    seq_ok = seq == tuple(0.5**n for n in range(1, 41))
    support_ok = dbl.side("positive").vector.support() == dyadic_tail_vector(
        suite["doubling"].space, 40
    ).support()

    ok = cases_ok and escape_ok and seq_ok and support_ok
    _verdict(
        7,
        "interval-case-analysis",
        ok,
        f"cases={cases_ok}, escape certificate={escape_ok}, "
        f"backward orbit={seq_ok and support_ok}",
    )


# ---------------------------------------------------------------------------
# 8. escape verdicts are stable under passing to powers


def test_08_power_escape_equivalence():
    params = ClassificationParams(horizon=1000, radii=tuple(2.0**j for j in range(1, 9)))
    total = disagreements = 0
    for name, f in interval_map_suite().items():
        hi = f.space.b if math.isfinite(f.space.b) else 10.0
        sample = [f.space.a + (hi - f.space.a) * (i + 1) / 101 for i in range(100)]
        for k in range(2, 6):
            report = power_equivalence_check(f, k, sample, params)
            total += len(report.entries)
            disagreements += len(report.disagreements)
    _verdict(
        8,
        "power-escape-equivalence",
        disagreements == 0,
        f"{disagreements} disagreements over {total} orbit pairs",
    )


# ---------------------------------------------------------------------------
# 9. rigidity certificates: rotations pass, the block cycle fails loudly


def test_09_rotation_rigidity():
    rot_ok = True
    for q in range(2, 13):
        rep = circle_rotation_experiment(q)
        checks_ok = all(c.ok for c in rep.checks)
        flat = all(v == 1.0 for v in rep.data["lip_values"])
        returned = all(e == 0.0 for e in rep.data["return_errors"])
        rot_ok = rot_ok and checks_ok and flat and returned

    sp = block_cycle_space(6)
    f = block_cycle_map(sp, 6)
    cert = rigidity_check(f, sample=[1, 2, 3], times=(1, 2, 3), bound=1.0)
    blowup_ok = (not cert.passed) and cert.reason.startswith("lipschitz-bound")

    ok = rot_ok and blowup_ok
    _verdict(
        9,
        "rotation-rigidity",
        ok,
        f"rotations q=2..12 rigid={rot_ok}, block cycle rejected={blowup_ok}",
    )


# ---------------------------------------------------------------------------
# 10. return-time search matches the exact arithmetic progressions


def test_10_kronecker_return_times():
    evens = kronecker_return_times([math.pi], eps=1e-9, bound=1000)
    sevens = kronecker_return_times([2.0 * math.pi * 3.0 / 7.0], eps=1e-9, bound=1000)
    ok = evens == list(range(2, 1001, 2)) and sevens == list(range(7, 1001, 7))
    _verdict(
        10,
        "kronecker-return-times",
        ok,
        f"{len(evens)} even times, {len(sevens)} multiples of 7",
    )


# ---------------------------------------------------------------------------
# 11. the selftest report is byte-deterministic


def test_11_selftest_determinism(tmp_path: Path):
    def run(sub: str) -> dict[str, bytes]:
        out = tmp_path / sub
        out.mkdir()
        proc = subprocess.run(
            [sys.executable, "-m", "freelip.cli", "selftest", "--seed", "7", "--outdir", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        return {p.name: p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}

    first, second = run("a"), run("b")
    ok = first == second and len(first) > 0
    _verdict(11, "selftest-determinism", ok, f"{len(first)} files compared")
