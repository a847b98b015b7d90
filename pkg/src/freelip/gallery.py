"""Named desk-scale experiments with their analytic expectations as checks.

Every experiment returns an :class:`ExperimentReport` whose checks encode the
closed-form facts the construction is supposed to exhibit; a report with a
failed check is a loud deviation, not a soft warning.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    BOUNDED,
    ESCAPING,
    RECURRENT,
    ClassificationParams,
    classify_orbit,
    orbit_norm_profile,
    recurrence_gap,
    rigidity_check,
    shift_profile_closed_form,
)
from .maps import AlphaMap, FiniteMap, PiecewiseLinearMap, iterate_map, iterate_vector, lip_constant
from .norms import norm_flow, norm_line
from .spaces import AlphaSpace, DomainError, FiniteSpace, IntervalSpace
from .vectors import FreeVector, make_free_vector


@dataclass(frozen=True)
class ExperimentCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    params: dict
    checks: tuple[ExperimentCheck, ...]
    data: dict

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[ExperimentCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)


def _check(name: str, ok: bool, detail: str = "") -> ExperimentCheck:
    return ExperimentCheck(name=name, ok=bool(ok), detail=detail)


def experiment_to_json(report: ExperimentReport) -> dict:
    return {
        "name": report.name,
        "ok": report.ok,
        "params": report.params,
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in report.checks],
        "data": report.data,
    }


# ---------------------------------------------------------------------------
# block schemes and the two weight sequences built from them


@dataclass(frozen=True)
class BlockScheme:
    """Block lengths k_0, k_1, ... with partial sums s_m = k_0 + ... + k_m.

    The m-th block of indices is (s_m, s_{m+1}], of length k_{m+1}; s_0 = 0.
    """

    ks: tuple[int, ...]

    def __post_init__(self):
        if not self.ks or self.ks[0] != 0:
            raise DomainError("block scheme starts with k_0 = 0")
        if any(k < 1 for k in self.ks[1:]):
            raise DomainError("block lengths k_1, k_2, ... must be at least 1")

    @property
    def ss(self) -> tuple[int, ...]:
        out = [0]
        for k in self.ks[1:]:
            out.append(out[-1] + k)
        return tuple(out)

    @property
    def blocks(self) -> int:
        return len(self.ks) - 1

    def block_of(self, n: int) -> int:
        """The m with s_m <= n < s_{m+1}."""
        ss = self.ss
        if not 0 <= n < ss[-1]:
            raise DomainError(f"index {n} outside the materialized blocks")
        return bisect_right(ss, n) - 1

    @classmethod
    def triangular(cls, blocks: int) -> "BlockScheme":
        """k_m = m, so s_m = m (m + 1) / 2."""
        if blocks < 1:
            raise DomainError("need at least one block")
        return cls(ks=tuple(range(blocks + 1)))

    @classmethod
    def tempered(cls, blocks: int) -> "BlockScheme":
        """Minimal lengths meeting the slow-growth constraints.

        k_m is the least integer with m^(s_{m-1}/k_m) <= 2 that also keeps
        the per-index growth rate m^(1/k_m) nonincreasing in m.  The second
        constraint is vacuous at m = 1 (1^(1/k) = 1 cannot dominate anything)
        and is enforced from m = 2 on.
        """
        if blocks < 1:
            raise DomainError("need at least one block")
        ks = [0, 1]
        s = 1
        for m in range(2, blocks + 1):
            k = max(1, math.ceil(s * math.log2(m)))
            if m >= 3:
                k = max(k, math.ceil(ks[-1] * math.log(m) / math.log(m - 1)))
            ks.append(k)
            s += k
        return cls(ks=tuple(ks))

    def validate_tempered(self) -> None:
        """Raise naming the first m violating either slow-growth constraint."""
        ss = self.ss
        for m in range(2, len(self.ks)):
            if m ** (ss[m - 1] / self.ks[m]) > 2.0 * (1.0 + 1e-12):
                raise DomainError(f"block scheme violates the doubling constraint at m = {m}")
            if m >= 3 and (m - 1) ** (1.0 / self.ks[m - 1]) < m ** (1.0 / self.ks[m]) * (1.0 - 1e-12):
                raise DomainError(f"block scheme violates the rate-monotone constraint at m = {m}")


def tempered_alpha_space(blocks: int = 12, scheme: BlockScheme | None = None) -> tuple[AlphaSpace, ExperimentReport]:
    """Weight sequence rising geometrically inside blocks, hitting the value
    m exactly at each block end, with every shifted ratio alpha_{n+s_m}/alpha_n
    at most 2.

    The ratio bound is exact arithmetic-wise; in floating point the
    equality cases (whenever m + 1 is a power of two the minimal block length
    makes some ratio exactly 2) can land one ulp above, so the check allows a
    1e-12 relative margin.
    """
    scheme = scheme or BlockScheme.tempered(blocks)
    scheme.validate_tempered()
    ks, ss = scheme.ks, scheme.ss
    parts = []
    for m in range(scheme.blocks):
        k = ks[m + 1]
        parts.append(np.power(float(m + 1), np.arange(1, k + 1, dtype=np.float64) / k))
    alpha = np.concatenate(parts)
    space = AlphaSpace(alpha)

    ends_ok = all(alpha[ss[m] - 1] == float(m) for m in range(1, scheme.blocks + 1))
    worst = 0.0
    for m in range(1, scheme.blocks + 1):
        s = ss[m]
        if s >= alpha.size:
            break
        worst = max(worst, float(np.max(alpha[s:] / alpha[: alpha.size - s])))
    ratio_ok = worst <= 2.0 * (1.0 + 1e-12)

    report = ExperimentReport(
        name="tempered-alpha",
        params={"blocks": scheme.blocks, "ks": list(ks)},
        checks=(
            _check("block-end-weights-hit-integers", ends_ok,
                   "alpha at each block end equals the block number exactly"),
            _check("shifted-ratio-at-most-two", ratio_ok, f"max ratio {worst!r}"),
        ),
        data={"ss": list(ss), "prefix_length": int(alpha.size), "max_shifted_ratio": worst},
    )
    return space, report


# ---------------------------------------------------------------------------
# forward shift


def forward_shift_map(space: AlphaSpace) -> AlphaMap:
    """n -> n + 1 on the sequence space (0 stays put)."""
    return AlphaMap(
        space=space,
        rule=lambda n: n + 1 if n >= 1 else 0,
        name="forward-shift",
        rule_json={"rule": "forward-shift"},
    )


def shift_vector(space: AlphaSpace, lam) -> FreeVector:
    """The vector sum_n lam[n-1] * delta(n) / alpha_n."""
    pairs = []
    for i, c in enumerate(lam):
        if c != 0:
            n = i + 1
            pairs.append((n, c / space.alpha(n)))
    return make_free_vector(space, pairs)


def forward_shift_experiment(
    space: AlphaSpace,
    lam,
    horizon: int,
    scheme: BlockScheme | None = None,
    radii: tuple[float, ...] | None = None,
    cross_check_steps: int = 50,
) -> ExperimentReport:
    """Profile of the forward shift on a normalized l1 payload.

    With a block scheme the profile is probed at the block ends, where the
    shifted-ratio bound caps it by twice the payload size (the bounded
    subsequence that rules out norm escape).  With a radius ladder instead,
    the experiment looks for escape evidence: every radius crossed.
    """
    lam = [float(c) for c in lam]
    l1 = sum(abs(c) for c in lam)
    profile = [shift_profile_closed_form(lam, space, k) for k in range(horizon + 1)]

    checks = [
        _check("profile-starts-at-payload-size", abs(profile[0] - l1) <= 1e-12 * (1.0 + l1),
               f"profile[0] = {profile[0]!r}, l1 = {l1!r}")
    ]

    steps = min(horizon, cross_check_steps)
    mu = shift_vector(space, lam)
    pushed = orbit_norm_profile(forward_shift_map(space), mu, steps, backend="alpha")
    agree = all(
        abs(a - b) <= 1e-9 * (1.0 + abs(b)) for a, b in zip(pushed, profile[: steps + 1])
    )
    checks.append(_check("pushforward-matches-closed-form", agree,
                         f"first {steps + 1} steps via the transport route"))

    data: dict = {"l1": l1, "profile_max": max(profile), "horizon": horizon}
    if scheme is not None:
        marks = [s for s in scheme.ss[1:] if s <= horizon]
        values = [profile[s] for s in marks]
        bound_ok = bool(values) and min(values) <= 2.0 * l1 * (1.0 + 1e-12)
        checks.append(_check("bounded-subsequence-at-block-ends", bound_ok,
                             f"min over block ends {min(values) if values else None!r} <= 2 * {l1!r}"))
        data["block_end_values"] = values
    if radii is not None:
        crossed = all(any(v >= r for v in profile) for r in radii)
        checks.append(_check("profile-crosses-every-radius", crossed,
                             f"ladder {list(radii)}, profile max {max(profile)!r}"))
        data["radii"] = list(radii)

    return ExperimentReport(
        name="forward-shift",
        params={"horizon": horizon, "support": len(lam), "scheme_blocks": scheme.blocks if scheme else None},
        checks=tuple(checks),
        data=data,
    )


# ---------------------------------------------------------------------------
# block cycles


def block_cycle_space(blocks: int) -> AlphaSpace:
    """Weights 2^(m - s_n) on the n-th block (s_n, s_{n+1}]... indices
    m in [s_n, s_{n+1}) carry 2^(m - s_n), rising from 1 to 2^n within block n."""
    scheme = BlockScheme.triangular(blocks + 1)
    ss = scheme.ss
    top = ss[blocks + 1] - 1
    alpha = np.empty(top, dtype=np.float64)
    for n in range(1, blocks + 1):
        lo, hi = ss[n], ss[n + 1]
        alpha[lo - 1 : hi - 1] = np.power(2.0, np.arange(0, hi - lo, dtype=np.float64))
    return AlphaSpace(alpha)


def block_cycle_map(space: AlphaSpace, blocks: int) -> AlphaMap:
    """Step forward within each block, wrapping the last index to the start."""
    scheme = BlockScheme.triangular(blocks + 1)
    ss = scheme.ss

    def rule(m: int) -> int:
        if m == 0:
            return 0
        n = bisect_right(ss, m) - 1
        return ss[n] if m == ss[n + 1] - 1 else m + 1

    table = tuple(rule(m) for m in range(space.prefix_length + 1))
    return AlphaMap(space=space, rule=rule, name="block-cycle",
                    rule_json={"rule": "table", "table": list(table)})


def block_cycle_experiment(
    blocks: int = 10,
    horizon: int = 1000,
    lip_blocks: int = 21,
    lip_max: int = 20,
) -> ExperimentReport:
    """Every point is periodic with its block size as minimal period, the
    iterate Lipschitz constants double each step, and the truncated payload
    profile follows the per-block wrap-around closed form.

    A return after exactly s_n steps happens on block n iff its size n + 1
    divides s_n = n (n + 1) / 2, i.e. iff n is even; the experiment records
    that parity fact rather than asserting a uniform s_n-return.
    """
    scheme = BlockScheme.triangular(blocks + 1)
    ss = scheme.ss
    space = block_cycle_space(blocks)
    f = block_cycle_map(space, blocks)

    periodic_ok = True
    period_detail = ""
    for m in range(1, ss[blocks + 1]):
        n = bisect_right(ss, m) - 1
        want = n + 1
        y = m
        period = None
        for j in range(1, want + 1):
            y = f.apply(y)
            if y == m:
                period = j
                break
        if period != want:
            periodic_ok = False
            period_detail = f"index {m} in block {n}: period {period}, expected {want}"
            break

    parity_ok = True
    parity_detail = ""
    for n in range(1, blocks + 1):
        m = ss[n]
        y = m
        for _ in range(ss[n]):
            y = f.apply(y)
        returned = y == m
        if returned != (n % 2 == 0):
            parity_ok = False
            parity_detail = f"block {n}: return after s_n = {ss[n]} steps is {returned}"
            break

    lip_space = block_cycle_space(lip_blocks)
    lip_map = block_cycle_map(lip_space, lip_blocks)
    lip_ok = True
    lip_detail = ""
    for j in range(1, lip_max + 1):
        got = lip_constant(iterate_map(lip_map, j)).value
        if got != 2.0 ** j:
            lip_ok = False
            lip_detail = f"Lip of iterate {j} is {got!r}, expected {2.0 ** j!r}"
            break

    coef = {n: 1.0 / n ** 2 for n in range(1, blocks + 1)}
    mu = make_free_vector(space, [(ss[n], coef[n]) for n in range(1, blocks + 1)])
    profile = orbit_norm_profile(f, mu, horizon, backend="alpha")
    closed = [
        sum(coef[n] * 2.0 ** (k % (n + 1)) for n in range(1, blocks + 1))
        for k in range(horizon + 1)
    ]
    profile_ok = all(abs(a - b) <= 1e-12 * (1.0 + abs(b)) for a, b in zip(profile, closed))
    peak = max(profile)
    first_drop = next((k for k in range(len(profile) - 1) if profile[k + 1] < profile[k]), None)

    return ExperimentReport(
        name="block-cycle",
        params={"blocks": blocks, "horizon": horizon, "lip_blocks": lip_blocks, "lip_max": lip_max},
        checks=(
            _check("minimal-period-equals-block-size", periodic_ok, period_detail),
            _check("block-start-return-iff-even-block", parity_ok, parity_detail),
            _check("iterate-lipschitz-doubles", lip_ok, lip_detail),
            _check("profile-matches-wraparound-closed-form", profile_ok,
                   f"horizon {horizon}, peak {peak!r}"),
        ),
        data={
            "profile_peak": peak,
            "profile_peak_step": int(profile.index(peak)),
            "first_profile_drop": first_drop,
            "profile_period_lcm": int(math.lcm(*range(2, blocks + 2))),
            "profile_head": profile[: min(65, len(profile))],
        },
    )


# ---------------------------------------------------------------------------
# doubling on the unit interval


def doubling_map() -> PiecewiseLinearMap:
    """x -> min(2x, 1) on [0, 1]."""
    return PiecewiseLinearMap(IntervalSpace(0.0, 1.0), ((0.0, 0.0), (0.5, 1.0), (1.0, 1.0)))


def dyadic_tail_vector(space: IntervalSpace, n_terms: int) -> FreeVector:
    """Unit masses at 1/2, 1/4, ..., 2^-N."""
    return make_free_vector(space, [(2.0 ** -n, 1.0) for n in range(1, n_terms + 1)])


def doubling_experiment(n_terms: int = 40, horizon: int = 30) -> ExperimentReport:
    """Pushing the dyadic tail forward parks one unit of mass at 1 per step
    and shifts the rest, so step k is exactly k*delta(1) + (tail of N - k
    terms) with norm k + 1 - 2^(k-N); the space is bounded so no orbit
    escapes."""
    if horizon > n_terms:
        raise DomainError("horizon beyond the truncation has no closed form")
    f = doubling_map()
    space = f.space
    mu = dyadic_tail_vector(space, n_terms)

    structural_ok = True
    structural_detail = ""
    norm_ok = True
    norm_detail = ""
    flow_ok = True
    flow_detail = ""
    for k in range(horizon + 1):
        got = iterate_vector(f, mu, k)
        want = make_free_vector(
            space, [(1.0, float(k))] + [(2.0 ** -n, 1.0) for n in range(1, n_terms - k + 1)]
        )
        if got.terms != want.terms:
            structural_ok = False
            structural_detail = f"step {k}: terms diverge from k*delta(1) + shifted tail"
            break
        value = k + 1.0 - 2.0 ** (k - n_terms)
        if abs(norm_line(got) - value) > 1e-12 * (1.0 + value):
            norm_ok = False
            norm_detail = f"step {k}: norm {norm_line(got)!r} vs closed form {value!r}"
            break
        if k in (0, horizon // 2, horizon):
            fv = norm_flow(got).value
            if abs(fv - value) > 1e-9 * (1.0 + value):
                flow_ok = False
                flow_detail = f"step {k}: transport route {fv!r} vs {value!r}"
                break

    params = ClassificationParams(horizon=200)
    verdicts = {x: classify_orbit(f, x, params).verdict for x in (0.25, 0.5, 1.0)}
    no_escape = all(v != ESCAPING for v in verdicts.values())
    bounded_sample = verdicts[0.25] == BOUNDED

    return ExperimentReport(
        name="doubling",
        params={"n_terms": n_terms, "horizon": horizon},
        checks=(
            _check("pushforward-parks-mass-at-one", structural_ok, structural_detail),
            _check("norm-profile-closed-form", norm_ok, norm_detail),
            _check("transport-route-agrees", flow_ok, flow_detail),
            _check("no-escape-on-bounded-interval", no_escape, f"verdicts {verdicts}"),
            _check("interior-orbit-bounded", bounded_sample, f"x = 0.25 -> {verdicts[0.25]}"),
        ),
        data={"final_norm": horizon + 1.0 - 2.0 ** (horizon - n_terms)},
    )


# ---------------------------------------------------------------------------
# backward shift on a geometric point set


def backward_shift_space(n_points: int = 12) -> FiniteSpace:
    """{0} together with 1, 1/2, ..., 2^-(N-1) under the line metric."""
    if n_points < 2:
        raise DomainError("need at least two nonzero points")
    values = [0.0] + [2.0 ** -n for n in range(n_points)]
    matrix = tuple(tuple(abs(a - b) for b in values) for a in values)
    return FiniteSpace(matrix=matrix, basepoint=0, labels=tuple(values))


def backward_shift_map(space: FiniteSpace) -> FiniteMap:
    """2^-n -> 2^-(n-1), with 1 (and 0) sent to 0."""
    n = space.size
    table = (0, 0) + tuple(range(1, n - 1))
    return FiniteMap(space=space, table=table)


def backward_shift_experiment(n_points: int = 12, horizon: int = 64) -> ExperimentReport:
    """Doubling the value each step: Lipschitz constant exactly 2, every
    orbit lands on the basepoint, and no nonzero point ever comes back near
    itself (its gap equals its own value)."""
    space = backward_shift_space(n_points)
    f = backward_shift_map(space)

    lip = lip_constant(f)
    lip_ok = lip.value == 2.0

    reach_ok = True
    reach_detail = ""
    for i in range(1, space.size):
        y = i
        steps = 0
        while y != 0 and steps <= space.size:
            y = f.apply(y)
            steps += 1
        if y != 0 or steps != i:
            reach_ok = False
            reach_detail = f"point index {i} reached 0 in {steps} steps, expected {i}"
            break

    gap_ok = True
    gap_detail = ""
    for i in range(1, space.size):
        value = space.labels[i]
        gap, _ = recurrence_gap(f, i, horizon)
        if gap != value:
            gap_ok = False
            gap_detail = f"gap at {value!r} is {gap!r}"
            break

    params = ClassificationParams(horizon=horizon)
    sample = {i: classify_orbit(f, i, params).verdict for i in (0, 1, space.size - 1)}
    verdict_ok = sample[0] == RECURRENT and all(
        v == BOUNDED for i, v in sample.items() if i != 0
    )

    return ExperimentReport(
        name="backward-shift",
        params={"n_points": n_points, "horizon": horizon},
        checks=(
            _check("lipschitz-constant-is-two", lip_ok, f"got {lip.value!r} at pair {lip.witness}"),
            _check("every-orbit-reaches-basepoint", reach_ok, reach_detail),
            _check("gap-equals-own-distance", gap_ok, gap_detail),
            _check("only-basepoint-recurrent", verdict_ok, f"verdicts {sample}"),
        ),
        data={"lip_witness": list(lip.witness) if lip.witness else None},
    )


# ---------------------------------------------------------------------------
# circle rotations and simultaneous return times


def kronecker_return_times(angles, eps: float, bound: int) -> list[int]:
    """All n <= bound with max_p |exp(i n angle_p) - 1| < eps, by brute force.

    |exp(i t) - 1| = 2 |sin(t / 2)|; an empty result is a legitimate outcome.
    """
    if not eps > 0:
        raise DomainError("tolerance must be positive")
    if bound < 1:
        raise DomainError("bound must be at least 1")
    angles = [float(a) for a in angles]
    if not angles:
        raise DomainError("need at least one angle")
    ns = np.arange(1, bound + 1, dtype=np.float64)
    worst = np.zeros_like(ns)
    for a in angles:
        np.maximum(worst, 2.0 * np.abs(np.sin(ns * (a / 2.0))), out=worst)
    return [int(n) for n in np.nonzero(worst < eps)[0] + 1]


def circle_rotation_space(q: int) -> tuple[FiniteSpace, FiniteMap]:
    """q-th roots of unity under chord distance, plus a hub at distance 1
    from every root; the map rotates by one step and fixes the hub.

    Chord lengths are precomputed per residue, so rotation preserves each
    distance exactly and every iterate has Lipschitz constant exactly 1.
    """
    if q < 2:
        raise DomainError("need at least two rotation steps")
    chord = [2.0 * abs(math.sin(math.pi * r / q)) for r in range(q // 2 + 1)]
    size = q + 1

    def dist(i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i == 0 or j == 0:
            return 1.0
        m = (i - j) % q
        return chord[min(m, q - m)]

    matrix = tuple(tuple(dist(i, j) for j in range(size)) for i in range(size))
    labels = ("hub",) + tuple(range(q))
    space = FiniteSpace(matrix=matrix, basepoint=0, labels=labels)
    # root r lives at space index r + 1; the last root wraps around to the first
    table = (0,) + tuple(i + 2 if i < q - 1 else 1 for i in range(q))
    rotation = FiniteMap(space=space, table=table)
    return space, rotation


def circle_rotation_experiment(q: int = 7, times: tuple[int, ...] | None = None) -> ExperimentReport:
    """Rotations are isometries: unit Lipschitz constant at every power, a
    global return to the identity every q steps, and a passing rigidity
    certificate with zero return errors at multiples of q."""
    space, f = circle_rotation_space(q)
    times = times or (q, 2 * q, 3 * q)

    lip_ok = all(lip_constant(iterate_map(f, j)).value == 1.0 for j in range(1, q + 1))

    idq = iterate_map(f, q)
    identity_ok = all(idq.apply(i) == i for i in range(space.size))

    cert = rigidity_check(f, list(range(space.size)), times, bound=1.0)
    rigid_ok = cert.passed and all(e == 0.0 for e in cert.return_errors)

    gap, gap_time = recurrence_gap(f, 1, 2 * q)
    gap_ok = gap == 0.0 and gap_time == q

    return ExperimentReport(
        name="circle-rotation",
        params={"q": q, "times": list(times)},
        checks=(
            _check("all-iterates-are-isometries", lip_ok),
            _check("q-th-iterate-is-identity", identity_ok),
            _check("rigidity-certificate-passes", rigid_ok, cert.reason),
            _check("gap-closes-at-q", gap_ok, f"gap {gap!r} at {gap_time}"),
        ),
        data={"lip_values": list(cert.lip_values), "return_errors": list(cert.return_errors)},
    )


# ---------------------------------------------------------------------------
# the interval map suite used by the analyzer and the power check


def identity_map(space: IntervalSpace | None = None) -> PiecewiseLinearMap:
    space = space or IntervalSpace(0.0, math.inf)
    return PiecewiseLinearMap(space, ((0.0, 0.0),), right_slope=1.0)


def ramp_map() -> PiecewiseLinearMap:
    """Doubles on [0, 1], then advances by one unit per step: an escape to
    infinity with d(0, f^n(1)) = n + 1."""
    return PiecewiseLinearMap(IntervalSpace(0.0, math.inf), ((0.0, 0.0), (1.0, 2.0)), right_slope=1.0)


def fill_map() -> PiecewiseLinearMap:
    """Strictly above the diagonal on (0, 1) but mapping it into itself."""
    return PiecewiseLinearMap(IntervalSpace(0.0, 1.0), ((0.0, 0.0), (0.5, 0.75), (1.0, 1.0)))


def interval_map_suite() -> dict[str, PiecewiseLinearMap]:
    return {
        "identity": identity_map(),
        "ramp": ramp_map(),
        "fill": fill_map(),
        "doubling": doubling_map(),
    }


# ---------------------------------------------------------------------------
# one-call gallery run


def _shift_tempered_report(fast: bool) -> ExperimentReport:
    blocks = 8 if fast else 12
    space, _ = tempered_alpha_space(blocks)
    scheme = BlockScheme.tempered(blocks)
    lam = [1.0 / n ** 2 for n in range(1, 21)]
    horizon = scheme.ss[5 if fast else 8]
    return forward_shift_experiment(space, lam, horizon, scheme=scheme)


def _shift_linear_report(fast: bool) -> ExperimentReport:
    linear = AlphaSpace(np.arange(1.0, 402.0))
    return forward_shift_experiment(
        linear, [1.0], 400, radii=tuple(2.0 ** j for j in range(1, 9)), cross_check_steps=30
    )


GALLERY: dict = {
    "tempered-alpha": lambda fast: tempered_alpha_space(8 if fast else 12)[1],
    "shift-tempered": _shift_tempered_report,
    "shift-linear": _shift_linear_report,
    "block-cycle": lambda fast: block_cycle_experiment(blocks=10, horizon=120 if fast else 1000),
    "doubling": lambda fast: doubling_experiment(),
    "backward-shift": lambda fast: backward_shift_experiment(),
    "rotation-7": lambda fast: circle_rotation_experiment(q=7),
    "rotation-4": lambda fast: circle_rotation_experiment(q=4, times=(4, 8, 12)),
}


def gallery_experiments(fast: bool = False, names=None) -> list[tuple[str, ExperimentReport]]:
    """Run the named experiments (all by default) at desk scale.

    Returns (registry key, report) pairs in registry order; unknown names
    raise before anything runs.
    """
    keys = list(GALLERY) if names is None else list(names)
    bad = [k for k in keys if k not in GALLERY]
    if bad:
        raise DomainError(f"unknown gallery experiments: {', '.join(bad)}")
    return [(k, GALLERY[k](fast)) for k in keys]
