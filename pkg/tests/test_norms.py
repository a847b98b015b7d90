"""Norm backends against each other and against an independent LP oracle.

The oracle solves the dual program directly with scipy.optimize.linprog:
maximize the pairing of a functional against the vector subject to the
1-Lipschitz constraints on every ordered pair of nodes (basepoint pinned to
zero).  Nothing of the in-package flow solver is reused there.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from freelip import (
    AlphaSpace,
    DomainError,
    IntervalSpace,
    delta,
    dual_gap,
    free_norm,
    linear_combine,
    make_free_vector,
    norm_alpha,
    norm_flow,
    norm_line,
    norm_result_to_json,
    pair,
    restrict_to_points,
    witness_functional,
)
from conftest import random_finite_space

RELTOL = 1e-9


def lp_dual_norm(mu) -> float:
    """Dual LP oracle: best 1-Lipschitz pairing, solved by scipy."""
    space = mu.space
    pts = [space.basepoint] + list(mu.support())
    n = len(pts)
    c = np.zeros(n - 1)
    for idx, (p, coef) in enumerate(mu.terms):
        c[idx] = -coef  # linprog minimizes
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            row = np.zeros(n - 1)
            if i > 0:
                row[i - 1] += 1.0
            if j > 0:
                row[j - 1] -= 1.0
            rows.append(row)
            rhs.append(space.distance(pts[i], pts[j]))
    res = linprog(
        c,
        A_ub=np.array(rows),
        b_ub=np.array(rhs),
        bounds=[(None, None)] * (n - 1),
        method="highs",
    )
    assert res.status == 0, res.message
    return -res.fun


def random_vector(rng: random.Random, space, k: int):
    pts = rng.sample([p for p in space.points() if p != space.basepoint], k)
    return make_free_vector(space, [(p, rng.uniform(-3, 3)) for p in pts])


# ---------------------------------------------------------------------------
# pinned example: two units at 1, minus one at 3, on the half line


def test_two_point_example_costs_three():
    sp = restrict_to_points(IntervalSpace(0.0, math.inf), [1.0, 3.0])
    mu = make_free_vector(sp, [(1, 2.0), (2, -1.0)])
    res = norm_flow(mu)
    assert res.value == pytest.approx(3.0, rel=RELTOL)
    assert lp_dual_norm(mu) == pytest.approx(3.0, rel=RELTOL)
    assert dual_gap(res) == pytest.approx(0.0, abs=1e-12)


def test_lp_oracle_agrees_on_random_spaces(rng):
    for _ in range(25):
        sp = random_finite_space(rng, rng.randint(3, 10))
        mu = random_vector(rng, sp, rng.randint(1, sp.size - 1))
        if mu.is_zero():
            continue
        mine = norm_flow(mu).value
        oracle = lp_dual_norm(mu)
        assert mine == pytest.approx(oracle, rel=RELTOL, abs=1e-12)


# ---------------------------------------------------------------------------
# isometry and elementary identities


def test_delta_differences_are_isometric(rng):
    for _ in range(10):
        sp = random_finite_space(rng, 8)
        for p in sp.points():
            for q in sp.points():
                mu = linear_combine([(1.0, delta(sp, p)), (-1.0, delta(sp, q))])
                got = norm_flow(mu).value
                assert got == pytest.approx(sp.distance(p, q), rel=RELTOL, abs=1e-12)


def test_positive_combinations_ship_straight_to_base(rng):
    # with all coefficients >= 0 the norm is just the weighted distance sum
    for _ in range(10):
        sp = random_finite_space(rng, 7)
        pts = rng.sample(range(1, sp.size), 3)
        coefs = [rng.uniform(0.1, 2.0) for _ in pts]
        mu = make_free_vector(sp, list(zip(pts, coefs)))
        expect = sum(c * sp.distance(p, 0) for p, c in zip(pts, coefs))
        assert norm_flow(mu).value == pytest.approx(expect, rel=RELTOL)


def test_norm_is_absolutely_homogeneous(rng):
    sp = random_finite_space(rng, 8)
    mu = random_vector(rng, sp, 4)
    for a in (-2.5, 0.5, 3.0):
        scaled = linear_combine([(a, mu)])
        assert norm_flow(scaled).value == pytest.approx(
            abs(a) * norm_flow(mu).value, rel=RELTOL
        )


def test_triangle_inequality_for_norms(rng):
    sp = random_finite_space(rng, 8)
    mu, nu = random_vector(rng, sp, 3), random_vector(rng, sp, 3)
    lhs = norm_flow(linear_combine([(1.0, mu), (1.0, nu)])).value
    assert lhs <= norm_flow(mu).value + norm_flow(nu).value + 1e-9


def test_superset_of_points_does_not_change_the_norm(rng):
    # the flow may route through extra nodes, but the triangle inequality
    # makes relays useless, so the value must not move
    for _ in range(8):
        sp = random_finite_space(rng, 10)
        support = rng.sample(range(1, 10), 3)
        small = restrict_to_points(sp, support)
        mu_small = make_free_vector(
            small, [(small.labels.index(p), rng.uniform(-2, 2)) for p in support]
        )
        mu_big = make_free_vector(
            sp, [(small.labels[i], c) for i, c in mu_small.terms]
        )
        assert norm_flow(mu_small).value == pytest.approx(
            norm_flow(mu_big).value, rel=RELTOL, abs=1e-12
        )


# ---------------------------------------------------------------------------
# certificates


def test_certificates_are_feasible_and_tight(rng):
    for _ in range(15):
        sp = random_finite_space(rng, 8)
        mu = random_vector(rng, sp, rng.randint(1, 5))
        if mu.is_zero():
            continue
        res = norm_flow(mu)
        # dual witness: 1-Lipschitz on the nodes, vanishes at base, attains value
        vals = dict(res.witness)
        assert vals[sp.basepoint] == 0.0
        nodes = list(vals)
        for y in nodes:
            for z in nodes:
                assert abs(vals[y] - vals[z]) <= sp.distance(y, z) + 1e-9
        pairing = sum(c * res.witness_value(p) for p, c in mu.terms)
        assert pairing == pytest.approx(res.value, rel=RELTOL, abs=1e-12)
        # primal plan: conserves mass at every node and costs the value
        net = {p: 0.0 for p in nodes}
        for src, dst, m, cost in res.plan:
            assert m > 0
            assert cost == sp.distance(src, dst)
            net[src] += m
            net[dst] -= m
        b = {p: 0.0 for p in nodes}
        b[sp.basepoint] = -mu.total_mass()
        for p, c in mu.terms:
            b[p] += c
        for p in nodes:
            assert net[p] == pytest.approx(b[p], abs=1e-9)
        assert res.plan_cost() == pytest.approx(res.value, rel=RELTOL, abs=1e-12)
        assert abs(dual_gap(res)) <= 1e-9 * (1.0 + res.value)


def test_witness_extends_one_lipschitz_everywhere(rng):
    sp = random_finite_space(rng, 9)
    mu = random_vector(rng, sp, 4)
    res = norm_flow(mu)
    phi = witness_functional(res)
    for y in sp.points():
        for z in sp.points():
            assert abs(phi(y) - phi(z)) <= sp.distance(y, z) + 1e-9
    assert phi(sp.basepoint) == pytest.approx(0.0, abs=1e-12)
    # the extension agrees with the witness where both are defined
    for p, v in res.witness:
        assert phi(p) == pytest.approx(v, abs=1e-9)
    assert pair(phi, mu) == pytest.approx(res.value, rel=RELTOL, abs=1e-9)


def test_zero_vector_norm_and_certificates():
    sp = AlphaSpace([1.0, 2.0])
    res = norm_flow(make_free_vector(sp, []))
    assert res.value == 0.0
    assert res.plan == ()


# ---------------------------------------------------------------------------
# closed-form backends


def test_alpha_backend_matches_flow(rng):
    for _ in range(10):
        n = rng.randint(2, 12)
        sp = AlphaSpace([rng.uniform(0.1, 5.0) for _ in range(n)])
        pts = rng.sample(range(1, n + 1), rng.randint(1, min(n, 6)))
        mu = make_free_vector(sp, [(p, rng.uniform(-2, 2)) for p in pts])
        closed = norm_alpha(mu)
        assert closed == pytest.approx(norm_flow(mu).value, rel=RELTOL)
        expect = sum(abs(c) * sp.alpha(p) for p, c in mu.terms)
        assert closed == pytest.approx(expect, rel=1e-15)


def test_line_backend_matches_flow(rng):
    for _ in range(12):
        sp = IntervalSpace(-4.0, 4.0)
        pts = {round(rng.uniform(-4, 4), 3) for _ in range(rng.randint(1, 8))}
        pts.discard(0.0)
        mu = make_free_vector(sp, [(p, rng.uniform(-2, 2)) for p in pts])
        if mu.is_zero():
            continue
        assert norm_line(mu) == pytest.approx(norm_flow(mu).value, rel=RELTOL)


def test_line_backend_hand_value():
    # mass +1 at 2 and -1 at 0.5: one unit crosses [0.5, 2]
    sp = IntervalSpace(0.0, math.inf)
    mu = make_free_vector(sp, [(2.0, 1.0), (0.5, -1.0)])
    assert norm_line(mu) == pytest.approx(1.5, rel=1e-15)
    # basepoint absorbs imbalance: lone unit at 2 costs 2
    assert norm_line(delta(sp, 2.0)) == pytest.approx(2.0, rel=1e-15)


def test_backend_dispatch_and_rejection(rng):
    sp_line = IntervalSpace(0.0, 1.0)
    mu_line = make_free_vector(sp_line, [(0.5, 1.0)])
    assert free_norm(mu_line) == pytest.approx(0.5)
    assert free_norm(mu_line, backend="line") == pytest.approx(0.5)
    sp_alpha = AlphaSpace([2.0])
    mu_alpha = delta(sp_alpha, 1)
    assert free_norm(mu_alpha) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        free_norm(mu_line, backend="alpha")
    with pytest.raises(DomainError):
        norm_line(mu_alpha)
    with pytest.raises(DomainError):
        free_norm(mu_line, backend="martingale")


# ---------------------------------------------------------------------------
# exact rational mode


def test_exact_mode_matches_float_mode(rng):
    sp = random_finite_space(rng, 6)
    mu = make_free_vector(
        sp, [(p, float(Fraction(rng.randint(-8, 8), rng.randint(1, 9)))) for p in range(1, 5)]
    )
    plain = norm_flow(mu)
    exact = norm_flow(mu, exact=True)
    assert exact.exact
    assert exact.value == pytest.approx(plain.value, rel=1e-12)
    assert dual_gap(exact) == pytest.approx(0.0, abs=1e-12)


def test_exact_mode_is_exact_on_rational_data():
    # quarter-integer masses on integer-distance points: the optimum is rational,
    # and the witness phi(x) = x certifies it: 0.75*1 - 0.25*2 + 0.5*5 = 2.75
    sp = restrict_to_points(IntervalSpace(0.0, math.inf), [1.0, 2.0, 5.0])
    mu = make_free_vector(sp, [(1, 0.75), (2, -0.25), (3, 0.5)])
    res = norm_flow(mu, exact=True)
    assert res.value == 2.75
    assert lp_dual_norm(mu) == pytest.approx(2.75, rel=RELTOL)


def test_exact_mode_refuses_wide_support():
    sp = AlphaSpace([1.0] * 80)
    mu = make_free_vector(sp, [(p, 1.0) for p in range(1, 70)])
    with pytest.raises(DomainError):
        norm_flow(mu, exact=True)


# ---------------------------------------------------------------------------
# serialization


def test_norm_result_json_shape(rng):
    sp = random_finite_space(rng, 5)
    res = norm_flow(random_vector(rng, sp, 3))
    obj = norm_result_to_json(res)
    assert set(obj) >= {"value", "backend", "exact", "witness", "plan", "gap"}
    assert obj["backend"] == "flow"
    assert obj["gap"] == pytest.approx(0.0, abs=1e-9)


# ---------------------------------------------------------------------------
# property-based sweeps


@settings(deadline=None, max_examples=40)
@given(
    st.lists(
        st.tuples(
            st.integers(min_value=1, max_value=8),
            st.fractions(min_value=-4, max_value=4, max_denominator=16),
        ),
        min_size=1,
        max_size=8,
    ),
    st.lists(
        st.fractions(min_value=Fraction(1, 8), max_value=4, max_denominator=8),
        min_size=8,
        max_size=8,
    ),
)
def test_alpha_norm_is_weighted_l1(pairs, weights):
    sp = AlphaSpace([float(w) for w in weights])
    mu = make_free_vector(sp, [(p, float(c)) for p, c in pairs])
    closed = norm_alpha(mu)
    flow = norm_flow(mu, exact=True)
    assert closed == pytest.approx(flow.value, rel=1e-12, abs=1e-12)


@settings(deadline=None, max_examples=30)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_flow_value_never_beats_any_feasible_dual(seed):
    rng = random.Random(seed)
    sp = random_finite_space(rng, 6)
    mu = random_vector(rng, sp, 3)
    if mu.is_zero():
        return
    value = norm_flow(mu).value
    # any 1-Lipschitz functional gives a lower bound: try distance-to-base
    lower = abs(sum(c * sp.distance(p, 0) for p, c in mu.terms))
    assert value >= lower - 1e-9 * (1 + value)
