"""Basepoint-fixing Lipschitz self-maps in four presentations, their
Lipschitz constants with attaining certificates, and iteration of points,
vectors and whole maps.

A map presentation matches its space: an index table on a finite space, an
index rule on a sequence space, a continuous piecewise-linear function on an
interval, a coordinate rule on a lattice box.  Lipschitz constants are exact
wherever the presentation allows exhaustion (finite tables, piecewise-linear
slopes, fully enumerated boxes) and explicitly window- or sample-limited
otherwise.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .spaces import (
    AlphaSpace,
    DomainError,
    FiniteSpace,
    IntervalSpace,
    LatticeBox,
    PrefixExhausted,
    same_space,
)
from .vectors import FreeVector, push_forward

__all__ = [
    "LipEstimate",
    "FiniteMap",
    "AlphaMap",
    "PiecewiseLinearMap",
    "LatticeMap",
    "lip_constant",
    "iterate_point",
    "iterate_vector",
    "iterate_map",
    "compose",
    "operator_norm_estimate",
    "map_to_json",
    "map_from_json",
]

BREAKPOINT_BUDGET = 100_000


@dataclass(frozen=True)
class LipEstimate:
    value: float
    witness: object  # attaining pair / index / segment
    exact: bool
    note: str = ""


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class FiniteMap:
    space: FiniteSpace
    table: tuple[int, ...]

    kind = "finite-table"

    def __post_init__(self):
        if len(self.table) != self.space.size:
            raise DomainError("map table must cover every point of the space")
        for i, j in enumerate(self.table):
            self.space.check_point(j)
        if self.table[self.space.basepoint] != self.space.basepoint:
            raise DomainError("map must fix the basepoint")

    def apply(self, p) -> int:
        return self.table[self.space.check_point(p)]


@dataclass(frozen=True)
class AlphaMap:
    """Index rule on a sequence space.  The rule must fix 0; applications
    whose image escapes the materialized prefix fail loudly."""

    space: AlphaSpace
    rule: Callable[[int], int]
    name: str = ""
    rule_json: dict | None = field(default=None, compare=False)

    kind = "alpha-rule"

    def __post_init__(self):
        if self.rule(0) != 0:
            raise DomainError("map must fix the basepoint 0")

    def apply(self, p) -> int:
        q = int(self.rule(self.space.check_point(p)))
        if q < 0:
            raise DomainError(f"rule sent {p} to the negative index {q}")
        if q > self.space.prefix_length:
            raise PrefixExhausted(
                f"rule sent {p} to {q}, beyond the materialized prefix "
                f"of length {self.space.prefix_length}"
            )
        return q


class PiecewiseLinearMap:
    """Continuous piecewise-linear self-map of an interval, fixing 0.

    Given by breakpoints (x_i, y_i); beyond the extreme breakpoints the map
    continues with the declared end slopes (required exactly when the
    corresponding endpoint is infinite).  Everything downstream -- exact
    Lipschitz constants, exact preimages, sign analysis -- leans on this
    closed presentation.
    """

    kind = "piecewise-linear"

    def __init__(self, space: IntervalSpace, breakpoints: Sequence[tuple[float, float]],
                 left_slope: float | None = None, right_slope: float | None = None):
        if not breakpoints:
            raise DomainError("need at least one breakpoint")
        xs = [float(x) for x, _ in breakpoints]
        ys = [float(y) for _, y in breakpoints]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("breakpoint abscissae must be strictly increasing")
        if math.isfinite(space.a):
            if xs[0] != space.a:
                raise DomainError(f"first breakpoint must sit at the left endpoint {space.a}")
            if left_slope is not None:
                raise DomainError("left slope is only for an unbounded left end")
            left_slope = 0.0
        elif left_slope is None:
            raise DomainError("unbounded left end needs an explicit left slope")
        if math.isfinite(space.b):
            if xs[-1] != space.b:
                raise DomainError(f"last breakpoint must sit at the right endpoint {space.b}")
            if right_slope is not None:
                raise DomainError("right slope is only for an unbounded right end")
            right_slope = 0.0
        elif right_slope is None:
            raise DomainError("unbounded right end needs an explicit right slope")

        self.space = space
        self.xs = tuple(xs)
        self.ys = tuple(ys)
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)
        self._seg_slopes = tuple(
            (y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(breakpoints, breakpoints[1:])
        )

        for y in ys:
            if not (space.a <= y <= space.b):
                raise DomainError(f"breakpoint value {y} leaves the interval")
        if not math.isfinite(space.b) and self.right_slope < 0 and not math.isfinite(space.a):
            pass
        elif not math.isfinite(space.b) and self.right_slope < 0:
            raise DomainError("right tail escapes the interval downward")
        if not math.isfinite(space.a) and self.left_slope < 0 and not math.isfinite(space.b):
            pass
        elif not math.isfinite(space.a) and self.left_slope < 0:
            raise DomainError("left tail escapes the interval upward")
        if self.eval(0.0) != 0.0:
            raise DomainError(f"map must fix the basepoint 0, got f(0) = {self.eval(0.0)!r}")

    def eval(self, x: float) -> float:
        xs = self.xs
        if x <= xs[0]:
            return self.ys[0] + self.left_slope * (x - xs[0])
        if x >= xs[-1]:
            return self.ys[-1] + self.right_slope * (x - xs[-1])
        i = bisect_right(xs, x) - 1
        return self.ys[i] + self._seg_slopes[i] * (x - xs[i])

    def apply(self, p) -> float:
        y = self.eval(self.space.check_point(p))
        return self.space.check_point(y)

    def slopes(self) -> tuple[float, ...]:
        out = list(self._seg_slopes)
        if not math.isfinite(self.space.a):
            out.insert(0, self.left_slope)
        if not math.isfinite(self.space.b):
            out.append(self.right_slope)
        return tuple(out) if out else (0.0,)

    # -- exact root machinery -------------------------------------------------

    def pieces(self):
        """Yield (lo, hi, value_at_lo, slope) covering the whole domain; the
        end rays use +-inf for the missing bound."""
        if not math.isfinite(self.space.a):
            yield (-math.inf, self.xs[0], self.ys[0], self.left_slope)
        for i in range(len(self.xs) - 1):
            yield (self.xs[i], self.xs[i + 1], self.ys[i], self._seg_slopes[i])
        if not math.isfinite(self.space.b):
            yield (self.xs[-1], math.inf, self.ys[-1], self.right_slope)

    def preimages(self, target: float, lo: float = -math.inf, hi: float = math.inf) -> list[float]:
        """Isolated solutions of f(x) = target within [lo, hi], plus the left
        endpoint of every constant piece equal to the target.  Sorted."""
        roots: list[float] = []
        for plo, phi, ylo, s in self.pieces():
            anchor = plo if math.isfinite(plo) else phi
            if s == 0.0:
                if ylo == target:
                    cand = max(plo, lo)
                    if cand <= min(phi, hi) and math.isfinite(cand):
                        roots.append(cand)
                continue
            yref = ylo if math.isfinite(plo) else self.eval(anchor)
            x = anchor + (target - yref) / s
            if plo <= x <= phi and lo <= x <= hi:
                roots.append(x)
        out = sorted(set(roots))
        return out

    def smallest_preimage(self, target: float, lo: float, hi: float) -> float:
        """Least x in (lo, hi] with f(x) = target; raises if there is none."""
        for x in self.preimages(target, lo, hi):
            if lo < x <= hi:
                return x
        raise DomainError(f"no preimage of {target} inside ({lo}, {hi}]")


@dataclass(frozen=True)
class LatticeMap:
    space: LatticeBox
    rule: Callable[[tuple[int, ...]], tuple[int, ...]]
    name: str = ""
    rule_json: dict | None = field(default=None, compare=False)

    kind = "lattice-rule"

    def __post_init__(self):
        o = self.space.basepoint
        if tuple(self.rule(o)) != o:
            raise DomainError("map must fix the origin")

    def apply(self, p):
        q = tuple(int(c) for c in self.rule(self.space.check_point(p)))
        return self.space.check_point(q)


LipMap = FiniteMap | AlphaMap | PiecewiseLinearMap | LatticeMap


# ---------------------------------------------------------------------------
# composition and iteration


def compose(f, g):
    """The map x -> f(g(x)); both over one space, presentation preserved."""
    if not same_space(f.space, g.space):
        raise DomainError("cannot compose maps over different spaces")
    if isinstance(f, FiniteMap) and isinstance(g, FiniteMap):
        return FiniteMap(f.space, tuple(f.table[j] for j in g.table))
    if isinstance(f, PiecewiseLinearMap) and isinstance(g, PiecewiseLinearMap):
        return _compose_pl(f, g)
    if isinstance(f, AlphaMap) and isinstance(g, AlphaMap):
        return AlphaMap(f.space, lambda n, f=f, g=g: f.rule(g.rule(n)),
                        name=f"{f.name or 'f'}*{g.name or 'g'}")
    if isinstance(f, LatticeMap) and isinstance(g, LatticeMap):
        return LatticeMap(f.space, lambda p, f=f, g=g: f.rule(g.rule(p)),
                          name=f"{f.name or 'f'}*{g.name or 'g'}")
    raise DomainError("mixed map presentations cannot be composed")


def _compose_pl(f: PiecewiseLinearMap, g: PiecewiseLinearMap,
                budget: int = BREAKPOINT_BUDGET) -> PiecewiseLinearMap:
    space = f.space
    knots = set(g.xs)
    for bx in f.xs:
        for x in g.preimages(bx):
            knots.add(x)
    if math.isfinite(space.a):
        knots.add(space.a)
    if math.isfinite(space.b):
        knots.add(space.b)
    knots = sorted(k for k in knots if space.a <= k <= space.b)
    if len(knots) > budget:
        raise DomainError(
            f"composition needs {len(knots)} breakpoints, over the budget {budget}"
        )
    bps = [(x, f.eval(g.eval(x))) for x in knots]
    ls = rs = None
    if not math.isfinite(space.a):
        # a constant left tail composes to a constant; a monotone one lands on
        # the matching tail of f once past the last collected knot
        gl = g.left_slope
        if gl > 0:
            ls = f.left_slope * gl
        elif gl < 0:
            ls = f.right_slope * gl
        else:
            ls = 0.0
    if not math.isfinite(space.b):
        gr = g.right_slope
        if gr > 0:
            rs = f.right_slope * gr
        elif gr < 0:
            rs = f.left_slope * gr
        else:
            rs = 0.0
    return PiecewiseLinearMap(space, bps, left_slope=ls, right_slope=rs)


def iterate_map(f, n: int, budget: int = BREAKPOINT_BUDGET):
    """The n-th iterate as a map object (n >= 1); finite tables and
    piecewise-linear presentations are flattened, rules stay lazy."""
    if n < 1:
        raise DomainError("iterate_map needs n >= 1")
    if isinstance(f, AlphaMap):
        return AlphaMap(f.space, lambda m, f=f, n=n: _iter_rule(f.rule, m, n),
                        name=f"{f.name or 'f'}^{n}")
    if isinstance(f, LatticeMap):
        return LatticeMap(f.space, lambda p, f=f, n=n: _iter_rule(f.rule, p, n),
                          name=f"{f.name or 'f'}^{n}")
    out = f
    for _ in range(n - 1):
        if isinstance(f, PiecewiseLinearMap):
            out = _compose_pl(f, out, budget=budget)
        else:
            out = compose(f, out)
    return out


def _iter_rule(rule, x, n):
    for _ in range(n):
        x = rule(x)
    return x


def iterate_point(f, x, n: int):
    """f^n(x) for n >= 0, validating every intermediate point."""
    if n < 0:
        raise DomainError("cannot iterate a negative number of times")
    p = f.space.check_point(x)
    for _ in range(n):
        p = f.apply(p)
    return p


def iterate_vector(f, mu: FreeVector, n: int) -> FreeVector:
    """Image of mu under the n-th power of the linearized map."""
    if n < 0:
        raise DomainError("cannot iterate a negative number of times")
    out = mu
    for _ in range(n):
        out = push_forward(f, out)
    return out


# ---------------------------------------------------------------------------
# Lipschitz constants


def lip_constant(f, window: int | None = None, pair_budget: int = 2_000_000,
                 rng: random.Random | None = None) -> LipEstimate:
    """Lipschitz constant with an attaining certificate.

    Exact for finite tables (all pairs), piecewise-linear maps (slopes) and
    lattice boxes small enough to enumerate under ``pair_budget``.  For
    sequence-space rules the supremum is taken over indices 1..window
    (default: the whole materialized prefix) and reported as window-limited.
    """
    if isinstance(f, FiniteMap):
        sp = f.space
        best, wit = 0.0, None
        for i in range(sp.size):
            for j in range(i + 1, sp.size):
                r = sp.distance(f.table[i], f.table[j]) / sp.distance(i, j)
                if r > best:
                    best, wit = r, (i, j)
        return LipEstimate(best, wit, exact=True)

    if isinstance(f, AlphaMap):
        sp = f.space
        n_max = sp.prefix_length if window is None else window
        if n_max > sp.prefix_length:
            raise PrefixExhausted(
                f"window {n_max} exceeds the materialized prefix {sp.prefix_length}"
            )
        best, wit = 0.0, None
        for n in range(1, n_max + 1):
            q = f.apply(n)
            if q == 0:
                continue
            r = sp.alpha(q) / sp.alpha(n)
            if r > best:
                best, wit = r, n
        return LipEstimate(best, wit, exact=False, note=f"supremum over indices 1..{n_max}")

    if isinstance(f, PiecewiseLinearMap):
        slopes = f.slopes()
        vals = [abs(s) for s in slopes]
        best = max(vals)
        return LipEstimate(best, vals.index(best), exact=True)

    if isinstance(f, LatticeMap):
        sp = f.space
        size = sp.size()
        if size * size <= pair_budget:
            pts = list(sp.points())
            best, wit = 0.0, None
            for i, p in enumerate(pts):
                fp = f.apply(p)
                for q in pts[i + 1:]:
                    r = sp.distance(fp, f.apply(q)) / sp.distance(p, q)
                    if r > best:
                        best, wit = r, (p, q)
            return LipEstimate(best, wit, exact=True)
        rng = rng or random.Random(0)
        pts = list(sp.points())
        best, wit = 0.0, None
        for _ in range(pair_budget):
            p, q = rng.sample(pts, 2)
            r = sp.distance(f.apply(p), f.apply(q)) / sp.distance(p, q)
            if r > best:
                best, wit = r, (p, q)
        return LipEstimate(best, wit, exact=False, note=f"lower bound from {pair_budget} sampled pairs")

    raise DomainError(f"not a recognized map presentation: {f!r}")


def operator_norm_estimate(f, pair_budget: int = 50_000, points: Sequence | None = None,
                           rng: random.Random | None = None) -> LipEstimate:
    """Norm of the linearized operator probed on normalized two-point vectors
    ``(delta(x) - delta(y)) / d(x, y)``, each pushed forward and measured with
    the transport solver.  Exact (equal to the Lipschitz constant) when every
    pair of the chosen point set is enumerated; a lower bound otherwise.
    """
    from .norms import norm_flow
    from .vectors import make_free_vector

    space = f.space
    if points is None:
        if isinstance(space, FiniteSpace):
            points = list(space.points())
        elif isinstance(space, AlphaSpace):
            points = list(range(space.prefix_length + 1))
        elif isinstance(space, LatticeBox):
            points = list(space.points())
        else:
            raise DomainError("interval spaces need an explicit finite point sample")
    pts = list(points)
    n = len(pts)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    exhaustive = len(all_pairs) <= pair_budget
    if not exhaustive:
        rng = rng or random.Random(0)
        all_pairs = [
            tuple(sorted(rng.sample(range(n), 2))) for _ in range(pair_budget)
        ]

    best, wit = 0.0, None
    for i, j in all_pairs:
        x, y = pts[i], pts[j]
        dxy = space.distance(x, y)
        mol = make_free_vector(space, [(x, 1.0), (y, -1.0)])
        val = norm_flow(push_forward(f, mol)).value / dxy
        if val > best:
            best, wit = val, (x, y)
    note = "" if exhaustive else f"lower bound from {len(all_pairs)} sampled pairs"
    return LipEstimate(best, wit, exact=exhaustive, note=note)


# ---------------------------------------------------------------------------
# JSON wire format


def map_to_json(f) -> dict:
    if isinstance(f, FiniteMap):
        return {"kind": "finite-table", "table": list(f.table)}
    if isinstance(f, PiecewiseLinearMap):
        out = {"kind": "piecewise-linear",
               "breakpoints": [[x, y] for x, y in zip(f.xs, f.ys)]}
        if not math.isfinite(f.space.a):
            out["left_slope"] = f.left_slope
        if not math.isfinite(f.space.b):
            out["right_slope"] = f.right_slope
        return out
    if isinstance(f, (AlphaMap, LatticeMap)):
        if f.rule_json is None:
            raise DomainError(
                "this rule-backed map carries no serializable description"
            )
        return {"kind": f.kind, **f.rule_json}
    raise TypeError(f"not a map: {f!r}")


def map_from_json(obj: dict, space):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DomainError("map object must be a dict with a 'kind' field")
    kind = obj["kind"]
    if kind == "finite-table":
        if not isinstance(space, FiniteSpace):
            raise DomainError("finite-table maps need a finite space")
        return FiniteMap(space, tuple(int(i) for i in obj["table"]))
    if kind == "piecewise-linear":
        if not isinstance(space, IntervalSpace):
            raise DomainError("piecewise-linear maps need an interval space")
        bps = [(float(x), float(y)) for x, y in obj["breakpoints"]]
        return PiecewiseLinearMap(space, bps,
                                  left_slope=obj.get("left_slope"),
                                  right_slope=obj.get("right_slope"))
    if kind == "alpha-rule":
        if not isinstance(space, AlphaSpace):
            raise DomainError("alpha rules need a sequence space")
        return _alpha_rule_from_json(obj, space)
    if kind == "lattice-rule":
        if not isinstance(space, LatticeBox):
            raise DomainError("lattice rules need a lattice box")
        return _lattice_rule_from_json(obj, space)
    raise DomainError(f"unknown map kind {kind!r}")


def _alpha_rule_from_json(obj: dict, space: AlphaSpace) -> AlphaMap:
    rule = obj.get("rule")
    if rule == "forward-shift":
        return AlphaMap(space, lambda n: 0 if n == 0 else n + 1,
                        name="forward-shift", rule_json={"rule": "forward-shift"})
    if rule == "table":
        table = [int(v) for v in obj["table"]]
        if not table or table[0] != 0:
            raise DomainError("alpha table must start with 0 -> 0")

        def apply_table(n, table=tuple(table)):
            if n >= len(table):
                raise PrefixExhausted(f"table rule covers indices up to {len(table) - 1}")
            return table[n]

        return AlphaMap(space, apply_table, name="table",
                        rule_json={"rule": "table", "table": table})
    raise DomainError(f"unknown alpha rule {rule!r}")


def _lattice_rule_from_json(obj: dict, space: LatticeBox) -> LatticeMap:
    if "matrix" not in obj:
        raise DomainError("lattice rules are given by an integer matrix")
    mat = [[int(v) for v in row] for row in obj["matrix"]]
    if len(mat) != space.dim or any(len(r) != space.dim for r in mat):
        raise DomainError("matrix shape must match the box dimension")

    def apply_mat(p, mat=tuple(tuple(r) for r in mat)):
        return tuple(sum(m * c for m, c in zip(row, p)) for row in mat)

    return LatticeMap(space, apply_mat, name="linear",
                      rule_json={"rule": "matrix", "matrix": [list(r) for r in mat]})
