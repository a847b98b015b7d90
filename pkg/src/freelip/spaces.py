"""Pointed metric spaces in four concrete presentations.

Every space designates a basepoint and exposes the same small interface:
``contains``, ``check_point``, ``distance``, ``point_key`` (a sort key used
for canonical ordering of supports) and ``kind``.  Points are carried as
plain payloads -- an index for finite and sequence spaces, a float for
intervals, an integer tuple for lattice boxes -- and are validated by the
space that owns them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "PrefixExhausted",
    "MetricViolation",
    "MetricCheck",
    "validate_finite_metric",
    "FiniteSpace",
    "AlphaSpace",
    "IntervalSpace",
    "LatticeBox",
    "restrict_to_points",
    "same_space",
    "space_to_json",
    "space_from_json",
]


class DomainError(ValueError):
    """A point, map or vector fell outside the space that owns it."""


class PrefixExhausted(DomainError):
    """An operation needed sequence-space data beyond the materialized prefix."""


# ---------------------------------------------------------------------------
# metric validation


@dataclass(frozen=True)
class MetricViolation:
    kind: str  # "shape" | "symmetry" | "diagonal" | "negative" | "zero-off-diagonal" | "triangle"
    where: tuple
    detail: str


@dataclass(frozen=True)
class MetricCheck:
    ok: bool
    violations: tuple[MetricViolation, ...] = ()

    def first(self) -> MetricViolation | None:
        return self.violations[0] if self.violations else None


def validate_finite_metric(matrix: Sequence[Sequence[float]], tol: float = 1e-12) -> MetricCheck:
    """Check symmetry, zero diagonal, positivity and all triangle inequalities.

    ``tol`` is an absolute slack applied to the triangle check only; pass 0.0
    for matrices that are exact by construction.  Violations are reported with
    the offending entries/triples rather than raising.
    """
    bad: list[MetricViolation] = []
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return MetricCheck(False, (MetricViolation("shape", d.shape, "matrix must be square"),))
    n = d.shape[0]
    if not np.all(np.isfinite(d)):
        i, j = map(int, np.argwhere(~np.isfinite(d))[0])
        bad.append(MetricViolation("non-finite", (i, j), f"non-finite entry d[{i}][{j}]"))
        return MetricCheck(False, tuple(bad))
    for i in range(n):
        if d[i, i] != 0.0:
            bad.append(MetricViolation("diagonal", (i,), f"d[{i}][{i}] = {d[i, i]!r} != 0"))
    for i, j in np.argwhere(d != d.T):
        if i < j:
            bad.append(MetricViolation("symmetry", (int(i), int(j)), f"d[{i}][{j}] != d[{j}][{i}]"))
        if len(bad) >= 4:
            break
    neg = np.argwhere(d < 0)
    for i, j in neg[: 4]:
        bad.append(MetricViolation("negative", (int(i), int(j)), f"d[{i}][{j}] = {d[i, j]!r} < 0"))
    off = d + np.eye(n)  # lift the diagonal so only off-diagonal zeros remain
    zz = np.argwhere(off == 0.0)
    for i, j in zz[: 4]:
        bad.append(MetricViolation("zero-off-diagonal", (int(i), int(j)), f"d[{i}][{j}] = 0 with {i} != {j}"))
    if bad:
        return MetricCheck(False, tuple(bad))
    for k in range(n):
        slack = d - (d[:, [k]] + d[[k], :])
        if np.any(slack > tol):
            i, j = map(int, np.argwhere(slack > tol)[0])
            bad.append(
                MetricViolation(
                    "triangle",
                    (i, j, k),
                    f"d[{i}][{j}] = {d[i, j]!r} > d[{i}][{k}] + d[{k}][{j}] = {d[i, k] + d[k, j]!r}",
                )
            )
            if len(bad) >= 4:
                break
    return MetricCheck(not bad, tuple(bad))


# ---------------------------------------------------------------------------
# the four presentations


@dataclass(frozen=True)
class FiniteSpace:
    """Finite pointed metric space given by a full distance matrix.

    Points are the indices ``0..n-1``; ``labels`` optionally carries the
    payloads the points had in an ambient space they were restricted from.
    """

    matrix: tuple[tuple[float, ...], ...]
    basepoint: int = 0
    labels: tuple | None = None

    kind = "finite"

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise DomainError("distance matrix must be square")
        if not (0 <= self.basepoint < n):
            raise DomainError(f"basepoint {self.basepoint} outside 0..{n-1}")
        if self.labels is not None and len(self.labels) != n:
            raise DomainError("labels must align with the matrix")
        check = validate_finite_metric(self.matrix)
        if not check.ok:
            raise DomainError(f"not a metric: {check.first().detail}")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def points(self) -> range:
        return range(self.size)

    def contains(self, p) -> bool:
        return isinstance(p, (int, np.integer)) and not isinstance(p, bool) and 0 <= p < self.size

    def check_point(self, p) -> int:
        if not self.contains(p):
            raise DomainError(f"point {p!r} not in finite space of size {self.size}")
        return int(p)

    def distance(self, p, q) -> float:
        return self.matrix[self.check_point(p)][self.check_point(q)]

    def point_key(self, p):
        return int(p)


def _as_readonly_array(values: Iterable[float]) -> np.ndarray:
    arr = np.asarray(list(values), dtype=float)
    arr.setflags(write=False)
    return arr


class AlphaSpace:
    """The natural numbers with the two-ray metric driven by a positive weight
    sequence: d(n, 0) = alpha_n and d(i, j) = alpha_i + alpha_j for distinct
    nonzero i, j.

    Only a finite prefix alpha_1..alpha_N is materialized; the points of the
    space are 0..N and anything needing weights past the prefix fails loudly
    instead of extrapolating.  The basepoint 0 carries no weight of its own.
    """

    kind = "alpha"
    basepoint = 0

    def __init__(self, alpha: Iterable[float]):
        arr = _as_readonly_array(alpha)
        if arr.size == 0:
            raise DomainError("alpha prefix must be nonempty")
        if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
            bad = int(np.argwhere(~((arr > 0) & np.isfinite(arr)))[0, 0])
            raise DomainError(f"alpha_{bad + 1} = {arr[bad]!r} is not a positive real")
        self._alpha = arr

    @property
    def prefix_length(self) -> int:
        return int(self._alpha.size)

    def alpha(self, n: int) -> float:
        """Weight alpha_n for 1 <= n <= prefix length."""
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
            raise DomainError(f"alpha index {n!r} must be a positive integer")
        if n > self._alpha.size:
            raise PrefixExhausted(
                f"alpha_{n} requested but only {self._alpha.size} terms are materialized"
            )
        return float(self._alpha[n - 1])

    def alpha_prefix(self) -> np.ndarray:
        return self._alpha

    def contains(self, p) -> bool:
        return (
            isinstance(p, (int, np.integer))
            and not isinstance(p, bool)
            and 0 <= p <= self._alpha.size
        )

    def check_point(self, p) -> int:
        if not self.contains(p):
            if isinstance(p, (int, np.integer)) and not isinstance(p, bool) and p > self._alpha.size:
                raise PrefixExhausted(
                    f"point {p} lies past the materialized prefix of length {self._alpha.size}"
                )
            raise DomainError(
                f"point {p!r} not in sequence space with prefix length {self._alpha.size}"
            )
        return int(p)

    def distance(self, p, q) -> float:
        i, j = self.check_point(p), self.check_point(q)
        if i == j:
            return 0.0
        if i == 0:
            return self.alpha(j)
        if j == 0:
            return self.alpha(i)
        return self.alpha(i) + self.alpha(j)

    def point_key(self, p):
        return int(p)

    def __eq__(self, other):
        return isinstance(other, AlphaSpace) and (
            self._alpha is other._alpha or np.array_equal(self._alpha, other._alpha)
        )

    def __hash__(self):
        a = self._alpha
        return hash(("alpha", a.size, float(a[0]), float(a[-1])))

    def __repr__(self):
        return f"AlphaSpace(prefix_length={self._alpha.size})"


@dataclass(frozen=True)
class IntervalSpace:
    """A real interval containing 0, with |x - y| and basepoint 0.

    Endpoints may be infinite.  Points are floats.
    """

    a: float = 0.0
    b: float = math.inf

    kind = "interval"
    basepoint = 0.0

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b):
            raise DomainError("interval endpoints must not be NaN")
        if not (self.a <= 0.0 <= self.b):
            raise DomainError(f"interval [{self.a}, {self.b}] must contain the basepoint 0")
        if self.a >= self.b:
            raise DomainError("interval must have positive length")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)

    def contains(self, p) -> bool:
        return isinstance(p, (float, int, np.floating, np.integer)) and not isinstance(
            p, bool
        ) and math.isfinite(p) and self.a <= p <= self.b

    def check_point(self, p) -> float:
        if not self.contains(p):
            raise DomainError(f"point {p!r} not in interval [{self.a}, {self.b}]")
        return float(p)

    def distance(self, p, q) -> float:
        return abs(self.check_point(p) - self.check_point(q))

    def point_key(self, p):
        return float(p)


@dataclass(frozen=True)
class LatticeBox:
    """Integer box in Z^d with the taxicab metric; basepoint is the origin."""

    bounds: tuple[tuple[int, int], ...]

    kind = "lattice"

    def __post_init__(self):
        if not self.bounds:
            raise DomainError("lattice box needs at least one axis")
        for ax, (lo, hi) in enumerate(self.bounds):
            if not (lo <= 0 <= hi):
                raise DomainError(f"axis {ax} bounds [{lo}, {hi}] must contain 0")
            if lo == hi == 0 and len(self.bounds) == 1:
                pass  # the degenerate one-point box is still a pointed space

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def basepoint(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def contains(self, p) -> bool:
        if not isinstance(p, tuple) or len(p) != self.dim:
            return False
        return all(
            isinstance(c, (int, np.integer)) and not isinstance(c, bool) and lo <= c <= hi
            for c, (lo, hi) in zip(p, self.bounds)
        )

    def check_point(self, p) -> tuple[int, ...]:
        if not self.contains(p):
            raise DomainError(f"point {p!r} not in lattice box {self.bounds}")
        return tuple(int(c) for c in p)

    def distance(self, p, q) -> float:
        pp, qq = self.check_point(p), self.check_point(q)
        return float(sum(abs(a - b) for a, b in zip(pp, qq)))

    def point_key(self, p):
        return tuple(int(c) for c in p)

    def points(self):
        """Enumerate the whole box (row-major); intended for small boxes."""
        import itertools

        ranges = [range(lo, hi + 1) for lo, hi in self.bounds]
        return itertools.product(*ranges)

    def size(self) -> int:
        n = 1
        for lo, hi in self.bounds:
            n *= hi - lo + 1
        return n


Space = FiniteSpace | AlphaSpace | IntervalSpace | LatticeBox


def same_space(s, t) -> bool:
    return s is t or s == t


# ---------------------------------------------------------------------------
# restriction


def restrict_to_points(space, points: Sequence) -> FiniteSpace:
    """Finite restriction to the given points plus the basepoint.

    The basepoint is inserted (at index 0) whether or not it was listed.
    Distances are copied bit-for-bit from the ambient space; the original
    payloads are kept as labels.  Duplicate points collapse; an empty point
    list is refused.
    """
    if len(points) == 0:
        raise DomainError("cannot restrict to an empty point list")
    base = space.basepoint
    seen = {space.point_key(base): base}
    for p in points:
        seen.setdefault(space.point_key(space.check_point(p)), p)
    keys = sorted(k for k in seen if k != space.point_key(base))
    ordered = [base] + [seen[k] for k in keys]
    matrix = tuple(
        tuple(space.distance(p, q) for q in ordered) for p in ordered
    )
    return FiniteSpace(matrix=matrix, basepoint=0, labels=tuple(ordered))


# ---------------------------------------------------------------------------
# JSON wire format


def _endpoint_to_json(x: float):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return x


def _endpoint_from_json(v) -> float:
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return float(v)


def space_to_json(space) -> dict:
    if isinstance(space, FiniteSpace):
        out: dict[str, Any] = {
            "kind": "finite",
            "matrix": [list(row) for row in space.matrix],
            "basepoint": space.basepoint,
        }
        if space.labels is not None:
            out["labels"] = [list(l) if isinstance(l, tuple) else l for l in space.labels]
        return out
    if isinstance(space, AlphaSpace):
        return {"kind": "alpha", "alpha": [float(a) for a in space.alpha_prefix()]}
    if isinstance(space, IntervalSpace):
        return {"kind": "interval", "a": _endpoint_to_json(space.a), "b": _endpoint_to_json(space.b)}
    if isinstance(space, LatticeBox):
        return {"kind": "lattice", "bounds": [list(b) for b in space.bounds]}
    raise TypeError(f"not a space: {space!r}")


def space_from_json(obj: dict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DomainError("space object must be a dict with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "finite":
            labels = obj.get("labels")
            if labels is not None:
                labels = tuple(tuple(l) if isinstance(l, list) else l for l in labels)
            return FiniteSpace(
                matrix=tuple(tuple(float(x) for x in row) for row in obj["matrix"]),
                basepoint=int(obj.get("basepoint", 0)),
                labels=labels,
            )
        if kind == "alpha":
            return AlphaSpace(obj["alpha"])
        if kind == "interval":
            return IntervalSpace(_endpoint_from_json(obj.get("a", 0.0)), _endpoint_from_json(obj.get("b", "inf")))
        if kind == "lattice":
            return LatticeBox(tuple((int(lo), int(hi)) for lo, hi in obj["bounds"]))
    except KeyError as exc:
        raise DomainError(f"space object missing field {exc}") from exc
    raise DomainError(f"unknown space kind {kind!r}")
