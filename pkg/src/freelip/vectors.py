"""Finitely supported elements of the free transportation space over a
pointed metric space, written as combinations of point evaluations
``sum_i c_i * delta(x_i)``.

Vectors are kept canonical: support sorted by the space's point key,
duplicates merged, the basepoint (whose evaluation is the zero vector)
removed, and coefficients below a drop tolerance discarded.  All operations
return new vectors; nothing here mutates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .spaces import DomainError, same_space

__all__ = [
    "FreeVector",
    "Functional",
    "make_free_vector",
    "delta",
    "linear_combine",
    "push_forward",
    "pair",
]

DROP_TOL = 1e-15


@dataclass(frozen=True)
class FreeVector:
    space: object
    terms: tuple[tuple[object, float], ...]

    def support(self) -> tuple:
        return tuple(p for p, _ in self.terms)

    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for _, c in self.terms)

    def coefficient(self, p) -> float:
        key = self.space.point_key(p)
        for q, c in self.terms:
            if self.space.point_key(q) == key:
                return c
        return 0.0

    def total_mass(self) -> float:
        return sum(c for _, c in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)


def make_free_vector(space, pairs: Iterable[tuple[object, float]], drop_tol: float = DROP_TOL) -> FreeVector:
    """Canonicalize ``pairs`` of (point, coefficient) into a FreeVector.

    Points are validated against the space and merged under exact coordinate
    equality; the basepoint and any coefficient with |c| < drop_tol vanish.
    """
    acc: dict = {}
    rep: dict = {}
    for p, c in pairs:
        q = space.check_point(p)
        k = space.point_key(q)
        acc[k] = acc.get(k, 0.0) + float(c)
        rep.setdefault(k, q)
    base_key = space.point_key(space.basepoint)
    acc.pop(base_key, None)
    terms = tuple(
        (rep[k], acc[k]) for k in sorted(acc) if abs(acc[k]) >= drop_tol
    )
    return FreeVector(space=space, terms=terms)


def delta(space, p) -> FreeVector:
    """The evaluation vector of a single point (zero if p is the basepoint)."""
    return make_free_vector(space, [(p, 1.0)])


def linear_combine(parts: Sequence[tuple[float, FreeVector]], drop_tol: float = DROP_TOL) -> FreeVector:
    """``sum_j a_j * mu_j`` for vectors over one common space."""
    if not parts:
        raise DomainError("linear_combine needs at least one term")
    space = parts[0][1].space
    pairs = []
    for a, mu in parts:
        if not same_space(mu.space, space):
            raise DomainError("cannot combine vectors over different spaces")
        pairs.extend((p, a * c) for p, c in mu.terms)
    return make_free_vector(space, pairs, drop_tol=drop_tol)


def push_forward(f, mu: FreeVector, drop_tol: float = DROP_TOL) -> FreeVector:
    """Image of ``mu`` under the linearization of the map ``f``:
    ``sum c_i delta(f(x_i))``, recanonicalized (collisions merge, images at
    the basepoint vanish)."""
    if not same_space(f.space, mu.space):
        raise DomainError("map and vector live over different spaces")
    return make_free_vector(mu.space, [(f.apply(p), c) for p, c in mu.terms], drop_tol=drop_tol)


@dataclass(frozen=True)
class Functional:
    """A real rule on points vanishing at the basepoint, with a declared
    Lipschitz bound.  The bound is a promise used in duality estimates, not
    something verified pointwise at construction (only the basepoint value
    is checked)."""

    space: object
    fn: Callable[[object], float]
    lip_bound: float
    name: str = ""

    def __post_init__(self):
        v = self.fn(self.space.basepoint)
        if abs(v) > 1e-12:
            raise DomainError(f"functional must vanish at the basepoint, got {v!r}")
        if not (self.lip_bound >= 0):
            raise DomainError("Lipschitz bound must be a nonnegative real")

    def __call__(self, p) -> float:
        return float(self.fn(self.space.check_point(p)))


def pair(phi: Functional, mu: FreeVector) -> float:
    """Duality pairing ``<phi, mu> = sum c_i phi(x_i)``."""
    if not same_space(phi.space, mu.space):
        raise DomainError("functional and vector live over different spaces")
    return sum(c * phi(p) for p, c in mu.terms)


# ---------------------------------------------------------------------------
# JSON wire format


def point_to_json(p):
    if isinstance(p, tuple):
        return [int(c) for c in p]
    if isinstance(p, bool) or not isinstance(p, (int, float)):
        # numpy scalars subclass int/float where it matters; anything else
        # (dicts, strings, ...) is a caller bug, not a serializable point.
        raise TypeError(f"not a point payload: {p!r}")
    return p


def point_from_json(v):
    if isinstance(v, list):
        return tuple(int(c) for c in v)
    return v


def vector_to_json(mu: FreeVector) -> dict:
    from .spaces import space_to_json

    return {
        "space": space_to_json(mu.space),
        "terms": [[point_to_json(p), c] for p, c in mu.terms],
    }


def vector_from_json(obj: dict, space=None) -> FreeVector:
    from .spaces import space_from_json

    if not isinstance(obj, dict) or "terms" not in obj:
        raise DomainError("vector object must be a dict with a 'terms' field")
    if space is None:
        if "space" not in obj:
            raise DomainError("vector object must embed its space")
        space = space_from_json(obj["space"])
    pairs = []
    for entry in obj["terms"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise DomainError(f"bad term {entry!r}: expected [point, coefficient]")
        p, c = entry
        pairs.append((coerce_point(space, point_from_json(p)), float(c)))
    return make_free_vector(space, pairs)


def coerce_point(space, p):
    # JSON has no int/float distinction for whole numbers; lean on the space kind.
    if space.kind in ("finite", "alpha"):
        return int(p)
    if space.kind == "interval":
        return float(p)
    if space.kind == "lattice" and isinstance(p, (list, tuple)):
        return tuple(int(c) for c in p)
    return p
