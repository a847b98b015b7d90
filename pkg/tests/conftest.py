"""Shared generators for the test suite.

Random finite spaces are built from integer grid points under the Euclidean
metric, which keeps every pairwise distance reproducible across platforms
(hypot of small integers) while still exercising irrational-looking values.
"""

from __future__ import annotations

import math
import random

import pytest

from freelip import FiniteSpace


def random_grid_points(rng: random.Random, n: int, extent: int = 64) -> list[tuple[int, int]]:
    pts = {(0, 0)}
    while len(pts) < n:
        pts.add((rng.randrange(-extent, extent + 1), rng.randrange(-extent, extent + 1)))
    ordered = sorted(pts)
    ordered.remove((0, 0))
    return [(0, 0)] + ordered


def euclid_space(coords: list[tuple[int, int]]) -> FiniteSpace:
    matrix = tuple(
        tuple(math.hypot(p[0] - q[0], p[1] - q[1]) for q in coords) for p in coords
    )
    return FiniteSpace(matrix=matrix, basepoint=0, labels=tuple(coords))


def random_finite_space(rng: random.Random, n: int) -> FiniteSpace:
    return euclid_space(random_grid_points(rng, n))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xF5EE)
