"""Samplers and geometric oracles shared by the tests."""

from __future__ import annotations

import numpy as np

from accinfo.binary_dist import ParamCoords, lambda_bounds
from accinfo.qubit_dichotomy import Dichotomy, QubitState


def random_coords(rng: np.random.Generator, margin: float = 0.0) -> ParamCoords:
    """(a, b, lam) uniform over a and b, then uniform over the feasible lam interval."""
    while True:
        a, b = rng.uniform(-1.0, 1.0, 2)
        lo, hi = lambda_bounds(a, b)
        if hi - lo > 2.0 * margin:
            lam = rng.uniform(lo + margin, hi - margin)
            return ParamCoords(float(a), float(b), float(lam))


def random_joint_entries(rng: np.random.Generator) -> tuple[float, float, float, float]:
    """Flat Dirichlet sample on the probability simplex."""
    return tuple(float(v) for v in rng.dirichlet(np.ones(4)))


def random_state(rng: np.random.Generator, pure: bool = False) -> QubitState:
    if pure:
        v = rng.normal(size=3)
        return QubitState(tuple(v / np.linalg.norm(v)))
    while True:
        v = rng.uniform(-1.0, 1.0, 3)
        if v @ v <= 1.0:
            return QubitState(tuple(v))


def random_dichotomy(rng: np.random.Generator, pure: bool = False) -> Dichotomy:
    while True:
        r, s = random_state(rng, pure), random_state(rng, pure)
        p0 = float(rng.uniform(0.02, 0.98))
        if np.sum((r.vector - s.vector) ** 2) > 1e-4:
            return Dichotomy(r, s, (p0, 1.0 - p0))


def orthogonal_pair(p0: float = 0.5) -> Dichotomy:
    return Dichotomy.from_bloch((0.0, 0.0, 1.0), (0.0, 0.0, -1.0), p0)


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Counter-clockwise hull vertices by the monotone chain construction."""
    pts = sorted(map(tuple, np.asarray(points, dtype=float)))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def hull_excess(hull: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Largest signed distance of each query point outside the CCW polygon ``hull``."""
    a = hull
    b = np.roll(hull, -1, axis=0)
    edge = b - a
    normal = np.stack([edge[:, 1], -edge[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1, keepdims=True)
    offsets = np.einsum("ij,ij->i", normal, a)
    return np.max(q @ normal.T - offsets, axis=1)
