"""Structured weight vectors on the unit simplex: single- and two-layer
simplex lattices, nearest-neighbor tables, and well-spread seed selection."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

__all__ = [
    "ReferenceSet",
    "das_dennis",
    "two_layer",
    "build_neighborhoods",
    "select_seed_indices",
    "default_points",
    "DEFAULT_LATTICE",
]

# Lattice divisions per objective count: single-layer H, or (outer, inner)
# divisions for the two-layer construction used at higher dimension.
DEFAULT_LATTICE = {2: 99, 3: 12, 5: 6, 8: (3, 2), 10: (3, 2)}

_COUNT_CAP = 100_000


def das_dennis(m: int, divisions: int, cap: int = _COUNT_CAP) -> np.ndarray:
    """All weight vectors with coordinates in {0, 1/H, ..., 1} summing to 1,
    in lexicographic order.  Emits C(H+m-1, m-1) points."""
    if m < 2:
        raise ValueError("need at least two objectives")
    if divisions < 1:
        raise ValueError("need at least one division")
    count = comb(divisions + m - 1, m - 1)
    if count > cap:
        raise ValueError(f"lattice would contain {count} points, over the cap of {cap}")
    out = np.empty((count, m))
    stack = [0] * m
    row = 0

    def fill(pos: int, remaining: int):
        nonlocal row
        if pos == m - 1:
            stack[pos] = remaining
            out[row] = stack
            row += 1
            return
        for v in range(remaining + 1):
            stack[pos] = v
            fill(pos + 1, remaining - v)

    fill(0, divisions)
    return out / divisions


def two_layer(m: int, outer_divisions: int, inner_divisions: int, cap: int = _COUNT_CAP) -> np.ndarray:
    """Boundary layer plus an inner layer shrunk toward the simplex centroid
    (w/2 + 1/(2m)); exact duplicates are dropped, outer points first."""
    outer = das_dennis(m, outer_divisions, cap)
    inner = das_dennis(m, inner_divisions, cap) / 2.0 + 1.0 / (2.0 * m)
    points = [outer]
    for p in inner:
        if not np.any(np.all(np.abs(outer - p) < 1e-12, axis=1)):
            points.append(p[None, :])
    return np.vstack(points)


def build_neighborhoods(points: np.ndarray, t: int) -> np.ndarray:
    """Index table of each point's t nearest points by Euclidean distance
    (itself included; ties broken toward the lower index)."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if not 1 <= t <= n:
        raise ValueError(f"neighborhood size {t} outside [1, {n}]")
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    order = np.argsort(dist, axis=1, kind="stable")
    return order[:, :t]


@dataclass
class ReferenceSet:
    """A bank of simplex weight vectors with their neighborhood table."""

    points: np.ndarray        # (N, m)
    neighborhoods: np.ndarray  # (N, T) int

    @classmethod
    def create(cls, points: np.ndarray, t: int) -> "ReferenceSet":
        points = np.asarray(points, dtype=float)
        return cls(points, build_neighborhoods(points, min(t, points.shape[0])))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def neighborhood_size(self) -> int:
        return self.neighborhoods.shape[1]

    @property
    def m(self) -> int:
        return self.points.shape[1]


def select_seed_indices(points, mu: int) -> np.ndarray:
    """Greedy max-min-distance subset of ``mu`` indices, seeded at the point
    nearest the simplex centroid.  Deterministic."""
    pts = points.points if isinstance(points, ReferenceSet) else np.asarray(points, dtype=float)
    n, m = pts.shape
    if not 1 <= mu <= n:
        raise ValueError(f"seed count {mu} outside [1, {n}]")
    centroid = np.full(m, 1.0 / m)
    first = int(np.argmin(np.linalg.norm(pts - centroid, axis=1)))
    chosen = [first]
    min_dist = np.linalg.norm(pts - pts[first], axis=1)
    for _ in range(mu - 1):
        min_dist[chosen] = -1.0  # never re-pick
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        min_dist = np.minimum(min_dist, np.linalg.norm(pts - pts[nxt], axis=1))
    return np.asarray(chosen, dtype=int)


def default_points(m: int) -> np.ndarray:
    """The lattice used for a given objective count, per DEFAULT_LATTICE."""
    try:
        setting = DEFAULT_LATTICE[m]
    except KeyError:
        raise ValueError(
            f"no default lattice for m={m}; supply divisions explicitly"
        ) from None
    if isinstance(setting, tuple):
        return two_layer(m, *setting)
    return das_dennis(m, setting)
