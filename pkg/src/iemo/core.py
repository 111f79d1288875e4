"""Shared domain types: populations, Pareto dominance, ideal-point tracking,
and the distance-to-target error metric used to judge a run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Population",
    "dominates",
    "approximation_error",
    "update_ideal",
    "new_ideal",
]


@dataclass
class Population:
    """A population of candidate solutions with cached objective values.

    ``x`` holds the decision vectors, one row per member, each coordinate in
    [0, 1].  ``f`` holds the matching objective vectors; row i of ``f`` must
    always be the evaluation of row i of ``x``.
    """

    x: np.ndarray  # (N, n)
    f: np.ndarray  # (N, m)

    def __post_init__(self):
        self.x = np.atleast_2d(np.asarray(self.x, dtype=float))
        self.f = np.atleast_2d(np.asarray(self.f, dtype=float))
        if self.x.shape[0] != self.f.shape[0]:
            raise ValueError("decision and objective matrices disagree on population size")

    @property
    def size(self) -> int:
        return self.x.shape[0]

    @property
    def n_objectives(self) -> int:
        return self.f.shape[1]

    def copy(self) -> "Population":
        return Population(self.x.copy(), self.f.copy())


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: a is no worse everywhere and
    strictly better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def approximation_error(population, target) -> float:
    """Smallest Euclidean distance from any member's objective vector to
    ``target``.  Accepts a Population or a raw (N, m) objective matrix."""
    objs = population.f if isinstance(population, Population) else np.atleast_2d(np.asarray(population, dtype=float))
    target = np.asarray(target, dtype=float)
    if objs.size == 0:
        raise ValueError("population is empty")
    if objs.shape[1] != target.shape[0]:
        raise ValueError("target length does not match objective count")
    return float(np.min(np.linalg.norm(objs - target, axis=1)))


def new_ideal(m: int) -> np.ndarray:
    """Fresh ideal-point estimate: +inf sentinel in every coordinate."""
    return np.full(m, np.inf)


def update_ideal(z, f) -> np.ndarray:
    """Coordinate-wise minimum of the current estimate and a new objective
    vector.  Never increases any coordinate."""
    z = np.asarray(z, dtype=float)
    f = np.asarray(f, dtype=float)
    if z.shape != f.shape:
        raise ValueError("ideal point and objective vector differ in length")
    return np.minimum(z, f)
