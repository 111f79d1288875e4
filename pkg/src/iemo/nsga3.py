"""Reference-point survivor selection: non-dominated sorting, perpendicular
distance association, and crowdedness-balanced niching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Population
from .problems import ProblemSpec, evaluate
from .variation import VariationParams, polynomial_mutation, sbx

__all__ = [
    "Nsga3State",
    "AssociationTable",
    "nondominated_sort",
    "associate",
    "niching_fill",
    "survivor_selection",
    "nsga3_init",
    "nsga3_generation",
    "adopt_reference_set",
]


def nondominated_sort(objs: np.ndarray) -> list[np.ndarray]:
    """Partition rows into fronts by repeated peeling of the non-dominated
    set.  Within a front, indices keep their input order."""
    objs = np.atleast_2d(np.asarray(objs, dtype=float))
    n = objs.shape[0]
    if n == 0:
        raise ValueError("cannot sort an empty set")
    # dom[i, j]: row i dominates row j
    le = objs[:, None, :] <= objs[None, :, :]
    lt = objs[:, None, :] < objs[None, :, :]
    dom = le.all(axis=2) & lt.any(axis=2)
    n_dominators = dom.sum(axis=0)
    alive = np.ones(n, dtype=bool)
    fronts = []
    while alive.any():
        front = np.flatnonzero(alive & (n_dominators == 0))
        fronts.append(front)
        alive[front] = False
        n_dominators -= dom[front].sum(axis=0)
    return fronts


def associate(objs: np.ndarray, points: np.ndarray, z) -> tuple[np.ndarray, np.ndarray]:
    """Closest reference line for each objective vector, after translating by
    the ideal point.  Returns (reference index, perpendicular distance) per
    row; ties go to the lower index."""
    objs = np.atleast_2d(np.asarray(objs, dtype=float))
    points = np.asarray(points, dtype=float)
    shifted = objs - np.asarray(z, dtype=float)
    unit = points / np.linalg.norm(points, axis=1, keepdims=True)
    proj = shifted @ unit.T  # (N, R)
    # residual vectors, not the norm-squared difference: the subtraction form
    # cancels catastrophically for points sitting on a reference line
    resid = shifted[:, None, :] - proj[:, :, None] * unit[None, :, :]
    dist = np.linalg.norm(resid, axis=2)
    idx = np.argmin(dist, axis=1)
    return idx, dist[np.arange(objs.shape[0]), idx]


@dataclass
class AssociationTable:
    """Association of a combined parent+offspring set to reference points,
    with per-reference crowdedness counts over the already-admitted members."""

    ref_index: np.ndarray  # (N,) reference index per solution
    distance: np.ndarray   # (N,) perpendicular distance per solution
    rho: np.ndarray        # (R,) admitted-member count per reference

    @classmethod
    def build(cls, objs: np.ndarray, points: np.ndarray, z, admitted) -> "AssociationTable":
        idx, dist = associate(objs, points, z)
        rho = np.bincount(idx[np.asarray(admitted, dtype=int)], minlength=points.shape[0])
        return cls(idx, dist, rho.astype(int))


def niching_fill(
    admitted,
    last_front,
    table: AssociationTable,
    target: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Top up the admitted set from the overflow front: repeatedly take a
    random member of the least crowded reference point that still has unused
    associates, updating crowdedness after every admission."""
    chosen = list(np.asarray(admitted, dtype=int))
    last_front = np.asarray(last_front, dtype=int)
    if not len(chosen) < target <= len(chosen) + len(last_front):
        raise ValueError(
            f"cannot fill from {len(chosen)} to {target} with {len(last_front)} spares"
        )
    available: dict[int, list[int]] = {}
    for sol in last_front:
        available.setdefault(int(table.ref_index[sol]), []).append(int(sol))
    rho = table.rho.copy()
    while len(chosen) < target:
        refs = np.fromiter(available.keys(), dtype=int)
        tied = refs[rho[refs] == rho[refs].min()]
        ref = int(tied[rng.integers(len(tied))]) if len(tied) > 1 else int(tied[0])
        members = available[ref]
        sol = members.pop(int(rng.integers(len(members))))
        if not members:
            del available[ref]
        chosen.append(sol)
        rho[ref] += 1
    return np.asarray(chosen, dtype=int)


@dataclass
class Nsga3State:
    """Evolving state; unlike the decomposition optimizer, the population
    size may exceed the reference point count and solutions bind to points
    only through geometric association."""

    points: np.ndarray  # (R, m)
    pop: Population
    z: np.ndarray
    gen: int = 0
    evals: int = 0

    @property
    def size(self) -> int:
        return self.pop.size

    def association(self) -> np.ndarray:
        idx, _ = associate(self.pop.f, self.points, self.z)
        return idx


def nsga3_init(
    problem: ProblemSpec,
    points: np.ndarray,
    pop_size: int,
    rng: np.random.Generator,
) -> Nsga3State:
    x = rng.random((pop_size, problem.n))
    f = evaluate(problem, x)
    return Nsga3State(np.asarray(points, dtype=float), Population(x, f), f.min(axis=0))


def survivor_selection(
    objs: np.ndarray,
    points: np.ndarray,
    z,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Pick n survivors from a combined parent+offspring objective matrix:
    whole fronts while they fit, niching on the first overflow front."""
    fronts = nondominated_sort(objs)
    admitted: list[int] = []
    for front in fronts:
        if len(admitted) + len(front) == n:
            return np.asarray(admitted + list(front), dtype=int)
        if len(admitted) + len(front) > n:
            table = AssociationTable.build(objs, points, z, admitted)
            return niching_fill(admitted, front, table, n, rng)
        admitted.extend(front)
    raise AssertionError("front sizes cannot sum below the target")


def nsga3_generation(
    state: Nsga3State,
    problem: ProblemSpec,
    params: VariationParams,
    rng: np.random.Generator,
) -> Nsga3State:
    """Breed N offspring from random parent pairs, then keep the best N of
    parents+offspring by front rank with niching on the overflow front."""
    pop = state.pop
    n = pop.size
    children = []
    while len(children) < n:
        pa, pb = rng.choice(n, size=2, replace=False)
        c1, c2 = sbx(pop.x[pa], pop.x[pb], params, rng)
        children.append(polynomial_mutation(c1, params, rng))
        children.append(polynomial_mutation(c2, params, rng))
    qx = np.asarray(children[:n])
    qf = evaluate(problem, qx)
    state.z = np.minimum(state.z, qf.min(axis=0))

    rx = np.vstack([pop.x, qx])
    rf = np.vstack([pop.f, qf])
    survivors = survivor_selection(rf, state.points, state.z, n, rng)
    state.pop = Population(rx[survivors], rf[survivors])
    state.gen += 1
    state.evals += n
    return state


def adopt_reference_set(state: Nsga3State, points: np.ndarray) -> Nsga3State:
    points = np.asarray(points, dtype=float)
    if points.shape[0] != state.points.shape[0]:
        raise ValueError(
            f"replacement set has {points.shape[0]} points, expected {state.points.shape[0]}"
        )
    state.points = points
    return state
