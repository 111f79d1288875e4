"""Decomposition optimizer with Tchebycheff aggregation: one subproblem per
reference point, neighborhood mating, and bounded incumbent replacement."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Population, update_ideal
from .problems import ProblemSpec, evaluate
from .refpoints import ReferenceSet
from .variation import VariationParams, polynomial_mutation, sbx

__all__ = ["MoeadState", "tchebycheff", "moead_init", "subproblem_step", "moead_generation", "adopt_reference_set"]

WEIGHT_FLOOR = 1e-6  # guards division at lattice boundary points


def tchebycheff(f, w, z, floor: float = WEIGHT_FLOOR):
    """Largest weighted deviation from the ideal point, max_i |f_i - z_i| / w_i,
    with zero weights floored.  Broadcasts over leading axes."""
    f = np.asarray(f, dtype=float)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    vals = np.max(np.abs(f - z) / np.maximum(w, floor), axis=-1)
    return float(vals) if vals.ndim == 0 else vals


@dataclass
class MoeadState:
    """Evolving state: solution i is the incumbent of reference point i, so
    the population and reference set always have equal size."""

    refset: ReferenceSet
    pop: Population
    z: np.ndarray
    delta: float = 0.1
    nr: int | None = 2
    gen: int = 0
    evals: int = 0
    _all_indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.pop.size != self.refset.size:
            raise ValueError("population and reference set sizes must match")
        if self.refset.neighborhood_size < 2:
            raise ValueError("mating needs neighborhoods of at least two points")
        self._all_indices = np.arange(self.refset.size)

    @property
    def size(self) -> int:
        return self.pop.size

    def association(self) -> np.ndarray:
        """Solution-to-reference mapping; the identity by construction."""
        return self._all_indices.copy()


def moead_init(
    problem: ProblemSpec,
    refset: ReferenceSet,
    rng: np.random.Generator,
    delta: float = 0.1,
    nr: int | None = 2,
) -> MoeadState:
    """Random initial population, one solution per reference point, with the
    ideal point seeded from the initial evaluations."""
    x = rng.random((refset.size, problem.n))
    f = evaluate(problem, x)
    return MoeadState(refset, Population(x, f), f.min(axis=0), delta=delta, nr=nr)


def subproblem_step(
    state: MoeadState,
    i: int,
    problem: ProblemSpec,
    params: VariationParams,
    rng: np.random.Generator,
) -> list[int]:
    """Breed one offspring for subproblem i, update the ideal point, and let
    it replace at most ``nr`` strictly-worse incumbents drawn from the
    neighborhood (or, with probability delta, the whole set).  Returns the
    replaced indices."""
    pop = state.pop
    points = state.refset.points
    hoods = state.refset.neighborhoods
    n_rep = state.nr if state.nr is not None else state.size
    pool = hoods[i] if rng.random() < 1.0 - state.delta else state._all_indices
    parents = rng.choice(pool, size=2, replace=False)
    child, _ = sbx(pop.x[parents[0]], pop.x[parents[1]], params, rng)
    child = polynomial_mutation(child, params, rng)
    fc = evaluate(problem, child)
    state.z = update_ideal(state.z, fc)
    rpool = hoods[i] if rng.random() < 1.0 - state.delta else state._all_indices
    order = rng.permutation(rpool)
    g_new = tchebycheff(fc, points[order], state.z)
    g_old = tchebycheff(pop.f[order], points[order], state.z)
    replaced = []
    for j, better in zip(order, g_new < g_old):
        if better:
            pop.x[j] = child
            pop.f[j] = fc
            replaced.append(int(j))
            if len(replaced) >= n_rep:
                break
    return replaced


def moead_generation(
    state: MoeadState,
    problem: ProblemSpec,
    params: VariationParams,
    rng: np.random.Generator,
) -> MoeadState:
    """One pass over all subproblems in index order."""
    for i in range(state.size):
        subproblem_step(state, i, problem, params, rng)
    state.gen += 1
    state.evals += state.size
    return state


def adopt_reference_set(state: MoeadState, points: np.ndarray) -> MoeadState:
    """Swap in a migrated reference set, keeping each solution bound to its
    slot and rebuilding the neighborhood table for the new geometry."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] != state.refset.size:
        raise ValueError(
            f"replacement set has {points.shape[0]} points, expected {state.refset.size}"
        )
    state.refset = ReferenceSet.create(points, state.refset.neighborhood_size)
    return state
