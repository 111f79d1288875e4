"""Translate the learned preference into optimizer vocabulary: rank the
population with the surrogate, mark the promising reference points, and pull
the rest of the set toward them in priority order."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .learning import Candidate, ScoredRecord
from .moead import tchebycheff

__all__ = [
    "PromisingSet",
    "BestRecord",
    "identify_promising",
    "move_point",
    "elicit",
    "resolve_best",
]


@dataclass(frozen=True)
class PromisingSet:
    """Distinct reference points backing the surrogate's top-ranked
    solutions, most preferred first, each with its backing solution's
    objective vector."""

    ref_indices: np.ndarray       # (mu',) int
    solution_objectives: np.ndarray  # (mu', m)

    def __len__(self) -> int:
        return len(self.ref_indices)


@dataclass(frozen=True)
class BestRecord:
    """The candidate the decision maker scored best at the last consultation,
    with the reference point it was associated with at the time."""

    objectives: np.ndarray
    score: float
    ref_index: int
    ref_point: np.ndarray


def identify_promising(pop_f: np.ndarray, assoc_index: np.ndarray, model, mu: int) -> PromisingSet:
    """Score the population with the surrogate, take the ``mu`` best
    solutions, and collect their distinct reference points in rank order.
    Shared associations can shrink the result below ``mu``."""
    pop_f = np.asarray(pop_f, dtype=float)
    if not 1 <= mu <= pop_f.shape[0]:
        raise ValueError(f"mu={mu} outside [1, {pop_f.shape[0]}]")
    scores = np.asarray(model.predict(pop_f), dtype=float)
    order = np.argsort(scores, kind="stable")[:mu]
    refs: list[int] = []
    backing: list[np.ndarray] = []
    for sol in order:
        ref = int(assoc_index[sol])
        if ref not in refs:
            refs.append(ref)
            backing.append(pop_f[sol])
    return PromisingSet(np.asarray(refs, dtype=int), np.asarray(backing))


def move_point(w, target, eta: float) -> np.ndarray:
    """Step ``w`` a fraction eta of the way to ``target``; a convex
    combination, so simplex membership is preserved."""
    w = np.asarray(w, dtype=float)
    target = np.asarray(target, dtype=float)
    return w + eta * (target - w)


def elicit(
    points: np.ndarray,
    promising: PromisingSet,
    best: BestRecord,
    model,
    z,
    eta: float,
    guard: str = "rescored",
) -> np.ndarray:
    """Migrate the reference set toward the promising points.

    Each promising point, in rank order, attracts ceil((N - mu')/mu') of the
    nearest still-unclaimed non-promising points.  Before each attraction the
    surrogate score of the backing solution is checked against the best
    DM-scored solution; on failure everything left moves toward that best
    solution's point instead.  Promising points never move.
    """
    points = np.asarray(points, dtype=float)
    if len(promising) == 0:
        raise ValueError("need at least one promising reference point")
    n = points.shape[0]
    mu_p = len(promising)
    out = points.copy()
    pool = [i for i in range(n) if i not in set(int(r) for r in promising.ref_indices)]
    quota = ceil((n - mu_p) / mu_p)
    if guard == "literal":
        # surrogate units compared against aggregation units, as specified
        threshold = tchebycheff(best.objectives, best.ref_point, z)
    elif guard == "rescored":
        threshold = float(model.predict(np.atleast_2d(best.objectives))[0])
    else:
        raise ValueError(f"unknown guard mode {guard!r}")
    for rank in range(mu_p):
        if not pool:
            break
        attractor = points[int(promising.ref_indices[rank])]
        phi = float(model.predict(np.atleast_2d(promising.solution_objectives[rank]))[0])
        if phi < threshold:
            take = len(pool) if rank == mu_p - 1 else min(quota, len(pool))
            dist = np.linalg.norm(points[pool] - attractor, axis=1)
            nearest = np.argsort(dist, kind="stable")[:take]
            chosen = [pool[i] for i in nearest]
            out[chosen] = move_point(points[chosen], attractor, eta)
            pool = [i for i in pool if i not in set(chosen)]
        else:
            out[pool] = move_point(points[pool], best.ref_point, eta)
            pool = []
            break
    return out


def resolve_best(records: list[ScoredRecord], candidates: list[Candidate]) -> BestRecord:
    """The lowest-scored record of the last session (ties keep candidate
    order), paired with the reference point it carried."""
    if not records:
        raise ValueError("no consultation has happened yet")
    if len(records) != len(candidates):
        raise ValueError("records and candidates are misaligned")
    best = min(range(len(records)), key=lambda i: records[i].score)
    cand = candidates[best]
    return BestRecord(
        objectives=np.asarray(records[best].objectives),
        score=records[best].score,
        ref_index=cand.ref_index,
        ref_point=np.asarray(cand.ref_point, dtype=float),
    )
