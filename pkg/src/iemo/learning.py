"""Consultation machinery: candidate selection for scoring, the scoring
oracle (simulated or delegated), and the radial-basis-function surrogate of
the decision maker's value function.

Scores follow the value function's polarity throughout: lower is better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from .problems import GoldenSpec, NoiseSpec, psi, psi_noisy
from .refpoints import select_seed_indices

__all__ = [
    "ScoredRecord",
    "Candidate",
    "ConsultationSchedule",
    "RbfNetwork",
    "GoldenModel",
    "rbf_kernel",
    "train_avf",
    "avf_score",
    "pick_candidates",
    "dm_score",
    "SimulatedOracle",
]


@dataclass(frozen=True)
class ScoredRecord:
    """One scored candidate: its objective vector, the decision maker's
    score, and the consultation session that produced it."""

    objectives: tuple
    score: float
    session: int

    def __post_init__(self):
        if not np.isfinite(self.score):
            raise ValueError("scores must be finite")
        object.__setattr__(self, "objectives", tuple(float(v) for v in self.objectives))

    @property
    def f(self) -> np.ndarray:
        return np.asarray(self.objectives)


@dataclass(frozen=True)
class Candidate:
    """A population member put in front of the decision maker, remembering
    its slot and the reference point it was associated with at the time."""

    index: int
    objectives: np.ndarray
    ref_index: int
    ref_point: np.ndarray


@dataclass(frozen=True)
class ConsultationSchedule:
    """When consultations happen and how many candidates each one shows."""

    tau: int = 25
    mu_first: int = 7
    mu_later: int = 10

    def __post_init__(self):
        if self.tau <= 1:
            raise ValueError("consultation interval tau must exceed 1")
        if self.mu_first < 1 or self.mu_later < 1:
            raise ValueError("candidate counts must be positive")

    @staticmethod
    def for_objectives(m: int, tau: int = 25, mu_later: int = 10) -> "ConsultationSchedule":
        return ConsultationSchedule(tau=tau, mu_first=2 * m + 1, mu_later=mu_later)

    def mu(self, session: int) -> int:
        return self.mu_first if session == 1 else self.mu_later


def rbf_kernel(f, c, sigma: float, kind: str = "norm"):
    """Gaussian-style bump exp(-||f - c|| / sigma^2); ``kind='squared'``
    uses the squared distance instead."""
    if sigma <= 0:
        raise ValueError("kernel width sigma must be positive")
    f = np.asarray(f, dtype=float)
    c = np.asarray(c, dtype=float)
    d = np.linalg.norm(f - c, axis=-1)
    if kind == "squared":
        d = d * d
    elif kind != "norm":
        raise ValueError(f"unknown kernel kind {kind!r}")
    out = np.exp(-d / (sigma * sigma))
    return float(out) if out.ndim == 0 else out


class RbfNetwork(BaseEstimator, RegressorMixin):
    """Interpolating radial-basis network regressor.

    Every distinct training input becomes a center (exact duplicates are
    collapsed to their mean target); the width defaults to the median
    pairwise distance among centers; the bias is the target mean; and the
    weights come from ridge-regularized least squares on the residuals.

    The default squared-exponent kernel keeps its bandwidth tied to the
    median center spacing at any scale; the unsquared variant ('norm')
    degenerates into near-delta bumps once that spacing drops below 1,
    which wrecks extrapolation ranking, so use it only for sensitivity
    checks.
    """

    def __init__(self, kernel: str = "squared", ridge: float = 1e-8, sigma: float | None = None):
        self.kernel = kernel
        self.ridge = ridge
        self.sigma = sigma

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        centers, targets = _collapse_duplicates(X, y)
        if self.sigma is not None:
            sigma = float(self.sigma)
        elif centers.shape[0] > 1:
            diff = centers[:, None, :] - centers[None, :, :]
            pair = np.sqrt(np.sum(diff * diff, axis=2))
            sigma = float(np.median(pair[np.triu_indices(centers.shape[0], k=1)]))
        else:
            sigma = 1.0
        bias = float(targets.mean())
        k = rbf_kernel(centers[:, None, :], centers[None, :, :], sigma, self.kernel)
        k = np.atleast_2d(k)
        resid = targets - bias
        # spectral ridge solve on the symmetric kernel matrix: invert the
        # well-conditioned eigenmodes exactly (interpolation-grade fit) and
        # keep the ridge filter's soft damping below its half-power point,
        # where crowded centers make modes numerically degenerate
        eigvals, eigvecs = np.linalg.eigh(k)
        cut = np.sqrt(self.ridge) * float(eigvals.max())
        damped = eigvals / (eigvals * eigvals + self.ridge)
        filt = np.where(eigvals >= cut, 1.0 / np.where(eigvals >= cut, eigvals, 1.0), damped)
        weights = (eigvecs * filt) @ (eigvecs.T @ resid)
        self.centers_ = centers
        self.sigma_ = sigma
        self.bias_ = bias
        self.weights_ = weights
        return self

    def predict(self, X):
        if not hasattr(self, "weights_"):
            raise NotFittedError("call fit before predict")
        X = check_array(np.atleast_2d(X))
        k = np.atleast_2d(rbf_kernel(X[:, None, :], self.centers_[None, :, :], self.sigma_, self.kernel))
        return self.bias_ + k @ self.weights_


def _collapse_duplicates(X: np.ndarray, y: np.ndarray):
    """Merge exactly-duplicated rows, averaging their targets; first
    occurrences keep their order."""
    centers: list[np.ndarray] = []
    sums: list[float] = []
    counts: list[int] = []
    for row, target in zip(X, y):
        for i, c in enumerate(centers):
            if np.array_equal(row, c):
                sums[i] += target
                counts[i] += 1
                break
        else:
            centers.append(row)
            sums.append(float(target))
            counts.append(1)
    return np.asarray(centers), np.asarray(sums) / np.asarray(counts)


class GoldenModel:
    """Stand-in for a trained network that scores with the decision maker's
    true value function; used by the utopia study arm."""

    def __init__(self, golden: GoldenSpec):
        self.golden = golden

    def predict(self, X):
        return np.atleast_1d(psi(np.atleast_2d(X), self.golden))


def train_avf(records, kernel: str = "squared") -> RbfNetwork:
    """Fit the surrogate value function to every scored record so far."""
    records = list(records)
    if not records:
        raise ValueError("cannot train on an empty record set")
    X = np.asarray([r.objectives for r in records], dtype=float)
    y = np.asarray([r.score for r in records], dtype=float)
    return RbfNetwork(kernel=kernel).fit(X, y)


def avf_score(model, f) -> float:
    """Surrogate score of a single objective vector (lower is better)."""
    return float(model.predict(np.atleast_2d(np.asarray(f, dtype=float)))[0])


def pick_candidates(
    pop_f: np.ndarray,
    ref_points: np.ndarray,
    assoc_index: np.ndarray,
    model,
    schedule: ConsultationSchedule,
    session: int,
    z,
) -> list[Candidate]:
    """Choose which population members the decision maker sees.

    The first session spreads seed reference points over the simplex and
    takes each one's associated solution; later sessions take the
    highest-ranked (lowest surrogate score) distinct solutions.
    """
    if session < 1:
        raise ValueError("session indices start at 1")
    pop_f = np.asarray(pop_f, dtype=float)
    ref_points = np.asarray(ref_points, dtype=float)
    if session == 1:
        mu = min(schedule.mu_first, pop_f.shape[0], ref_points.shape[0])
        seeds = select_seed_indices(ref_points, mu)
        # full perpendicular-distance matrix solution x reference
        shifted = pop_f - np.asarray(z, dtype=float)
        unit = ref_points / np.linalg.norm(ref_points, axis=1, keepdims=True)
        proj = shifted @ unit.T
        dmat = np.sqrt(np.maximum(np.sum(shifted * shifted, axis=1, keepdims=True) - proj * proj, 0.0))
        taken = np.zeros(pop_f.shape[0], dtype=bool)
        out = []
        for ref in seeds:
            owned = np.flatnonzero((assoc_index == ref) & ~taken)
            pool = owned if owned.size else np.flatnonzero(~taken)
            sol = int(pool[np.argmin(dmat[pool, ref])])
            taken[sol] = True
            out.append(Candidate(sol, pop_f[sol].copy(), int(ref), ref_points[ref].copy()))
        return out
    scores = np.asarray(model.predict(pop_f), dtype=float)
    order = np.argsort(scores, kind="stable")
    mu = schedule.mu(session)
    out = []
    seen: list[np.ndarray] = []
    for sol in order:
        fv = pop_f[sol]
        if any(np.array_equal(fv, s) for s in seen):
            continue
        seen.append(fv)
        ref = int(assoc_index[sol])
        out.append(Candidate(int(sol), fv.copy(), ref, ref_points[ref].copy()))
        if len(out) == mu:
            break
    return out


class SimulatedOracle:
    """Scores candidates with the hidden value function, optionally with
    generation-decaying multiplicative noise."""

    def __init__(self, golden: GoldenSpec, noise: NoiseSpec | None = None, rng: np.random.Generator | None = None):
        self.golden = golden
        self.noise = noise if noise is not None and noise.kappa > 0 else None
        self.rng = rng

    def score(self, objectives: np.ndarray, generation: int) -> np.ndarray:
        objectives = np.atleast_2d(np.asarray(objectives, dtype=float))
        if self.noise is None:
            return np.atleast_1d(psi(objectives, self.golden))
        if self.rng is None:
            raise ValueError("a noisy oracle needs a random generator")
        return np.atleast_1d(psi_noisy(objectives, self.golden, self.noise, generation, self.rng))


def dm_score(oracle, candidates: list[Candidate], generation: int, session: int, log: list) -> list[ScoredRecord]:
    """Ask the oracle to score a candidate batch; the records are appended
    to ``log`` (the growing training set) and returned in candidate order."""
    if not candidates:
        raise ValueError("no candidates to score")
    objectives = np.asarray([c.objectives for c in candidates], dtype=float)
    scores = np.asarray(oracle.score(objectives, generation), dtype=float)
    if scores.shape[0] != len(candidates):
        raise ValueError("oracle returned a score count that does not match the batch")
    records = [ScoredRecord(tuple(c.objectives), float(s), session) for c, s in zip(candidates, scores)]
    log.extend(records)
    return records
