"""Scalable DTLZ1-DTLZ4 benchmarks, the simulated decision maker's value
function (deterministic and noisy), and the analytic target point it prefers.

All problems are minimized over the unit box; objective vectors are
nonnegative.  The number of distance variables follows the usual convention
(k=5 for DTLZ1, k=10 for DTLZ2-4), so n = m + k - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PROBLEM_IDS",
    "ProblemSpec",
    "GoldenSpec",
    "NoiseSpec",
    "evaluate",
    "golden_point",
    "psi",
    "psi_noisy",
]

PROBLEM_IDS = ("DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4")

_K_DISTANCE = {"DTLZ1": 5, "DTLZ2": 10, "DTLZ3": 10, "DTLZ4": 10}


@dataclass(frozen=True)
class ProblemSpec:
    """Identifies one benchmark instance: problem family, objective count,
    and the bias exponent (used by DTLZ4 only)."""

    id: str
    m: int
    alpha: float = 100.0

    def __post_init__(self):
        if self.id not in PROBLEM_IDS:
            raise ValueError(f"unknown problem id {self.id!r}; expected one of {PROBLEM_IDS}")
        if not 2 <= self.m <= 15:
            raise ValueError(f"objective count m={self.m} outside supported range [2, 15]")
        if self.alpha <= 0:
            raise ValueError("bias exponent alpha must be positive")

    @property
    def k(self) -> int:
        return _K_DISTANCE[self.id]

    @property
    def n(self) -> int:
        return self.m + self.k - 1


@dataclass(frozen=True)
class GoldenSpec:
    """The simulated decision maker's hidden preference: utopia weights (all
    strictly positive, summing to 1) and the reference vector, fixed at the
    origin for the benchmark study."""

    weights: tuple
    reference: tuple = None  # defaults to the origin

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w <= 0):
            raise ValueError("utopia weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("utopia weights must sum to 1")
        object.__setattr__(self, "weights", tuple(w))
        ref = np.zeros(len(w)) if self.reference is None else np.asarray(self.reference, dtype=float)
        if ref.shape != w.shape:
            raise ValueError("reference vector length does not match weights")
        object.__setattr__(self, "reference", tuple(ref))

    @property
    def w(self) -> np.ndarray:
        return np.asarray(self.weights)

    @property
    def z(self) -> np.ndarray:
        return np.asarray(self.reference)

    @staticmethod
    def for_roi(m: int, roi: str) -> "GoldenSpec":
        """Deterministic weight choices for the two studied regions of
        interest: the simplex center, or a region emphasizing objective 1."""
        if roi == "center":
            w = np.full(m, 1.0 / m)
        elif roi == "boundary":
            w = np.full(m, 0.3 / (m - 1))
            w[0] = 0.7
            w /= w.sum()
        else:
            raise ValueError(f"unknown roi {roi!r}; expected 'center' or 'boundary'")
        return GoldenSpec(tuple(w))


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative Gaussian scoring noise that decays linearly to zero
    over the generation horizon."""

    kappa: float
    t_max: int

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("noise strength kappa must be nonnegative")
        if self.t_max <= 0:
            raise ValueError("generation horizon t_max must be positive")


def _check_box(x: np.ndarray, n: int):
    if x.shape[-1] != n:
        raise ValueError(f"decision vector has length {x.shape[-1]}, expected {n}")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("decision variables must lie in [0, 1]")


def _g_rastrigin(xm: np.ndarray) -> np.ndarray:
    d = xm - 0.5
    return 100.0 * (xm.shape[1] + np.sum(d * d - np.cos(20.0 * np.pi * d), axis=1))


def _g_sphere(xm: np.ndarray) -> np.ndarray:
    d = xm - 0.5
    return np.sum(d * d, axis=1)


def _linear_shape(y: np.ndarray, g: np.ndarray) -> np.ndarray:
    # f_i = 0.5 (1+g) y_1 ... y_{m-i} (1 - y_{m-i+1}); the last factor is
    # dropped for f_1 and the product is empty for f_m.
    n_pop, m = y.shape[0], y.shape[1] + 1
    f = np.empty((n_pop, m))
    scale = 0.5 * (1.0 + g)
    for i in range(m):
        prod = np.prod(y[:, : m - 1 - i], axis=1)
        if i > 0:
            prod = prod * (1.0 - y[:, m - 1 - i])
        f[:, i] = scale * prod
    return f


def _spherical_shape(y: np.ndarray, g: np.ndarray) -> np.ndarray:
    n_pop, m = y.shape[0], y.shape[1] + 1
    c = np.cos(y * np.pi / 2.0)
    s = np.sin(y * np.pi / 2.0)
    f = np.empty((n_pop, m))
    scale = 1.0 + g
    for i in range(m):
        prod = np.prod(c[:, : m - 1 - i], axis=1)
        if i > 0:
            prod = prod * s[:, m - 1 - i]
        f[:, i] = scale * prod
    return f


def evaluate(spec: ProblemSpec, x) -> np.ndarray:
    """Objective vector(s) for one decision vector or a stack of them.

    Accepts shape (n,) or (N, n); returns the matching shape with m columns.
    Inputs outside the unit box are rejected (variation operators clamp).
    """
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    _check_box(arr, spec.n)
    y = arr[:, : spec.m - 1]
    xm = arr[:, spec.m - 1 :]
    if spec.id == "DTLZ1":
        f = _linear_shape(y, _g_rastrigin(xm))
    elif spec.id == "DTLZ2":
        f = _spherical_shape(y, _g_sphere(xm))
    elif spec.id == "DTLZ3":
        f = _spherical_shape(y, _g_rastrigin(xm))
    else:  # DTLZ4
        f = _spherical_shape(y ** spec.alpha, _g_sphere(xm))
    return f[0] if single else f


def golden_point(spec: ProblemSpec, golden: GoldenSpec) -> np.ndarray:
    """The Pareto-front point the simulated decision maker prefers most:
    the intersection of the front with the ray f_i proportional to w_i.

    DTLZ1's front is the hyperplane sum(f) = 0.5; DTLZ2-4 share the unit
    hypersphere sum(f^2) = 1.
    """
    w = golden.w
    if len(w) != spec.m:
        raise ValueError("utopia weight length does not match objective count")
    if spec.id == "DTLZ1":
        return 0.5 * w / w.sum()
    return w / np.linalg.norm(w)


def psi(f, golden: GoldenSpec):
    """The decision maker's value function: the largest weighted deviation
    from the reference vector.  Lower is better, zero only at the reference.

    Vectorized: accepts (m,) or (N, m) and returns a scalar or (N,).
    """
    arr = np.asarray(f, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[1] != len(golden.w):
        raise ValueError("objective vector length does not match utopia weights")
    vals = np.max(np.abs(arr - golden.z) / golden.w, axis=1)
    return float(vals[0]) if single else vals


def psi_noisy(f, golden: GoldenSpec, noise: NoiseSpec, t: int, rng: np.random.Generator):
    """Score with multiplicative Gaussian noise of mean 1 and standard
    deviation kappa * (1 - t/t_max); exact at t = t_max or kappa = 0."""
    if not 0 <= t <= noise.t_max:
        raise ValueError(f"generation index t={t} outside [0, {noise.t_max}]")
    base = psi(f, golden)
    delta = noise.kappa * (1.0 - t / noise.t_max)
    factor = rng.normal(loc=1.0, scale=delta, size=np.shape(base) or None)
    return base * factor
