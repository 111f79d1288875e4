"""Simulated binary crossover and polynomial mutation over the unit box.

Both operators draw from a caller-supplied numpy Generator so runs are
reproducible from the seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["VariationParams", "sbx", "polynomial_mutation"]


@dataclass(frozen=True)
class VariationParams:
    """Reproduction settings.  ``p_m`` gates mutation per solution with the
    usual 1/n per-variable rate inside; set ``per_variable_gate`` to read it
    as a raw per-variable rate instead."""

    p_c: float = 1.0
    eta_c: float = 30.0
    p_m: float = 0.9
    eta_m: float = 20.0
    per_variable_gate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p_c <= 1.0:
            raise ValueError("crossover probability must lie in [0, 1]")
        if not 0.0 <= self.p_m <= 1.0:
            raise ValueError("mutation probability must lie in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")


def sbx(p1, p2, params: VariationParams, rng: np.random.Generator):
    """One SBX application: returns two children clamped to [0, 1].

    With probability 1 - p_c the parents are returned unchanged.  Each
    variable crosses with probability 0.5; the spread factor follows the
    eta_c-indexed polynomial distribution.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValueError("parents differ in length")
    if rng.random() > params.p_c:
        return p1.copy(), p2.copy()
    n = p1.shape[0]
    cross = rng.random(n) <= 0.5
    u = rng.random(n)
    exponent = 1.0 / (params.eta_c + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exponent, (2.0 * (1.0 - u)) ** -exponent)
    beta = np.where(cross, beta, 1.0)  # beta = 1 leaves the variable untouched
    mid = 0.5 * (p1 + p2)
    half_spread = 0.5 * beta * (p1 - p2)  # zero for identical parents, exactly
    c1 = mid + half_spread
    c2 = mid - half_spread
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(x, params: VariationParams, rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation on [0, 1]^n.

    The default two-level scheme mutates the whole solution with probability
    p_m and each variable with probability 1/n inside; the per-variable mode
    applies p_m to every variable directly.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if params.per_variable_gate:
        rate = params.p_m
    else:
        if rng.random() > params.p_m:
            return x.copy()
        rate = 1.0 / n
    site = rng.random(n) < rate
    u = rng.random(n)
    exponent = 1.0 / (params.eta_m + 1.0)
    # distances to the box walls drive the perturbation bounds
    low = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - x) ** (params.eta_m + 1.0)) ** exponent - 1.0
    high = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * x ** (params.eta_m + 1.0)) ** exponent
    delta = np.where(u <= 0.5, low, high)
    out = np.where(site, x + delta, x)
    return np.clip(out, 0.0, 1.0)
