"""Declarative run configuration with the benchmark defaults built in, plus
YAML ingestion for the command-line tools and the session service."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
import yaml

from .learning import ConsultationSchedule
from .problems import GoldenSpec, NoiseSpec, ProblemSpec
from .refpoints import default_points, das_dennis, two_layer
from .variation import VariationParams

__all__ = ["RunConfig", "RunResult", "ConfigError", "load_config", "config_from_dict"]

ALGORITHMS = ("moead", "nsga3")

# generations per problem family and objective count
DEFAULT_GENERATIONS = {
    "DTLZ1": {3: 400, 5: 600, 8: 750, 10: 1000},
    "DTLZ2": {3: 250, 5: 350, 8: 500, 10: 750},
    "DTLZ3": {3: 1000, 5: 1000, 8: 1000, 10: 1500},
    "DTLZ4": {3: 600, 5: 1000, 8: 1250, 10: 2000},
}


class ConfigError(ValueError):
    """Invalid configuration, with the offending field named."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs.  Optional fields default from the benchmark
    tables when left unset."""

    problem: ProblemSpec
    algorithm: str = "moead"
    interactive: bool = True
    roi: str = "center"
    weights: tuple | None = None          # explicit utopia weights override
    kappa: float = 0.0
    tau: int = 25
    mu_first: int | None = None           # default: 2m+1
    mu_later: int = 10
    variation: VariationParams = field(default_factory=VariationParams)
    eta: float = 0.5
    population: int | None = None
    generations: int | None = None
    seed: int = 1
    delta: float = 0.1
    neighborhood_size: int = 20
    nr: int | None = 2
    divisions: tuple | int | None = None  # lattice override
    elicitation_source: str = "avf"       # avf | golden
    kernel: str = "squared"               # squared | norm
    guard: str = "rescored"               # rescored | literal
    oracle: str = "simulated"             # simulated | human

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError("algorithm", f"expected one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.roi not in ("center", "boundary"):
            raise ConfigError("roi", f"expected 'center' or 'boundary', got {self.roi!r}")
        if self.kappa < 0:
            raise ConfigError("kappa", "noise strength must be nonnegative")
        if self.tau <= 1:
            raise ConfigError("tau", "consultation interval must exceed 1")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError("eta", "step size must lie in [0, 1]")
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError("delta", "neighborhood-bypass probability must lie in [0, 1]")
        if self.elicitation_source not in ("avf", "golden"):
            raise ConfigError("elicitation_source", f"expected 'avf' or 'golden', got {self.elicitation_source!r}")
        if self.kernel not in ("norm", "squared"):
            raise ConfigError("kernel", f"expected 'norm' or 'squared', got {self.kernel!r}")
        if self.guard not in ("literal", "rescored"):
            raise ConfigError("guard", f"expected 'literal' or 'rescored', got {self.guard!r}")
        if self.oracle not in ("simulated", "human"):
            raise ConfigError("oracle", f"expected 'simulated' or 'human', got {self.oracle!r}")
        if self.generations is not None and self.generations < 1:
            raise ConfigError("generations", "must be positive")
        if self.population is not None and self.population < 4:
            raise ConfigError("population", "too small to breed from")

    # ---- resolved settings ----------------------------------------

    def reference_points(self) -> np.ndarray:
        if self.divisions is None:
            return default_points(self.problem.m)
        if isinstance(self.divisions, (tuple, list)):
            return two_layer(self.problem.m, *self.divisions)
        return das_dennis(self.problem.m, int(self.divisions))

    def resolved_population(self) -> int:
        if self.population is not None:
            return self.population
        n_refs = self.reference_points().shape[0]
        if self.algorithm == "nsga3":
            return n_refs + (-n_refs) % 4  # round up to a multiple of 4
        return n_refs

    def resolved_generations(self) -> int:
        if self.generations is not None:
            return self.generations
        table = DEFAULT_GENERATIONS[self.problem.id]
        try:
            return table[self.problem.m]
        except KeyError:
            raise ConfigError("generations", f"no default for m={self.problem.m}; set explicitly") from None

    def golden(self) -> GoldenSpec:
        if self.weights is not None:
            return GoldenSpec(tuple(self.weights))
        return GoldenSpec.for_roi(self.problem.m, self.roi)

    def noise(self) -> NoiseSpec | None:
        if self.kappa <= 0:
            return None
        return NoiseSpec(self.kappa, self.resolved_generations())

    def schedule(self) -> ConsultationSchedule:
        mu_first = self.mu_first if self.mu_first is not None else 2 * self.problem.m + 1
        return ConsultationSchedule(tau=self.tau, mu_first=mu_first, mu_later=self.mu_later)

    def replace(self, **kwargs) -> "RunConfig":
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        d = {
            "problem": {"id": self.problem.id, "m": self.problem.m, "alpha": self.problem.alpha},
            "variation": dataclasses.asdict(self.variation),
        }
        for f in dataclasses.fields(self):
            if f.name in ("problem", "variation"):
                continue
            d[f.name] = getattr(self, f.name)
        if isinstance(d.get("weights"), tuple):
            d["weights"] = list(d["weights"])
        if isinstance(d.get("divisions"), tuple):
            d["divisions"] = list(d["divisions"])
        return d


def config_from_dict(data: dict) -> RunConfig:
    """Build a RunConfig from parsed YAML/JSON, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError("config", "expected a mapping at the top level")
    data = dict(data)
    problem_raw = data.pop("problem", None)
    if not isinstance(problem_raw, dict) or "id" not in problem_raw or "m" not in problem_raw:
        raise ConfigError("problem", "expected a mapping with 'id' and 'm'")
    extra_p = set(problem_raw) - {"id", "m", "alpha"}
    if extra_p:
        raise ConfigError("problem", f"unknown keys {sorted(extra_p)}")
    try:
        problem = ProblemSpec(str(problem_raw["id"]).upper(), int(problem_raw["m"]),
                              float(problem_raw.get("alpha", 100.0)))
    except ValueError as exc:
        raise ConfigError("problem", str(exc)) from None
    variation_raw = data.pop("variation", {})
    if not isinstance(variation_raw, dict):
        raise ConfigError("variation", "expected a mapping")
    try:
        variation = VariationParams(**variation_raw)
    except TypeError as exc:
        raise ConfigError("variation", str(exc)) from None
    except ValueError as exc:
        raise ConfigError("variation", str(exc)) from None
    known = {f.name for f in dataclasses.fields(RunConfig)} - {"problem", "variation"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError("config", f"unknown keys {sorted(unknown)}")
    if isinstance(data.get("weights"), list):
        data["weights"] = tuple(data["weights"])
    if isinstance(data.get("divisions"), list):
        data["divisions"] = tuple(data["divisions"])
    try:
        return RunConfig(problem=problem, variation=variation, **data)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from None


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(yaml.safe_load(fh))


@dataclass
class RunResult:
    """Everything a finished (or aborted) run leaves behind."""

    config: dict
    seed: int
    trajectory: list
    final_x: np.ndarray
    final_f: np.ndarray
    evals: int
    scored_log: list
    aborted: bool = False

    @property
    def final_error(self) -> float:
        vals = [v for v in self.trajectory if v is not None]
        return vals[-1] if vals else float("nan")

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "seed": self.seed,
            "trajectory": self.trajectory,
            "final_objectives": np.asarray(self.final_f).tolist(),
            "final_decisions": np.asarray(self.final_x).tolist(),
            "evals": self.evals,
            "scored_log": self.scored_log,
            "aborted": self.aborted,
            "final_error": None if np.isnan(self.final_error) else self.final_error,
        }
