"""The interactive loop: step the chosen optimizer, pause for a consultation
every tau generations, retrain the surrogate, migrate the reference set, and
log the per-generation error against the hidden target point."""

from __future__ import annotations

import numpy as np

from . import moead as _moead
from . import nsga3 as _nsga3
from .config import RunConfig, RunResult
from .core import approximation_error
from .elicitation import elicit, identify_promising, resolve_best
from .learning import GoldenModel, SimulatedOracle, dm_score, pick_candidates, train_avf
from .problems import golden_point
from .refpoints import ReferenceSet

__all__ = ["RunAborted", "run_single"]


class RunAborted(Exception):
    """Raised into the engine when the scoring authority goes away."""


class _MoeadDriver:
    def __init__(self, config: RunConfig, rng: np.random.Generator):
        refset = ReferenceSet.create(config.reference_points(), config.neighborhood_size)
        self.problem = config.problem
        self.params = config.variation
        self.state = _moead.moead_init(self.problem, refset, rng, delta=config.delta, nr=config.nr)

    def step(self, rng):
        _moead.moead_generation(self.state, self.problem, self.params, rng)

    def adopt(self, points):
        _moead.adopt_reference_set(self.state, points)

    @property
    def ref_points(self):
        return self.state.refset.points

    @property
    def pop(self):
        return self.state.pop

    @property
    def z(self):
        return self.state.z

    def association(self):
        return self.state.association()


class _Nsga3Driver:
    def __init__(self, config: RunConfig, rng: np.random.Generator):
        self.problem = config.problem
        self.params = config.variation
        self.state = _nsga3.nsga3_init(
            self.problem, config.reference_points(), config.resolved_population(), rng
        )

    def step(self, rng):
        _nsga3.nsga3_generation(self.state, self.problem, self.params, rng)

    def adopt(self, points):
        _nsga3.adopt_reference_set(self.state, points)

    @property
    def ref_points(self):
        return self.state.points

    @property
    def pop(self):
        return self.state.pop

    @property
    def z(self):
        return self.state.z

    def association(self):
        return self.state.association()


def _make_driver(config: RunConfig, rng: np.random.Generator):
    if config.algorithm == "moead":
        return _MoeadDriver(config, rng)
    return _Nsga3Driver(config, rng)


def run_single(config: RunConfig, oracle=None, progress=None) -> RunResult:
    """Execute one run to completion (or abort).

    ``oracle`` defaults to the simulated decision maker; the session service
    passes a blocking one instead.  ``progress``, when given, is called as
    progress(generation, trajectory_value) after every generation and may
    raise RunAborted to cancel the run at that boundary.
    """
    generations = config.resolved_generations()
    schedule = config.schedule()
    seed_seq = np.random.SeedSequence(config.seed)
    opt_stream, dm_stream = seed_seq.spawn(2)
    opt_rng = np.random.default_rng(opt_stream)

    human = config.oracle == "human"
    # A live decision maker has no known value function; keep the error
    # metric only when the config pins the weights explicitly (scripted
    # clients do), otherwise the trajectory tracks the best surrogate score.
    golden = None if (human and config.weights is None) else config.golden()
    target = golden_point(config.problem, golden) if golden is not None else None
    if oracle is None:
        if human:
            raise ValueError("a human-oracle run needs an externally supplied oracle")
        oracle = SimulatedOracle(golden, config.noise(), np.random.default_rng(dm_stream))

    if config.elicitation_source == "golden" and golden is None:
        raise ValueError("golden-function elicitation needs known utopia weights")

    driver = _make_driver(config, opt_rng)
    if hasattr(oracle, "attach_population_source"):
        oracle.attach_population_source(lambda: driver.pop.f)
    records: list = []
    model = None
    # the utopia study arm swaps the learned surrogate for the true value
    # function inside the elicitation step only; candidate selection still
    # runs on the learned model
    elicit_model = GoldenModel(golden) if config.elicitation_source == "golden" else None
    session = 0
    trajectory: list = []
    aborted = False

    try:
        for gen in range(1, generations + 1):
            driver.step(opt_rng)
            if config.interactive and gen % schedule.tau == 0 and gen < generations:
                session += 1
                assoc = driver.association()
                candidates = pick_candidates(
                    driver.pop.f, driver.ref_points, assoc, model, schedule, session, driver.z
                )
                new_records = dm_score(oracle, candidates, gen, session, records)
                model = train_avf(records, kernel=config.kernel)
                ranker = elicit_model if elicit_model is not None else model
                best = resolve_best(new_records, candidates)
                promising = identify_promising(
                    driver.pop.f, assoc, ranker, min(schedule.mu(session), driver.pop.size)
                )
                migrated = elicit(
                    driver.ref_points, promising, best, ranker, driver.z, config.eta, config.guard
                )
                driver.adopt(migrated)
            if target is not None:
                value = approximation_error(driver.pop.f, target)
            elif model is not None:
                value = float(np.min(model.predict(driver.pop.f)))
            else:
                value = None
            trajectory.append(value)
            if progress is not None:
                progress(gen, value)
    except RunAborted:
        aborted = True

    state = driver.state
    return RunResult(
        config=config.to_dict(),
        seed=config.seed,
        trajectory=trajectory,
        final_x=state.pop.x.copy(),
        final_f=state.pop.f.copy(),
        evals=state.evals,
        scored_log=[
            {"session": r.session, "objectives": list(r.objectives), "score": r.score}
            for r in records
        ],
        aborted=aborted,
    )
