"""Headless experiment runner: replicate fans, parameter sweeps, persisted
trajectories, and the median/IQR + signed-rank summary tables."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import RunConfig, RunResult, ConfigError, config_from_dict
from .engine import run_single
from .problems import ProblemSpec
from .stats import median_iqr, wilcoxon_signed_rank

__all__ = [
    "OUTPUT_ENV",
    "default_out_dir",
    "run_replicates",
    "run_experiment",
    "sweep",
    "report",
    "load_plan",
]

OUTPUT_ENV = "IEMO_RESULTS_DIR"

SWEEP_PARAMS = ("mu", "tau", "eta", "kappa")


def default_out_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "results"))


def _execute(config: RunConfig) -> RunResult:
    return run_single(config)


def run_replicates(config: RunConfig, seeds, workers: int = 1) -> list[RunResult]:
    """One run per seed; order of results follows the seed list regardless
    of scheduling."""
    configs = [config.replace(seed=int(s)) for s in seeds]
    if workers <= 1 or len(configs) <= 1:
        return [_execute(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_execute, configs))


def _cell_label(problem: ProblemSpec, roi: str, algorithm: str, interactive: bool, suffix: str = "") -> str:
    arm = "interactive" if interactive else "baseline"
    tag = f"{problem.id.lower()}-m{problem.m}-{roi}-{algorithm}-{arm}"
    return tag + (f"-{suffix}" if suffix else "")


def load_plan(path) -> dict:
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        plan = yaml.safe_load(fh)
    if not isinstance(plan, dict):
        raise ConfigError("plan", "expected a mapping at the top level")
    return plan


def _plan_seeds(plan: dict) -> list[int]:
    seeds = plan.get("seeds", 21)
    if isinstance(seeds, int):
        return list(range(1, seeds + 1))
    return [int(s) for s in seeds]


def run_experiment(plan: dict, out_dir=None, workers: int = 1) -> dict:
    """Run every (problem, roi, algorithm, arm) cell of a replicate plan and
    persist per-run trajectories, a flat CSV of final errors, and a summary
    with interactive-versus-baseline statistics."""
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    (out / "runs").mkdir(parents=True, exist_ok=True)
    seeds = _plan_seeds(plan)
    rois = plan.get("roi", ["center"])
    algorithms = plan.get("algorithms", ["moead"])
    arms = plan.get("arms", ["interactive", "baseline"])
    overrides = plan.get("overrides", {})
    rows = []
    for prob in plan.get("problems", []):
        problem = ProblemSpec(str(prob["id"]).upper(), int(prob["m"]))
        for roi in rois:
            for algorithm in algorithms:
                for arm in arms:
                    config = config_from_dict(
                        {
                            "problem": {"id": problem.id, "m": problem.m},
                            "algorithm": algorithm,
                            "roi": roi,
                            "interactive": arm == "interactive",
                            **overrides,
                        }
                    )
                    label = _cell_label(problem, roi, algorithm, config.interactive)
                    results = run_replicates(config, seeds, workers)
                    for seed, res in zip(seeds, results):
                        _save_run(out / "runs" / f"{label}__seed{seed}.json", res)
                        rows.append(
                            {
                                "problem": problem.id,
                                "m": problem.m,
                                "roi": roi,
                                "algorithm": algorithm,
                                "interactive": config.interactive,
                                "seed": seed,
                                "final_error": res.final_error,
                            }
                        )
    _write_csv(out / "results.csv", rows)
    summary = summarize(rows)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
    return summary


def sweep(param: str, values, base: RunConfig, seeds, out_dir=None, workers: int = 1) -> dict:
    """Replicate fan per parameter value.  The mu sweep accepts the special
    value 'utopia', which swaps the learned surrogate for the true value
    function during elicitation."""
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    (out / "runs").mkdir(parents=True, exist_ok=True)
    table = {}
    rows = []
    for value in values:
        if param == "mu" and str(value) == "utopia":
            config = base.replace(elicitation_source="golden")
        elif param == "mu":
            config = base.replace(mu_later=int(value))
        elif param == "tau":
            config = base.replace(tau=int(value))
        elif param == "eta":
            config = base.replace(eta=float(value))
        else:
            config = base.replace(kappa=float(value))
        label = _cell_label(config.problem, config.roi, config.algorithm, config.interactive, f"{param}{value}")
        results = run_replicates(config, seeds, workers)
        errors = [r.final_error for r in results]
        for seed, res in zip(seeds, results):
            _save_run(out / "runs" / f"{label}__seed{seed}.json", res)
            rows.append(
                {
                    "problem": config.problem.id,
                    "m": config.problem.m,
                    "roi": config.roi,
                    "algorithm": config.algorithm,
                    "interactive": config.interactive,
                    "param": param,
                    "value": value,
                    "seed": seed,
                    "final_error": res.final_error,
                }
            )
        med, iqr = median_iqr(errors)
        table[str(value)] = {"median": med, "iqr": iqr, "errors": errors}
    _write_csv(out / f"sweep_{param}.csv", rows)
    summary = {"param": param, "cells": table}
    with open(out / f"sweep_{param}.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
    return summary


def summarize(rows: list[dict]) -> dict:
    """Fold flat result rows into per-cell medians with paired statistics
    wherever a cell has both arms."""
    cells: dict[tuple, dict] = {}
    for row in rows:
        key = (row["problem"], row["m"], row["roi"], row["algorithm"])
        arm = "interactive" if row["interactive"] in (True, "True") else "baseline"
        cell = cells.setdefault(key, {"interactive": {}, "baseline": {}})
        cell[arm][int(row["seed"])] = float(row["final_error"])
    out = []
    for (problem, m, roi, algorithm), cell in sorted(cells.items(), key=lambda kv: repr(kv[0])):
        entry = {"problem": problem, "m": m, "roi": roi, "algorithm": algorithm}
        for arm in ("interactive", "baseline"):
            if cell[arm]:
                errors = [cell[arm][s] for s in sorted(cell[arm])]
                med, iqr = median_iqr(errors)
                entry[arm] = {"median": med, "iqr": iqr, "n": len(errors)}
        both = set(cell["interactive"]) & set(cell["baseline"])
        if len(both) >= 2:
            seeds = sorted(both)
            a = [cell["interactive"][s] for s in seeds]
            b = [cell["baseline"][s] for s in seeds]
            try:
                entry["p_value"] = wilcoxon_signed_rank(a, b)
            except ValueError:
                entry["p_value"] = None
        out.append(entry)
    return {"cells": out}


def report(out_dir=None) -> dict:
    """Rebuild the summary table from a stored results.csv."""
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    path = out / "results.csv"
    if not path.exists():
        raise FileNotFoundError(f"no results.csv under {out}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        row["interactive"] = row["interactive"] == "True"
        row["m"] = int(row["m"])
    return summarize(rows)


def _save_run(path: Path, result: RunResult):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.to_dict(), fh)


def _write_csv(path: Path, rows: list[dict]):
    if not rows:
        return
    fields = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
