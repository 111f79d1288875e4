"""Command-line entry points for headless runs, replicate experiments,
parameter sweeps, report regeneration, and the consultation service."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .engine import run_single
from .harness import default_out_dir, load_plan, report, run_experiment, sweep

__all__ = ["main"]


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    result = run_single(config)
    out = Path(args.out) if args.out else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"run_seed{config.seed}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.to_dict(), fh)
    print(f"final error: {result.final_error:.6g}  ({result.evals} evaluations)")
    print(f"wrote {path}")
    return 1 if result.aborted else 0


def _cmd_experiment(args) -> int:
    plan = load_plan(args.plan)
    summary = run_experiment(plan, out_dir=args.out, workers=args.workers)
    for cell in summary["cells"]:
        line = f"{cell['problem']} m={cell['m']} roi={cell['roi']} {cell['algorithm']}:"
        for arm in ("interactive", "baseline"):
            if arm in cell:
                line += f"  {arm} median {cell[arm]['median']:.5f} (iqr {cell[arm]['iqr']:.2e})"
        if cell.get("p_value") is not None:
            line += f"  p={cell['p_value']:.4g}"
        print(line)
    return 0


def _cmd_sweep(args) -> int:
    base = load_config(args.config)
    values = [v if v == "utopia" else v for v in args.values.split(",")]
    seeds = list(range(1, args.seeds + 1))
    summary = sweep(args.param, values, base, seeds, out_dir=args.out, workers=args.workers)
    for value, cell in summary["cells"].items():
        print(f"{args.param}={value}: median {cell['median']:.5f} (iqr {cell['iqr']:.2e})")
    return 0


def _cmd_report(args) -> int:
    summary = report(args.dir)
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host = args.host or os.environ.get("IEMO_BIND_HOST", "127.0.0.1")
    port = args.port or int(os.environ.get("IEMO_BIND_PORT", "8580"))
    uvicorn.run(create_app(), host=host, port=port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="iemo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single configured run")
    p_run.add_argument("config", help="YAML run configuration")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="output directory (default $IEMO_RESULTS_DIR or ./results)")
    p_run.set_defaults(func=_cmd_run)

    p_exp = sub.add_parser("experiment", help="run a replicate plan with statistics")
    p_exp.add_argument("plan", help="YAML replicate plan")
    p_exp.add_argument("--out", default=None)
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.set_defaults(func=_cmd_experiment)

    p_sw = sub.add_parser("sweep", help="replicate fan over one parameter")
    p_sw.add_argument("config", help="YAML base run configuration")
    p_sw.add_argument("--param", required=True, choices=["mu", "tau", "eta", "kappa"])
    p_sw.add_argument("--values", required=True, help="comma-separated values; mu accepts 'utopia'")
    p_sw.add_argument("--seeds", type=int, default=21)
    p_sw.add_argument("--out", default=None)
    p_sw.add_argument("--workers", type=int, default=1)
    p_sw.set_defaults(func=_cmd_sweep)

    p_rep = sub.add_parser("report", help="rebuild the summary from stored results")
    p_rep.add_argument("dir", nargs="?", default=None)
    p_rep.set_defaults(func=_cmd_report)

    p_srv = sub.add_parser("serve", help="start the consultation session service")
    p_srv.add_argument("--host", default=None)
    p_srv.add_argument("--port", type=int, default=None)
    p_srv.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
