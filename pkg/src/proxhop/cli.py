"""Command-line interface.

    proxhop run --config FILE [overrides...]   run experiment matrices
    proxhop rank --in DIR --out FILE           rank persisted results
    proxhop theory <subcommand>                numeric verification, JSON out

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import theory
from .harness import (
    ALGORITHMS,
    ConfigError,
    ExperimentSpec,
    rank_algorithms,
    read_record,
    run_experiment,
    write_ranking_csv,
    write_runs_csv,
)
from .objectives import OBJECTIVE_NAMES, get_objective
from .pbh import PbhConfig
from .solvers import LocalSolver

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxhop")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment matrix")
    run.add_argument("--config", help="JSON experiment file")
    run.add_argument("--objective", choices=OBJECTIVE_NAMES)
    run.add_argument("--dim", type=int)
    run.add_argument("--algo", choices=ALGORITHMS)
    run.add_argument("--samples", type=int, help="sample count per iteration")
    run.add_argument("--gamma0", type=float)
    run.add_argument("--delta0", type=float)
    run.add_argument("--eta1", type=float)
    run.add_argument("--eta2", type=float)
    run.add_argument("--sample-growth", type=float)
    run.add_argument("--max-iterations", type=int)
    run.add_argument("--adaptive-delta", choices=("on", "off"))
    run.add_argument("--local-solver", choices=("gd", "lbfgs"))
    run.add_argument("--local-steps", type=int)
    run.add_argument("--gd-step", type=float)
    run.add_argument("--lbfgs-memory", type=int)
    run.add_argument("--budget-seconds", type=float)
    run.add_argument("--seeds", help="comma-separated, e.g. 1,2,3")
    run.add_argument("--init-radius", type=float)
    run.add_argument("--out", help="output directory")

    rank = sub.add_parser("rank", help="rank persisted result records")
    rank.add_argument("--in", dest="in_dir", required=True)
    rank.add_argument("--out", required=True)

    th = sub.add_parser("theory", help="numeric verification utilities")
    th_sub = th.add_subparsers(dest="theory_command", required=True)

    enum = th_sub.add_parser("enumerate", help="enumerate a 1D landscape")
    enum.add_argument("--objective", default="rastrigin", choices=("rastrigin", "griewank"))
    enum.add_argument("--radius", type=float, default=5.0)
    enum.add_argument("--grid", type=int, default=20001)

    pa = th_sub.add_parser("potential-argmin")
    pa.add_argument("--objective", default="rastrigin", choices=("rastrigin", "griewank"))
    pa.add_argument("--radius", type=float, default=5.0)
    pa.add_argument("--grid", type=int, default=20001)
    pa.add_argument("--x", type=float, required=True)
    pa.add_argument("--gamma", type=float, required=True)

    ip = th_sub.add_parser("ideal-pbh")
    ip.add_argument("--objective", default="rastrigin", choices=("rastrigin", "griewank"))
    ip.add_argument("--radius", type=float, default=5.0)
    ip.add_argument("--grid", type=int, default=20001)
    ip.add_argument("--x0", type=float, required=True)
    ip.add_argument("--gamma0", type=float, required=True)
    ip.add_argument("--eta", type=float, default=2.0)
    ip.add_argument("--max-iter", type=int, default=200)

    cdf = th_sub.add_parser("ncx2-cdf")
    cdf.add_argument("--dof", type=int, required=True)
    cdf.add_argument("--noncentrality", type=float, required=True)
    cdf.add_argument("--t", type=float, required=True)

    rs = th_sub.add_parser("required-samples")
    rs.add_argument("--p", type=float, required=True)
    rs.add_argument("--alpha", type=float, required=True)

    bh = th_sub.add_parser("ball-hit")
    bh.add_argument("--center-distance", type=float, required=True)
    bh.add_argument("--sigma", type=float, required=True)
    bh.add_argument("--r", type=float, required=True)
    bh.add_argument("--dof", type=int, required=True)

    return parser


def _parse_seeds(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --seeds value {text!r}") from exc


def _specs_from_config_file(path: str) -> List[Dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    experiments = doc.get("experiments")
    if not isinstance(experiments, list) or not experiments:
        raise ConfigError("config must contain a non-empty 'experiments' list")
    output_dir = doc.get("output_dir")
    expanded = []
    for entry in experiments:
        if not isinstance(entry, dict):
            raise ConfigError("each experiment must be an object")
        objectives = entry.get("objective", "rastrigin")
        dims = entry.get("dimension", 2)
        algos = entry.get("algorithm", "pbh")
        for obj in objectives if isinstance(objectives, list) else [objectives]:
            for dim in dims if isinstance(dims, list) else [dims]:
                for algo in algos if isinstance(algos, list) else [algos]:
                    cell = dict(entry)
                    cell["objective"] = obj
                    cell["dimension"] = dim
                    cell["algorithm"] = algo
                    if output_dir is not None and "output_dir" not in cell:
                        cell["output_dir"] = output_dir
                    expanded.append(cell)
    return expanded


def _apply_overrides(cell: Dict, args: argparse.Namespace) -> Dict:
    if args.objective is not None:
        cell["objective"] = args.objective
    if args.dim is not None:
        cell["dimension"] = args.dim
    if args.algo is not None:
        cell["algorithm"] = args.algo
    if args.seeds is not None:
        cell["seeds"] = _parse_seeds(args.seeds)
    if args.budget_seconds is not None:
        cell["budget_seconds"] = args.budget_seconds
    if args.init_radius is not None:
        cell["init_radius"] = args.init_radius
    if args.out is not None:
        cell["output_dir"] = args.out
    cfg = dict(cell.get("config", {}))
    for flag, key in [
        ("samples", "n_samples"),
        ("gamma0", "gamma0"),
        ("delta0", "delta0"),
        ("eta1", "eta1"),
        ("eta2", "eta2"),
        ("sample_growth", "sample_growth"),
        ("max_iterations", "max_iterations"),
    ]:
        value = getattr(args, flag)
        if value is not None:
            cfg[key] = value
    if args.adaptive_delta is not None:
        cfg["adaptive_delta"] = args.adaptive_delta == "on"
    cell["config"] = cfg
    solver = dict(cell.get("solver", {}))
    for flag, key in [
        ("local_solver", "method"),
        ("local_steps", "max_steps"),
        ("gd_step", "step_size"),
        ("lbfgs_memory", "memory"),
    ]:
        value = getattr(args, flag)
        if value is not None:
            solver[key] = value
    cell["solver"] = solver
    return cell


def _spec_from_cell(cell: Dict) -> ExperimentSpec:
    known = {
        "objective",
        "dimension",
        "algorithm",
        "config",
        "solver",
        "seeds",
        "budget_seconds",
        "init_radius",
        "output_dir",
    }
    unknown = set(cell) - known
    if unknown:
        raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
    for required in ("objective", "dimension", "algorithm"):
        if required not in cell:
            raise ConfigError(f"experiment is missing {required!r}")
    try:
        config = PbhConfig(**cell.get("config", {}))
        solver = LocalSolver(**cell.get("solver", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    seeds = cell.get("seeds", [0])
    if not isinstance(seeds, (list, tuple)) or not seeds:
        raise ConfigError("seeds must be a non-empty list")
    return ExperimentSpec(
        objective=cell["objective"],
        dimension=int(cell["dimension"]),
        algorithm=cell["algorithm"],
        config=config,
        solver=solver,
        seeds=tuple(int(s) for s in seeds),
        budget_seconds=cell.get("budget_seconds"),
        init_radius=float(cell.get("init_radius", 5.0)),
        output_dir=cell.get("output_dir"),
    )


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        cells = _specs_from_config_file(args.config)
    else:
        if args.objective is None or args.dim is None or args.algo is None:
            raise ConfigError("without --config, provide --objective, --dim and --algo")
        cells = [{"objective": args.objective, "dimension": args.dim, "algorithm": args.algo}]
    specs = [_spec_from_cell(_apply_overrides(cell, args)) for cell in cells]
    # Validate every cell before any run starts.
    for spec in specs:
        try:
            get_objective(spec.objective, spec.dimension)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if spec.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {spec.algorithm!r}")
    records = []
    for spec in specs:
        record = run_experiment(spec)
        records.append(record)
        print(
            f"{spec.label()}: mean_final={record.mean_final:.6g} "
            f"std={record.std_final:.3g} seeds={len(spec.seeds)}"
        )
    out_dirs = {s.output_dir for s in specs if s.output_dir}
    for out_dir in out_dirs:
        write_runs_csv(
            [r for r, s in zip(records, specs) if s.output_dir == out_dir],
            Path(out_dir) / "runs.csv",
        )
    return EXIT_OK


def _cmd_rank(args: argparse.Namespace) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        raise ConfigError(f"{in_dir} is not a directory")
    records = [read_record(p) for p in sorted(in_dir.glob("*.json"))]
    if not records:
        raise ConfigError(f"no result records found in {in_dir}")
    table = rank_algorithms(records)
    write_ranking_csv(table, args.out)
    for row in table:
        print(
            f"{row['objective']} d={row['dimension']} {row['algorithm']}: "
            f"rank {row['rank']} (mean {row['mean_final']:.6g})"
        )
    return EXIT_OK


def _theory_model(args: argparse.Namespace) -> theory.LandscapeModel:
    objective = get_objective(args.objective, 1)
    return theory.enumerate_1d_landscape(objective, args.radius, args.grid)


def _cmd_theory(args: argparse.Namespace) -> int:
    cmd = args.theory_command
    if cmd == "enumerate":
        model = _theory_model(args)
        payload = {
            "minimizers": [{"location": loc, "value": val} for loc, val in model.minimizers],
            "basin_boundaries": list(model.basin_boundaries),
            "domain_radius": model.domain_radius,
        }
    elif cmd == "potential-argmin":
        model = _theory_model(args)
        idx = theory.potential_argmin(model, args.x, args.gamma)
        payload = {
            "argmin_indices": idx,
            "locations": [model.minimizers[i][0] for i in idx],
        }
    elif cmd == "ideal-pbh":
        model = _theory_model(args)
        trajectory, converged, used = theory.ideal_pbh(
            model, args.x0, args.gamma0, args.eta, args.max_iter
        )
        payload = {
            "trajectory": trajectory,
            "converged": converged,
            "iterations_used": used,
        }
    elif cmd == "ncx2-cdf":
        payload = {"cdf": theory.noncentral_chisq_cdf(args.dof, args.noncentrality, args.t)}
    elif cmd == "required-samples":
        payload = {"n": theory.required_samples(args.p, args.alpha)}
    elif cmd == "ball-hit":
        payload = {
            "probability": theory.ball_hit_probability(
                args.center_distance, args.sigma, args.r, args.dof
            )
        }
    else:  # pragma: no cover - argparse enforces choices
        raise ConfigError(f"unknown theory subcommand {cmd!r}")
    print(json.dumps(payload))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "rank":
            return _cmd_rank(args)
        return _cmd_theory(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
