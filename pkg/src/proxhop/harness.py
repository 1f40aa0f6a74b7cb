"""Experiment runner: seeded runs, result persistence, and rankings.

A run reports its FINAL value, never the best value seen along the way, so
the numbers reflect where an algorithm actually ends up. Results are written
as one JSON file per experiment (canonical, full double precision) plus a
flat CSV with one row per seed for plotting. Files are written atomically
(temp file + rename).
"""

from __future__ import annotations

import csv
import json
import os
import statistics
import tempfile
import time
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import run_bh, run_zop
from .objectives import get_objective
from .pbh import PbhConfig, RunTrace, run_pbh
from .solvers import LocalSolver

ALGORITHMS = ("pbh", "bh", "zop")

# Stream tag separating start-point draws from the algorithms' own seeds.
_INIT_STREAM = 0x1217


class ConfigError(ValueError):
    """Unresolvable names or malformed experiment definitions."""


@dataclass(frozen=True)
class ExperimentSpec:
    objective: str
    dimension: int
    algorithm: str
    config: PbhConfig = PbhConfig()
    solver: LocalSolver = LocalSolver()
    seeds: Tuple[int, ...] = (0,)
    budget_seconds: Optional[float] = None
    init_radius: float = 5.0
    output_dir: Optional[str] = None

    def label(self) -> str:
        return f"{self.objective}-d{self.dimension}-{self.algorithm}"


@dataclass
class SeedResult:
    seed: int
    final_value: float
    final_point: List[float]
    iterations: int
    wall_seconds: float
    termination: str


@dataclass
class ResultRecord:
    objective: str
    dimension: int
    algorithm: str
    config: Dict
    solver: Dict
    seeds: List[int]
    per_seed: List[SeedResult] = field(default_factory=list)
    mean_final: float = float("nan")
    std_final: float = float("nan")  # population std, ddof=0
    median_final: float = float("nan")
    rank: Optional[int] = None

    def recompute_aggregates(self):
        finals = [s.final_value for s in self.per_seed]
        self.mean_final = statistics.fmean(finals)
        self.std_final = float(np.std(finals))
        self.median_final = float(np.median(finals))

    def to_dict(self) -> Dict:
        out = asdict(self)
        return out

    @classmethod
    def from_dict(cls, d: Dict) -> "ResultRecord":
        per_seed = [SeedResult(**s) for s in d.pop("per_seed")]
        return cls(per_seed=per_seed, **d)


def initial_point(seed: int, dimension: int, radius: float) -> np.ndarray:
    """Uniform start in [-radius, radius]^d, decoupled from the run's RNG."""
    rng = np.random.default_rng([seed, _INIT_STREAM])
    return rng.uniform(-radius, radius, size=dimension)


def _dispatch(algorithm: str, objective, solver, config, x0) -> RunTrace:
    if algorithm == "pbh":
        return run_pbh(objective, solver, config, x0)
    if algorithm == "bh":
        return run_bh(objective, solver, config, x0)
    if algorithm == "zop":
        return run_zop(objective, config, x0)
    raise ConfigError(f"unknown algorithm {algorithm!r}; available: {ALGORITHMS}")


def run_experiment(spec: ExperimentSpec) -> ResultRecord:
    """Run every seed of one (objective, dimension, algorithm) cell."""
    if spec.algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {spec.algorithm!r}; available: {ALGORITHMS}")
    if not spec.seeds:
        raise ConfigError("experiment needs at least one seed")
    try:
        objective = get_objective(spec.objective, spec.dimension)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    record = ResultRecord(
        objective=spec.objective,
        dimension=spec.dimension,
        algorithm=spec.algorithm,
        config=asdict(spec.config),
        solver=asdict(spec.solver),
        seeds=list(spec.seeds),
    )
    for seed in spec.seeds:
        cfg = replace(
            spec.config,
            seed=seed,
            budget_seconds=(
                spec.budget_seconds
                if spec.budget_seconds is not None
                else spec.config.budget_seconds
            ),
        )
        x0 = initial_point(seed, spec.dimension, spec.init_radius)
        t0 = time.perf_counter()
        trace = _dispatch(spec.algorithm, objective, spec.solver, cfg, x0)
        wall = time.perf_counter() - t0
        record.per_seed.append(
            SeedResult(
                seed=seed,
                final_value=trace.final_value,
                final_point=[float(v) for v in trace.final_point],
                iterations=len(trace.iterations),
                wall_seconds=wall,
                termination=trace.termination,
            )
        )
    record.recompute_aggregates()
    if spec.output_dir is not None:
        write_record(record, Path(spec.output_dir) / f"{spec.label()}.json")
    return record


def _atomic_write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_record(record: ResultRecord, path) -> Path:
    path = Path(path)
    _atomic_write_text(path, json.dumps(record.to_dict(), indent=2))
    return path


def read_record(path) -> ResultRecord:
    with open(path) as fh:
        return ResultRecord.from_dict(json.load(fh))


def write_runs_csv(records: Sequence[ResultRecord], path) -> Path:
    """Flat per-seed table: one row per (experiment, seed)."""
    path = Path(path)
    rows = []
    for rec in records:
        for s in rec.per_seed:
            rows.append(
                [
                    rec.objective,
                    rec.dimension,
                    rec.algorithm,
                    s.seed,
                    repr(s.final_value),  # shortest round-trip decimal
                    s.iterations,
                    repr(s.wall_seconds),
                    s.termination,
                ]
            )
    header = [
        "objective",
        "dimension",
        "algorithm",
        "seed",
        "final_value",
        "iterations",
        "wall_seconds",
        "termination",
    ]
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(str(c) for c in row))
    _atomic_write_text(path, "\n".join(out) + "\n")
    return path


def read_runs_csv(path) -> List[Dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for raw in reader:
            rows.append(
                {
                    "objective": raw["objective"],
                    "dimension": int(raw["dimension"]),
                    "algorithm": raw["algorithm"],
                    "seed": int(raw["seed"]),
                    "final_value": float(raw["final_value"]),
                    "iterations": int(raw["iterations"]),
                    "wall_seconds": float(raw["wall_seconds"]),
                    "termination": raw["termination"],
                }
            )
        return rows


def rank_algorithms(records: Sequence[ResultRecord]) -> List[Dict]:
    """Rank algorithms per (objective, dimension) by mean final value.

    Rank 1 is best; exact ties share the lower rank and the next distinct
    mean is ranked by how many entries beat it (competition ranking).
    """
    groups: Dict[Tuple[str, int], List[ResultRecord]] = {}
    for rec in records:
        groups.setdefault((rec.objective, rec.dimension), []).append(rec)
    table: List[Dict] = []
    for (objective, dimension), group in sorted(groups.items()):
        if not group:
            warnings.warn(f"empty group {objective} d={dimension}, skipped")
            continue
        means = sorted(r.mean_final for r in group)
        for rec in sorted(group, key=lambda r: (r.mean_final, r.algorithm)):
            rank = 1 + sum(1 for m in means if m < rec.mean_final)
            rec.rank = rank
            table.append(
                {
                    "objective": objective,
                    "dimension": dimension,
                    "algorithm": rec.algorithm,
                    "mean_final": rec.mean_final,
                    "std_final": rec.std_final,
                    "median_final": rec.median_final,
                    "rank": rank,
                }
            )
    return table


def write_ranking_csv(table: Sequence[Dict], path) -> Path:
    path = Path(path)
    header = ["objective", "dimension", "algorithm", "mean_final", "std_final", "median_final", "rank"]
    lines = [",".join(header)]
    for row in table:
        lines.append(
            ",".join(
                [
                    row["objective"],
                    str(row["dimension"]),
                    row["algorithm"],
                    repr(row["mean_final"]),
                    repr(row["std_final"]),
                    repr(row["median_final"]),
                    str(row["rank"]),
                ]
            )
        )
    _atomic_write_text(path, "\n".join(lines) + "\n")
    return path


def read_ranking_csv(path) -> List[Dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            {
                "objective": r["objective"],
                "dimension": int(r["dimension"]),
                "algorithm": r["algorithm"],
                "mean_final": float(r["mean_final"]),
                "std_final": float(r["std_final"]),
                "median_final": float(r["median_final"]),
                "rank": int(r["rank"]),
            }
            for r in reader
        ]
