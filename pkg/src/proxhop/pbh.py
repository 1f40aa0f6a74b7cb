"""Proximal basin hopping.

One iteration from the current point x:
  1. draw n samples from N(x, delta*gamma*Id),
  2. send each sample to a local minimizer,
  3. form the softmax-weighted mean of the minimizers (temperature delta),
  4. send the mean to a local minimizer; that is the candidate.
The candidate is rejected if strictly worse than x. On a non-strict
iteration (worse or tied) the hop scale gamma grows by eta1, widening the
search; on strict improvement it is held. The temperature either follows the
fixed delta/eta2 schedule or, by default, shrinks adaptively whenever the
weighted mean failed to concentrate on the best sampled value.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .barycenter import WeightedSampleSet, concentration_threshold, draw_samples, weighted_mean
from .kernels import LARGE_VALUE
from .objectives import Objective, Point
from .solvers import LocalSolver

TERMINATION_MAX_ITER = "max_iter"
TERMINATION_BUDGET = "budget"
TERMINATION_CONVERGED = "converged_tol"

IMPROVED_STRICT = "strict"
IMPROVED_EQUAL = "equal"
IMPROVED_WORSE = "worse"


@dataclass(frozen=True)
class PbhConfig:
    """Tunables of the sampled proximal basin hopping loop.

    n_samples=None resolves to 10 * dimension at run time. sample_growth is
    the per-iteration sample multiplier C; the count at iteration k is
    round(n0 * C^k) computed from k directly, so no rounding drift
    accumulates. convergence_tol stops a run once the objective is within
    that margin of a known minimum value (None disables the check).
    """

    gamma0: float = 5.0
    delta0: float = 0.5
    eta1: float = 1.5
    eta2: float = 2.0
    n_samples: Optional[int] = None
    sample_growth: float = 1.0
    adaptive_delta: bool = True
    max_iterations: int = 100
    budget_seconds: Optional[float] = None
    convergence_tol: Optional[float] = 1e-9
    seed: int = 0

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.delta0 > 0):
            raise ValueError("gamma0 and delta0 must be positive")
        if not (1.0 < self.eta1 < self.eta2):
            raise ValueError("schedules require 1 < eta1 < eta2")
        if self.n_samples is not None and self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.sample_growth < 1.0:
            raise ValueError("sample_growth must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise ValueError("budget_seconds must be positive")


@dataclass(frozen=True)
class IterationRecord:
    iterate: Point
    f_value: float
    gamma: float
    delta: float
    n_samples: int
    elapsed_seconds: float
    accepted: bool


@dataclass
class RunTrace:
    """Per-iteration history plus the final result of one run.

    monotone_f is False only for algorithms that may accept worsening moves
    (Metropolis basin hopping); for those the f_value sequence carries no
    nonincreasing guarantee.
    """

    iterations: List[IterationRecord] = field(default_factory=list)
    final_point: Point = None
    final_value: float = math.nan
    termination: str = TERMINATION_MAX_ITER
    monotone_f: bool = True


@dataclass(frozen=True)
class PbhStepResult:
    x_next: Point
    f_next: float
    improved: str  # strict | equal | worse
    minimized_points: np.ndarray
    sample_values: np.ndarray
    barycenter: Point
    barycenter_value: float
    candidate: Point
    candidate_value: float


def _finite_or_large(v: float) -> float:
    return float(v) if np.isfinite(v) else LARGE_VALUE


def pbh_step(
    objective: Objective,
    solver: LocalSolver,
    rng: np.random.Generator,
    x: Point,
    gamma: float,
    delta: float,
    n: int,
) -> PbhStepResult:
    """One sampled proximal step with rejection of strictly worse candidates.

    The improvement label comes from exact floating-point comparison of the
    candidate value against f(x); "equal" typically means the candidate is
    the same minimizer reproduced bit-identically by the deterministic
    solver.
    """
    fx = _finite_or_large(objective.eval(x))
    samples = draw_samples(rng, x, delta, gamma, n)
    minimized = solver.solve_batch(objective, samples)
    values = np.array([_finite_or_large(objective.eval(m)) for m in minimized])
    minimized = np.asarray(minimized)
    bary = weighted_mean(WeightedSampleSet(minimized, values, delta))
    bary_value = _finite_or_large(objective.eval(bary))
    candidate = solver.solve(objective, bary)
    candidate_value = _finite_or_large(objective.eval(candidate))

    if candidate_value > fx:
        improved = IMPROVED_WORSE
        x_next, f_next = np.array(x, dtype=np.float64), fx
    elif candidate_value == fx:
        improved = IMPROVED_EQUAL
        x_next, f_next = candidate, candidate_value
    else:
        improved = IMPROVED_STRICT
        x_next, f_next = candidate, candidate_value

    return PbhStepResult(
        x_next=x_next,
        f_next=f_next,
        improved=improved,
        minimized_points=minimized,
        sample_values=values,
        barycenter=bary,
        barycenter_value=bary_value,
        candidate=candidate,
        candidate_value=candidate_value,
    )


def adaptive_delta_update(
    current_delta: float,
    sample_values: np.ndarray,
    barycenter_value: float,
    *,
    points: Optional[np.ndarray] = None,
    eta2: float = 2.0,
    basin_radius: Optional[float] = None,
    tol: Optional[float] = None,
) -> float:
    """Shrink the temperature only when concentration failed.

    Concentration failed when the barycenter's value exceeds the best sampled
    value by more than tol (default 1e-9 * (1 + |best value|)). On failure
    the new temperature is the concentration threshold of the observed
    sample set, clamped to [current/eta2^2, current/eta2] so it strictly
    decreases but never collapses faster than two schedule steps. When the
    threshold is unavailable (tied minimum, vacuous geometry, no points
    given) the plain current/eta2 schedule step is used.

    basin_radius defaults to half the distance from the best point to the
    nearest strictly-worse point.
    """
    sample_values = np.asarray(sample_values, dtype=np.float64)
    if sample_values.size == 0:
        raise ValueError("sample_values must be nonempty")
    v_min = float(sample_values.min())
    if tol is None:
        tol = 1e-9 * (1.0 + abs(v_min))
    if barycenter_value <= v_min + tol:
        return current_delta

    lo = current_delta / (eta2 * eta2)
    hi = current_delta / eta2
    target = hi
    if points is not None:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if basin_radius is None:
            best = int(np.argmin(sample_values))
            worse = sample_values > v_min
            if np.any(worse):
                dists = np.linalg.norm(points[worse] - points[best], axis=1)
                nearest = float(dists.min())
                basin_radius = 0.5 * nearest if nearest > 0 else None
        if basin_radius is not None and basin_radius > 0:
            try:
                target = concentration_threshold(sample_values, points, basin_radius)
            except ValueError:
                target = hi
    return min(max(target, lo), hi)


def _resolve_n0(config: PbhConfig, dimension: int) -> int:
    return config.n_samples if config.n_samples is not None else 10 * dimension


def run_pbh(
    objective: Objective,
    solver: LocalSolver,
    config: PbhConfig,
    x0: Point,
) -> RunTrace:
    """Run the full loop: pbh_step plus the gamma/delta/N schedules."""
    x = np.asarray(x0, dtype=np.float64)
    if x.shape != (objective.dimension,) or not np.all(np.isfinite(x)):
        raise ValueError("x0 must be a finite point of the objective's dimension")
    rng = np.random.default_rng(config.seed)
    n0 = _resolve_n0(config, objective.dimension)
    gamma = config.gamma0
    delta = config.delta0
    fx = _finite_or_large(objective.eval(x))
    f_target = None
    if config.convergence_tol is not None and objective.known_minimum is not None:
        f_target = objective.known_minimum[1] + config.convergence_tol

    trace = RunTrace()
    start = time.perf_counter()
    for k in range(config.max_iterations):
        if config.budget_seconds is not None and k > 0:
            if time.perf_counter() - start >= config.budget_seconds:
                trace.termination = TERMINATION_BUDGET
                break
        n_k = max(1, round(n0 * config.sample_growth**k))
        step = pbh_step(objective, solver, rng, x, gamma, delta, n_k)
        accepted = step.improved != IMPROVED_WORSE
        if accepted:
            x, fx = step.x_next, step.f_next
        trace.iterations.append(
            IterationRecord(
                iterate=np.array(x),
                f_value=fx,
                gamma=gamma,
                delta=delta,
                n_samples=n_k,
                elapsed_seconds=time.perf_counter() - start,
                accepted=accepted,
            )
        )
        if step.improved != IMPROVED_STRICT:
            gamma = gamma * config.eta1
        if config.adaptive_delta:
            delta = adaptive_delta_update(
                delta,
                step.sample_values,
                step.barycenter_value,
                points=step.minimized_points,
                eta2=config.eta2,
            )
        else:
            delta = delta / config.eta2
        if f_target is not None and fx <= f_target:
            trace.termination = TERMINATION_CONVERGED
            break

    trace.final_point = np.array(x)
    trace.final_value = fx
    return trace
