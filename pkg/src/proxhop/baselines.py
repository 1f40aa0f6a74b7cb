"""Comparison algorithms sharing the PBH schedule envelope.

Basin hopping (BH) is the single-sample variant with Metropolis acceptance:
a worse candidate is taken with probability exp((f(x) - f(candidate)) / delta)
instead of being rejected outright, so its trace is not monotone. The
zeroth-order proximal algorithm (ZOP) is the full sampled loop with the
identity local solver: weights fall on raw function values and the barycenter
is not refined.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .barycenter import draw_samples
from .objectives import Objective, Point
from .pbh import (
    TERMINATION_BUDGET,
    TERMINATION_CONVERGED,
    IterationRecord,
    PbhConfig,
    RunTrace,
    _finite_or_large,
    run_pbh,
)
from .solvers import LocalSolver

# Same tunable envelope; the algorithm tag lives with the caller.
BaselineConfig = PbhConfig


def metropolis_probability(f_current: float, f_candidate: float, delta: float) -> float:
    """min(1, exp((f_current - f_candidate) / delta))."""
    if f_candidate <= f_current:
        return 1.0
    return math.exp((f_current - f_candidate) / delta)


def metropolis_accept(
    rng: np.random.Generator, f_current: float, f_candidate: float, delta: float
) -> bool:
    p = metropolis_probability(f_current, f_candidate, delta)
    if p >= 1.0:
        return True
    return rng.uniform() < p


def run_bh(
    objective: Objective,
    solver: LocalSolver,
    config: PbhConfig,
    x0: Point,
) -> RunTrace:
    """Metropolis basin hopping with the PBH parameter schedules.

    gamma reacts to the candidate comparison exactly as in the PBH loop
    (grow by eta1 unless the candidate strictly improves); delta follows the
    fixed delta/eta2 schedule, since the adaptive rule needs a sample set.
    """
    x = np.asarray(x0, dtype=np.float64)
    if x.shape != (objective.dimension,) or not np.all(np.isfinite(x)):
        raise ValueError("x0 must be a finite point of the objective's dimension")
    rng = np.random.default_rng(config.seed)
    gamma = config.gamma0
    delta = config.delta0
    fx = _finite_or_large(objective.eval(x))
    f_target = None
    if config.convergence_tol is not None and objective.known_minimum is not None:
        f_target = objective.known_minimum[1] + config.convergence_tol

    trace = RunTrace(monotone_f=False)
    start = time.perf_counter()
    for k in range(config.max_iterations):
        if config.budget_seconds is not None and k > 0:
            if time.perf_counter() - start >= config.budget_seconds:
                trace.termination = TERMINATION_BUDGET
                break
        f_prev = fx
        y = draw_samples(rng, x, delta, gamma, 1)[0]
        candidate = solver.solve(objective, y)
        f_candidate = _finite_or_large(objective.eval(candidate))
        accepted = metropolis_accept(rng, f_prev, f_candidate, delta)
        if accepted:
            x, fx = candidate, f_candidate
        trace.iterations.append(
            IterationRecord(
                iterate=np.array(x),
                f_value=fx,
                gamma=gamma,
                delta=delta,
                n_samples=1,
                elapsed_seconds=time.perf_counter() - start,
                accepted=accepted,
            )
        )
        # Candidate-vs-previous comparison drives gamma, exactly as in PBH.
        if not (f_candidate < f_prev):
            gamma = gamma * config.eta1
        delta = delta / config.eta2
        if f_target is not None and fx <= f_target:
            trace.termination = TERMINATION_CONVERGED
            break

    trace.final_point = np.array(x)
    trace.final_value = fx
    return trace


def run_zop(objective: Objective, config: PbhConfig, x0: Point) -> RunTrace:
    """Sampled proximal loop with the identity local solver (0-step)."""
    return run_pbh(objective, LocalSolver(max_steps=0), config, x0)
