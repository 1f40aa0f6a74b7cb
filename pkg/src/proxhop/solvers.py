"""Descent procedures mapping a start point toward its local minimizer.

Both methods guarantee monotone descent: the returned point never has a
higher objective value than the start. A solver with max_steps=0 is the
identity map, which is how the zeroth-order baseline reuses this module.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .objectives import Objective, Point

_MAX_HALVINGS = 30
_ARMIJO_C = 1e-4


@dataclass(frozen=True)
class LocalSolver:
    """Deterministic local descent configuration.

    method: "gd" (fixed step with halving on increase) or "lbfgs"
        (two-loop recursion with Armijo backtracking, c=1e-4).
    max_steps: descent iterations; 0 turns the solver into the identity.
    step_size: gradient-descent step (ignored by lbfgs).
    memory: number of curvature pairs kept by lbfgs (ignored by gd).
    grad_tolerance: points with gradient norm at or below this count as
        already-converged and are returned unchanged.
    """

    method: str = "gd"
    max_steps: int = 10
    step_size: float = 0.01
    memory: int = 10
    grad_tolerance: float = 1e-10

    def __post_init__(self):
        if self.method not in ("gd", "lbfgs"):
            raise ValueError(f"method must be 'gd' or 'lbfgs', got {self.method!r}")
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if self.grad_tolerance < 0:
            raise ValueError("grad_tolerance must be nonnegative")

    def solve(self, objective: Objective, x0: Point) -> Point:
        """Descend from x0; returns a point with f(result) <= f(x0)."""
        x = np.array(x0, dtype=np.float64)
        if x.shape != (objective.dimension,):
            raise ValueError(
                f"start point has shape {x.shape}, expected ({objective.dimension},)"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("start point must be finite")
        if self.max_steps == 0:
            return x
        if self.method == "gd":
            return _gradient_descent(objective, x, self)
        return _lbfgs(objective, x, self)

    def solve_batch(
        self,
        objective: Objective,
        starts: Sequence[Point],
        workers: Optional[int] = None,
    ) -> List[Point]:
        """Elementwise solve; results are independent of worker count."""
        starts = list(starts)
        if not starts:
            return []
        if workers is None or workers <= 1 or len(starts) == 1:
            return [self.solve(objective, s) for s in starts]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: self.solve(objective, s), starts))


def _gradient_descent(objective: Objective, x: Point, cfg: LocalSolver) -> Point:
    fx = objective.eval(x)
    if not np.isfinite(fx):
        return x
    for _ in range(cfg.max_steps):
        g = objective.gradient(x)
        if not np.all(np.isfinite(g)):
            break
        if float(np.linalg.norm(g)) <= cfg.grad_tolerance:
            break
        h = cfg.step_size
        moved = False
        for _ in range(_MAX_HALVINGS + 1):
            xn = x - h * g
            fn = objective.eval(xn)
            if np.isfinite(fn) and fn < fx and np.all(np.isfinite(xn)):
                x, fx = xn, fn
                moved = True
                break
            h *= 0.5
        if not moved:
            break
    return x


def _lbfgs(objective: Objective, x: Point, cfg: LocalSolver) -> Point:
    fx = objective.eval(x)
    if not np.isfinite(fx):
        return x
    g = objective.gradient(x)
    s_hist: List[Point] = []
    y_hist: List[Point] = []
    for _ in range(cfg.max_steps):
        if not np.all(np.isfinite(g)):
            break
        if float(np.linalg.norm(g)) <= cfg.grad_tolerance:
            break
        d = _two_loop_direction(g, s_hist, y_hist)
        slope = float(np.dot(g, d))
        if slope >= 0.0:  # not a descent direction; restart from steepest
            d = -g
            slope = -float(np.dot(g, g))
        t = 1.0
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            xn = x + t * d
            fn = objective.eval(xn)
            if (
                np.isfinite(fn)
                and np.all(np.isfinite(xn))
                and fn <= fx + _ARMIJO_C * t * slope
            ):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        # One quadratic-interpolation refinement: exact line minimizer when
        # the objective is quadratic along d, a cheap improvement otherwise.
        denom = fn - fx - slope * t
        if denom > 0.0:
            t_star = -0.5 * slope * t * t / denom
            if np.isfinite(t_star) and t_star > 0.0:
                x_star = x + t_star * d
                f_star = objective.eval(x_star)
                if (
                    np.isfinite(f_star)
                    and np.all(np.isfinite(x_star))
                    and f_star < fn
                    and f_star <= fx + _ARMIJO_C * t_star * slope
                ):
                    xn, fn, t = x_star, f_star, t_star
        gn = objective.gradient(xn)
        if np.all(np.isfinite(gn)):
            s = xn - x
            y = gn - g
            sy = float(np.dot(s, y))
            if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
                s_hist.append(s)
                y_hist.append(y)
                if len(s_hist) > cfg.memory:
                    s_hist.pop(0)
                    y_hist.pop(0)
        x, fx, g = xn, fn, gn
    return x


def _two_loop_direction(g: Point, s_hist: List[Point], y_hist: List[Point]) -> Point:
    q = -g.copy()
    if not s_hist:
        return q
    alphas = []
    rhos = [1.0 / float(np.dot(y, s)) for s, y in zip(s_hist, y_hist)]
    for i in range(len(s_hist) - 1, -1, -1):
        a = rhos[i] * float(np.dot(s_hist[i], q))
        alphas.append(a)
        q -= a * y_hist[i]
    y_last = y_hist[-1]
    q *= float(np.dot(s_hist[-1], y_last)) / float(np.dot(y_last, y_last))
    for i, a in zip(range(len(s_hist)), reversed(alphas)):
        b = rhos[i] * float(np.dot(y_hist[i], q))
        q += (a - b) * s_hist[i]
    return q
