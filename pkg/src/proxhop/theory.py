"""Runnable checks of the framework's mathematics on enumerated landscapes.

A 1D objective is reduced to an explicit model: minimizer locations/values
plus the separating maxima, which bound each basin of attraction exactly.
On such a model the ideal hop operator (pick the component minimizing
value + squared-distance-to-basin / (2 gamma), then take its best point) is
computable, and its finite-time convergence to the global minimizer can be
exercised directly. The module also provides the noncentral chi-square ball
probabilities that size the sampling requirements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.special import gammainc, gammaln

from .objectives import Objective

_CDF_TAIL = 1e-12
_CDF_MAX_TERMS = 10**6
_ARGMIN_TIE_TOL = 1e-12


class ResolutionError(RuntimeError):
    """The scan grid is too coarse to bracket every stationary point."""


@dataclass(frozen=True)
class LandscapeModel:
    """Enumerated 1D minimizer components with exact basin boundaries.

    minimizers: (location, value) pairs with strictly increasing locations.
    basin_boundaries: separating local maxima; boundary i lies strictly
        between minimizers i and i+1. The outermost basins extend to
        +-domain_radius.
    """

    minimizers: Tuple[Tuple[float, float], ...]
    basin_boundaries: Tuple[float, ...]
    domain_radius: float

    def __post_init__(self):
        locs = self.locations
        if locs.size == 0:
            raise ValueError("model needs at least one minimizer")
        if np.any(np.diff(locs) <= 0):
            raise ValueError("minimizer locations must be strictly increasing")
        if len(self.basin_boundaries) != locs.size - 1:
            raise ValueError("need exactly one boundary between adjacent minimizers")
        for i, b in enumerate(self.basin_boundaries):
            if not (locs[i] < b < locs[i + 1]):
                raise ValueError("boundaries must interleave the minimizers")
        if self.domain_radius <= 0:
            raise ValueError("domain_radius must be positive")

    @property
    def locations(self) -> np.ndarray:
        return np.array([m[0] for m in self.minimizers])

    @property
    def values(self) -> np.ndarray:
        return np.array([m[1] for m in self.minimizers])

    def basin(self, i: int) -> Tuple[float, float]:
        """Attraction interval of minimizer i, clipped to the domain."""
        lo = -self.domain_radius if i == 0 else self.basin_boundaries[i - 1]
        hi = self.domain_radius if i == len(self.minimizers) - 1 else self.basin_boundaries[i]
        return lo, hi

    def global_index(self) -> int:
        return int(np.argmin(self.values))


def enumerate_1d_landscape(objective: Objective, radius: float, grid: int) -> LandscapeModel:
    """Locate all stationary points of a 1D objective on [-radius, radius].

    Scans the derivative for sign changes on a uniform grid, refines each
    bracket by bisection to width 1e-10, and classifies roots by the bracket
    signs (- to + is a minimum). Raises ResolutionError when the refined
    crossings do not alternate minimum/maximum, which means the grid missed
    stationary points.
    """
    if objective.dimension != 1:
        raise ValueError("landscape enumeration is defined for 1D objectives only")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if grid < 3:
        raise ValueError("grid must have at least 3 points")

    def deriv(t: float) -> float:
        return float(objective.gradient(np.array([t]))[0])

    xs = np.linspace(-radius, radius, grid)
    gs = np.array([deriv(t) for t in xs])
    roots: List[Tuple[float, bool]] = []  # (location, is_minimum)
    for i in range(grid - 1):
        g0, g1 = gs[i], gs[i + 1]
        if g0 == 0.0:
            if i == 0 or gs[i - 1] != 0.0:
                left = gs[i - 1] if i > 0 else -g1
                roots.append((float(xs[i]), left < 0))
            continue
        if g0 * g1 < 0:
            lo, hi, glo = xs[i], xs[i + 1], g0
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                gm = deriv(mid)
                if gm == 0.0:
                    lo = hi = mid
                    break
                if (gm < 0) == (glo < 0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            roots.append((0.5 * (lo + hi), g0 < 0))

    # Clip leading/trailing maxima: they separate an in-window basin from one
    # whose minimizer lies outside the scan radius.
    while roots and not roots[0][1]:
        roots.pop(0)
    while roots and not roots[-1][1]:
        roots.pop()
    if not roots:
        raise ResolutionError(
            "no minimizer found; increase the scan radius or grid resolution"
        )
    for a, b in zip(roots, roots[1:]):
        if a[1] == b[1]:
            raise ResolutionError(
                "stationary points do not alternate minimum/maximum; "
                "increase grid so every derivative sign change is bracketed"
            )

    minimizers = tuple(
        (loc, float(objective.eval(np.array([loc])))) for loc, is_min in roots if is_min
    )
    boundaries = tuple(loc for loc, is_min in roots if not is_min)
    model = LandscapeModel(minimizers, boundaries, radius)
    values = model.values
    for i, b in enumerate(boundaries):
        vb = float(objective.eval(np.array([b])))
        if values[i] > vb or values[i + 1] > vb:
            raise ResolutionError(
                "a separating maximum sits below an adjacent minimum; "
                "the grid likely skipped stationary points"
            )
    return model


@dataclass(frozen=True)
class Potential:
    """Component potential value + squared basin distance / (2 gamma)."""

    model: LandscapeModel
    x: float
    gamma: float

    def values(self) -> np.ndarray:
        out = np.empty(len(self.model.minimizers))
        for i, (_, value) in enumerate(self.model.minimizers):
            lo, hi = self.model.basin(i)
            dist = max(0.0, lo - self.x, self.x - hi)
            out[i] = value + dist * dist / (2.0 * self.gamma)
        return out

    def argmin(self) -> List[int]:
        v = self.values()
        return [int(i) for i in np.flatnonzero(v <= v.min() + _ARGMIN_TIE_TOL)]


def potential_argmin(model: LandscapeModel, x: float, gamma: float) -> List[int]:
    """Indices of all components within 1e-12 of the minimal potential."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return Potential(model, x, gamma).argmin()


def ideal_pbh(
    model: LandscapeModel,
    x0: float,
    gamma0: float,
    eta: float,
    max_iter: int,
) -> Tuple[List[float], bool, int]:
    """Deterministic ideal hop iteration on an enumerated landscape.

    Each step jumps to the best-valued component among the potential argmin;
    on a value tie the iterate stays put and gamma grows by eta, otherwise
    gamma is held. Returns (trajectory, converged, iterations_used) where
    convergence means reaching the global minimizer location within 1e-9.
    """
    values = model.values
    locs = model.locations
    g_idx = model.global_index()
    others = np.delete(values, g_idx)
    if others.size and others.min() <= values[g_idx]:
        raise ValueError("ideal iteration requires a unique minimum-value component")
    if gamma0 <= 0 or eta <= 1:
        raise ValueError("need gamma0 > 0 and eta > 1")

    x = float(x0)
    gamma = gamma0
    # Start value: known when x0 sits on a minimizer, else treated as above
    # every component so the first hop counts as strict improvement.
    near = np.flatnonzero(np.abs(locs - x) <= 1e-9)
    f_cur = float(values[near[0]]) if near.size else math.inf

    trajectory = [x]
    converged = abs(x - locs[g_idx]) <= 1e-9
    used = 0
    for _ in range(max_iter):
        if converged:
            break
        cand = potential_argmin(model, x, gamma)
        best_val = min(values[i] for i in cand)
        if best_val == f_cur:
            gamma *= eta  # stuck at the current level set; widen the hop
        else:
            stay = [i for i in cand if values[i] == best_val and abs(locs[i] - x) <= 1e-9]
            target = stay[0] if stay else next(i for i in cand if values[i] == best_val)
            x = float(locs[target])
            f_cur = float(best_val)
        trajectory.append(x)
        used += 1
        converged = abs(x - locs[g_idx]) <= 1e-9
    return trajectory, converged, used


def adjacent_hop_distances(model: LandscapeModel) -> np.ndarray:
    """Distance from each minimizer to the basin of its better neighbor.

    For every adjacent pair the worse-valued minimizer must cross the
    separating maximum to reach the better basin; the returned array holds
    those crossing distances. Their maximum witnesses the uniform hop bound
    of the landscape.
    """
    locs = model.locations
    values = model.values
    out = np.empty(len(model.basin_boundaries))
    for i, b in enumerate(model.basin_boundaries):
        worse = i if values[i] > values[i + 1] else i + 1
        out[i] = abs(locs[worse] - b)
    return out


# ---------------------------------------------------------------------------
# Noncentral chi-square ball probabilities and sample-size bounds.
# ---------------------------------------------------------------------------


def noncentral_chisq_cdf(dof: int, noncentrality: float, t: float) -> float:
    """CDF of the noncentral chi-square via its Poisson mixture.

    Sums e^{-lam/2} (lam/2)^k / k! * CDF_chi2(dof + 2k)(t) over k, with each
    Poisson weight computed in log space (safe for noncentrality up to ~1e4
    and beyond). The central chi-square CDFs decrease in k at fixed t, so the
    series is truncated once the remaining Poisson mass times the last CDF
    term drops below 1e-12, with a hard cap of 1e6 terms.
    """
    if dof < 1:
        raise ValueError("dof must be a positive integer")
    if not (np.isfinite(noncentrality) and noncentrality >= 0):
        raise ValueError("noncentrality must be finite and nonnegative")
    if not (np.isfinite(t) and t >= 0):
        raise ValueError("t must be finite and nonnegative")
    if t == 0.0:
        return 0.0
    half_t = 0.5 * t
    if noncentrality == 0.0:
        return float(min(1.0, max(0.0, gammainc(0.5 * dof, half_t))))

    half_lam = 0.5 * noncentrality
    log_half_lam = math.log(half_lam)
    total = 0.0
    pois_mass = 0.0
    block = 2048
    k0 = 0
    last_g = 1.0
    while k0 < _CDF_MAX_TERMS:
        ks = np.arange(k0, min(k0 + block, _CDF_MAX_TERMS), dtype=np.float64)
        w = np.exp(-half_lam + ks * log_half_lam - gammaln(ks + 1.0))
        g = gammainc(0.5 * dof + ks, half_t)
        total += float(np.sum(w * g))
        pois_mass += float(np.sum(w))
        last_g = float(g[-1])
        k0 += block
        if (1.0 - pois_mass) * last_g < _CDF_TAIL:
            break
    return float(min(1.0, max(0.0, total)))


def required_samples(hit_probability: float, confidence: float) -> int:
    """Samples needed to hit an event of probability p at least once with
    the requested confidence: ceil(log(1 - confidence) / log(1 - p))."""
    if not (0.0 < hit_probability < 1.0):
        raise ValueError("hit_probability must lie strictly inside (0, 1)")
    if not (0.0 < confidence < 1.0):
        raise ValueError("confidence must lie strictly inside (0, 1)")
    return math.ceil(math.log1p(-confidence) / math.log1p(-hit_probability))


def ball_hit_probability(
    center_distance: float, sigma: float, r: float, d: int
) -> float:
    """Probability that N(x, sigma^2 Id) in dimension d lands in a ball of
    radius r whose center is center_distance away from x."""
    if center_distance < 0:
        raise ValueError("center_distance must be nonnegative")
    if sigma <= 0 or r <= 0:
        raise ValueError("sigma and r must be positive")
    lam = (center_distance / sigma) ** 2
    return noncentral_chisq_cdf(d, lam, (r / sigma) ** 2)
