"""Benchmark objectives with analytic gradients and known reference minima.

Every objective is immutable after construction; `eval` and `gradient` are
pure functions of the input point and safe to call from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import kernels

Point = np.ndarray

LARGE_VALUE = kernels.LARGE_VALUE

_SCALING_LAWS = ("additive", "full")


@dataclass(frozen=True)
class Objective:
    """A scalar objective with analytic gradient.

    Attributes:
        name: identifier, also used by the CLI registry.
        dimension: length of the input vector.
        eval: point -> scalar.
        gradient: point -> vector of the same length.
        known_minimum: optional (point, value) of the global minimum.
    """

    name: str
    dimension: int
    eval: Callable[[Point], float]
    gradient: Callable[[Point], Point]
    known_minimum: Optional[Tuple[Point, float]] = None

    def __call__(self, x: Point) -> float:
        return self.eval(x)


def _as_input(x, dimension: int) -> Point:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (dimension,):
        raise ValueError(f"expected a point of shape ({dimension},), got {x.shape}")
    return x


def rastrigin(d: int) -> Objective:
    """f(x) = sum_i x_i^2 + 10 (1 - cos 2 pi x_i), global minimum f(0) = 0."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")

    def _eval(x):
        return kernels.rastrigin_value(_as_input(x, d))

    def _grad(x):
        return kernels.rastrigin_gradient(_as_input(x, d))

    return Objective(
        name="rastrigin",
        dimension=d,
        eval=_eval,
        gradient=_grad,
        known_minimum=(np.zeros(d), 0.0),
    )


def griewank(d: int) -> Objective:
    """f(x) = 1 + sum_i x_i^2/4000 - prod_i cos(x_i / sqrt(i)), f(0) = 0."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")

    def _eval(x):
        return kernels.griewank_value(_as_input(x, d))

    def _grad(x):
        return kernels.griewank_gradient(_as_input(x, d))

    return Objective(
        name="griewank",
        dimension=d,
        eval=_eval,
        gradient=_grad,
        known_minimum=(np.zeros(d), 0.0),
    )


def lennard_jones(atoms: int) -> Objective:
    """Cluster energy sum_{i<j} (r_ij^-12 - 2 r_ij^-6) over 3D atom positions.

    The input is the flat (3 * atoms) vector of coordinates. Configurations
    with a pair distance below 1e-12 evaluate to the largest finite double;
    the gradient clamps pair distances at 1e-6 and never produces NaN/inf.
    """
    if atoms < 2:
        raise ValueError(f"need at least 2 atoms, got {atoms}")
    d = 3 * atoms

    def _eval(x):
        return kernels.lj_value(_as_input(x, d))

    def _grad(x):
        return kernels.lj_gradient(_as_input(x, d))

    return Objective(name=f"lj{atoms}", dimension=d, eval=_eval, gradient=_grad)


# ---------------------------------------------------------------------------
# Scaling-law fitting objective (synthetic data only).
#
# Predicted loss for an observation (K, D, h):
#   additive:  L = exp(e) + exp(<a, h>) * K^-alpha + exp(<b, h>) * D^-beta
#   full:      L = exp(e) + exp(<a, h>) * K^-(alpha0 + <av, h>)
#                         + exp(<b, h>) * D^-(beta0 + <bv, h>)
# Parameter vector layout (m = number of domains):
#   additive: [e, alpha, beta, a_1..a_m, b_1..b_m]            (3 + 2m)
#   full:     [e, alpha0, beta0, a_1..a_m, b_1..b_m,
#              av_1..av_m, bv_1..bv_m]                        (3 + 4m)
# The fit minimizes the mean Huber loss of log-space residuals
# r = log(L_pred) - log(L_obs). All three prediction terms are positive by
# construction, so log(L_pred) is defined for any real parameter vector.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingLawDataset:
    """Observed (model size, token budget, domain mixture) -> loss records."""

    model_sizes: np.ndarray  # (p,), strictly positive
    token_budgets: np.ndarray  # (p,), strictly positive
    domain_weights: np.ndarray  # (p, m), rows on the simplex
    losses: np.ndarray  # (p,), strictly positive
    huber_delta: float = 1e-3

    def __post_init__(self):
        p = self.model_sizes.shape[0]
        if p == 0:
            raise ValueError("dataset must contain at least one observation")
        if self.token_budgets.shape != (p,) or self.losses.shape != (p,):
            raise ValueError("observation arrays must have matching lengths")
        if self.domain_weights.ndim != 2 or self.domain_weights.shape[0] != p:
            raise ValueError("domain_weights must be (p, m)")
        if np.any(self.model_sizes <= 0) or np.any(self.token_budgets <= 0):
            raise ValueError("model sizes and token budgets must be positive")
        if np.any(self.losses <= 0):
            raise ValueError("losses must be positive")
        if np.any(self.domain_weights < 0):
            raise ValueError("domain weights must be nonnegative")
        if np.any(np.abs(self.domain_weights.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("domain weights must sum to 1")
        if self.huber_delta <= 0:
            raise ValueError("huber_delta must be positive")

    @property
    def n_observations(self) -> int:
        return self.model_sizes.shape[0]

    @property
    def n_domains(self) -> int:
        return self.domain_weights.shape[1]


def scaling_law_dimension(law: str, n_domains: int) -> int:
    if law == "additive":
        return 3 + 2 * n_domains
    if law == "full":
        return 3 + 4 * n_domains
    raise ValueError(f"law must be one of {_SCALING_LAWS}, got {law!r}")


def _predict(theta: Point, sizes, budgets, h, law: str) -> tuple:
    m = h.shape[1]
    log_k = np.log(sizes)
    log_d = np.log(budgets)
    e = np.exp(theta[0])
    term_a = np.exp(h @ theta[3 : 3 + m])
    term_b = np.exp(h @ theta[3 + m : 3 + 2 * m])
    if law == "additive":
        alpha = theta[1]
        beta = theta[2]
    else:
        alpha = theta[1] + h @ theta[3 + 2 * m : 3 + 3 * m]
        beta = theta[2] + h @ theta[3 + 3 * m : 3 + 4 * m]
    pow_k = np.exp(-alpha * log_k)
    pow_d = np.exp(-beta * log_d)
    pred = e + term_a * pow_k + term_b * pow_d
    return pred, e, term_a, term_b, pow_k, pow_d, log_k, log_d, alpha, beta


def _huber(r: np.ndarray, delta: float) -> np.ndarray:
    a = np.abs(r)
    return np.where(a <= delta, 0.5 * r * r, delta * (a - 0.5 * delta))


def _huber_prime(r: np.ndarray, delta: float) -> np.ndarray:
    return np.clip(r, -delta, delta)


def scaling_law_objective(data: ScalingLawDataset, law: str = "additive") -> Objective:
    """Mean Huber loss of log-residuals between predicted and observed loss."""
    if law not in _SCALING_LAWS:
        raise ValueError(f"law must be one of {_SCALING_LAWS}, got {law!r}")
    m = data.n_domains
    dim = scaling_law_dimension(law, m)
    log_obs = np.log(data.losses)
    p = data.n_observations
    delta = data.huber_delta

    def _eval(theta):
        theta = _as_input(theta, dim)
        with np.errstate(over="ignore"):
            pred = _predict(
                theta, data.model_sizes, data.token_budgets, data.domain_weights, law
            )[0]
            return float(np.mean(_huber(np.log(pred) - log_obs, delta)))

    def _grad(theta):
        theta = _as_input(theta, dim)
        h = data.domain_weights
        with np.errstate(over="ignore", invalid="ignore"):
            pred, e, term_a, term_b, pow_k, pow_d, log_k, log_d, _, _ = _predict(
                theta, data.model_sizes, data.token_budgets, h, law
            )
            # w = huber'(r) / (p * L_pred), one factor per observation
            w = _huber_prime(np.log(pred) - log_obs, delta) / (p * pred)
            wa = w * term_a * pow_k
            wb = w * term_b * pow_d
            g = np.empty(dim)
            g[0] = np.sum(w) * e
            g[1] = -np.sum(wa * log_k)
            g[2] = -np.sum(wb * log_d)
            g[3 : 3 + m] = wa @ h
            g[3 + m : 3 + 2 * m] = wb @ h
            if law == "full":
                g[3 + 2 * m : 3 + 3 * m] = -(wa * log_k) @ h
                g[3 + 3 * m : 3 + 4 * m] = -(wb * log_d) @ h
        return g

    return Objective(name=f"scaling-{law}", dimension=dim, eval=_eval, gradient=_grad)


def generate_synthetic_scaling_data(
    seed: int,
    p: int,
    law: str = "additive",
    n_domains: int = 3,
    noise_scale: float = 1e-3,
) -> ScalingLawDataset:
    """Sample a synthetic dataset from a ground-truth law of the same family.

    Deterministic in `seed`. Losses are the exact ground-truth predictions
    perturbed by lognormal noise of scale `noise_scale`, so fitting with the
    true parameters scores roughly noise_scale^2 / 2 on average.
    """
    if p < 1:
        raise ValueError(f"need at least one observation, got {p}")
    if law not in _SCALING_LAWS:
        raise ValueError(f"law must be one of {_SCALING_LAWS}, got {law!r}")
    rng = np.random.default_rng(seed)
    m = n_domains
    dim = scaling_law_dimension(law, m)
    theta = np.zeros(dim)
    theta[0] = rng.uniform(-1.0, 0.5)  # irreducible loss exp(e) in [0.37, 1.65]
    theta[1] = rng.uniform(0.2, 0.5)  # alpha
    theta[2] = rng.uniform(0.2, 0.5)  # beta
    theta[3 : 3 + m] = rng.uniform(1.0, 3.0, size=m)
    theta[3 + m : 3 + 2 * m] = rng.uniform(1.0, 3.0, size=m)
    if law == "full":
        theta[3 + 2 * m :] = rng.uniform(-0.05, 0.05, size=2 * m)

    sizes = np.exp(rng.uniform(np.log(1e7), np.log(1e10), size=p))
    budgets = np.exp(rng.uniform(np.log(1e8), np.log(1e11), size=p))
    weights = rng.dirichlet(np.ones(m), size=p)
    clean = _predict(theta, sizes, budgets, weights, law)[0]
    losses = clean * np.exp(noise_scale * rng.standard_normal(p))
    return ScalingLawDataset(
        model_sizes=sizes,
        token_budgets=budgets,
        domain_weights=weights,
        losses=losses,
    )


# ---------------------------------------------------------------------------
# Name registry for the CLI / harness.
# ---------------------------------------------------------------------------

# Fixed seed so `scaling-additive`/`scaling-full` name a reproducible problem.
DEFAULT_SCALING_SEED = 1729
DEFAULT_SCALING_OBSERVATIONS = 64

OBJECTIVE_NAMES = ("rastrigin", "griewank", "lj", "scaling-additive", "scaling-full")


def get_objective(name: str, dimension: int) -> Objective:
    """Resolve an objective by registry name and dimension.

    `lj` expects dimension = 3 * atoms; the scaling objectives expect a
    dimension compatible with their parameter layout and are built on the
    default synthetic dataset.
    """
    if name == "rastrigin":
        return rastrigin(dimension)
    if name == "griewank":
        return griewank(dimension)
    if name == "lj":
        if dimension % 3 != 0 or dimension < 6:
            raise ValueError(f"lj dimension must be 3*atoms with atoms >= 2, got {dimension}")
        return lennard_jones(dimension // 3)
    if name in ("scaling-additive", "scaling-full"):
        law = name.split("-", 1)[1]
        per_domain = 2 if law == "additive" else 4
        if dimension < 3 + per_domain or (dimension - 3) % per_domain != 0:
            raise ValueError(
                f"{name} dimension must be 3 + {per_domain}*domains, got {dimension}"
            )
        data = generate_synthetic_scaling_data(
            DEFAULT_SCALING_SEED,
            DEFAULT_SCALING_OBSERVATIONS,
            law,
            n_domains=(dimension - 3) // per_domain,
        )
        return scaling_law_objective(data, law)
    raise ValueError(f"unknown objective {name!r}; available: {OBJECTIVE_NAMES}")
