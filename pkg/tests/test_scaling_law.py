import math

import numpy as np
import pytest

from proxhop import ScalingLawDataset, generate_synthetic_scaling_data, scaling_law_objective
from proxhop.objectives import scaling_law_dimension

from conftest import assert_gradient_matches


def _reference_objective_value(theta, data, law):
    """Straight-line duplicate of the Huber objective, no vectorization."""
    m = data.n_domains
    total = 0.0
    for i in range(data.n_observations):
        k = float(data.model_sizes[i])
        dd = float(data.token_budgets[i])
        h = data.domain_weights[i]
        a = math.exp(sum(theta[3 + j] * h[j] for j in range(m)))
        b = math.exp(sum(theta[3 + m + j] * h[j] for j in range(m)))
        if law == "additive":
            alpha, beta = theta[1], theta[2]
        else:
            alpha = theta[1] + sum(theta[3 + 2 * m + j] * h[j] for j in range(m))
            beta = theta[2] + sum(theta[3 + 3 * m + j] * h[j] for j in range(m))
        pred = math.exp(theta[0]) + a * k ** (-alpha) + b * dd ** (-beta)
        r = math.log(pred) - math.log(float(data.losses[i]))
        delta = data.huber_delta
        if abs(r) <= delta:
            total += 0.5 * r * r
        else:
            total += delta * (abs(r) - 0.5 * delta)
    return total / data.n_observations


def _tiny_dataset(losses, m=2, huber_delta=1e-3):
    p = len(losses)
    w = np.full((p, m), 1.0 / m)
    return ScalingLawDataset(
        model_sizes=np.full(p, 1e8),
        token_budgets=np.full(p, 1e9),
        domain_weights=w,
        losses=np.asarray(losses, dtype=float),
        huber_delta=huber_delta,
    )


def test_zero_residual_gives_zero():
    data = generate_synthetic_scaling_data(5, 8, "additive", noise_scale=0.0)
    obj = scaling_law_objective(data, "additive")
    # losses were generated from some theta; refit any theta whose predictions
    # match the stored losses exactly: re-deriving is awkward, so instead
    # construct a dataset whose losses equal a known parameterization
    theta = np.array([0.1, 0.3, 0.4, 1.0, 2.0, 1.5, 0.5, 1.1, 2.2])
    from proxhop.objectives import _predict

    pred = _predict(theta, data.model_sizes, data.token_budgets, data.domain_weights, "additive")
    exact = ScalingLawDataset(
        model_sizes=data.model_sizes,
        token_budgets=data.token_budgets,
        domain_weights=data.domain_weights,
        losses=pred[0],
    )
    assert scaling_law_objective(exact, "additive").eval(theta) == 0.0


def test_single_observation_quadratic_branch():
    theta = np.zeros(scaling_law_dimension("additive", 2))
    from proxhop.objectives import _predict

    data = _tiny_dataset([1.0])
    pred = _predict(theta, data.model_sizes, data.token_budgets, data.domain_weights, "additive")[0]
    r = 5e-4  # inside the quadratic branch (huber_delta = 1e-3)
    shifted = ScalingLawDataset(
        model_sizes=data.model_sizes,
        token_budgets=data.token_budgets,
        domain_weights=data.domain_weights,
        losses=pred * math.exp(-r),
    )
    obj = scaling_law_objective(shifted, "additive")
    assert obj.eval(theta) == pytest.approx(0.5 * r * r, rel=1e-9)


@pytest.mark.parametrize("law", ["additive", "full"])
def test_matches_straightline_reimplementation(law, rng):
    data = generate_synthetic_scaling_data(11, 20, law)
    obj = scaling_law_objective(data, law)
    for _ in range(20):
        theta = rng.normal(0, 1, obj.dimension)
        assert obj.eval(theta) == pytest.approx(
            _reference_objective_value(theta, data, law), rel=1e-12
        )


@pytest.mark.parametrize("law", ["additive", "full"])
def test_gradient_matches_finite_differences(law, rng):
    data = generate_synthetic_scaling_data(23, 16, law)
    obj = scaling_law_objective(data, law)
    for _ in range(100):
        assert_gradient_matches(obj, rng.normal(0, 0.8, obj.dimension))


def test_generator_is_deterministic():
    a = generate_synthetic_scaling_data(42, 12, "full")
    b = generate_synthetic_scaling_data(42, 12, "full")
    np.testing.assert_array_equal(a.model_sizes, b.model_sizes)
    np.testing.assert_array_equal(a.token_budgets, b.token_budgets)
    np.testing.assert_array_equal(a.domain_weights, b.domain_weights)
    np.testing.assert_array_equal(a.losses, b.losses)


def test_generator_postconditions():
    data = generate_synthetic_scaling_data(1, 10, "additive")
    assert data.n_observations == 10
    assert np.all(data.losses > 0)
    assert np.all(data.model_sizes > 0)
    np.testing.assert_allclose(data.domain_weights.sum(axis=1), 1.0, atol=1e-12)


def test_true_parameters_score_at_noise_floor():
    # regenerate the ground truth the same way the generator draws it
    seed, m, law = 231, 3, "additive"
    rng = np.random.default_rng(seed)
    dim = scaling_law_dimension(law, m)
    theta = np.zeros(dim)
    theta[0] = rng.uniform(-1.0, 0.5)
    theta[1] = rng.uniform(0.2, 0.5)
    theta[2] = rng.uniform(0.2, 0.5)
    theta[3 : 3 + m] = rng.uniform(1.0, 3.0, size=m)
    theta[3 + m :] = rng.uniform(1.0, 3.0, size=m)
    data = generate_synthetic_scaling_data(seed, 50, law, n_domains=m, noise_scale=1e-3)
    value = scaling_law_objective(data, law).eval(theta)
    # mean Huber of ~N(0, 1e-6) residuals concentrates near 5e-7
    assert value <= 1e-5


def test_validation_errors():
    with pytest.raises(ValueError):
        generate_synthetic_scaling_data(0, 0)
    with pytest.raises(ValueError):
        _tiny_dataset([])
    with pytest.raises(ValueError):
        _tiny_dataset([-1.0])
    with pytest.raises(ValueError):
        ScalingLawDataset(
            model_sizes=np.array([1e8]),
            token_budgets=np.array([1e9]),
            domain_weights=np.array([[0.7, 0.7]]),  # not a simplex row
            losses=np.array([1.0]),
        )
    with pytest.raises(ValueError):
        scaling_law_objective(_tiny_dataset([1.0]), "cubic")
