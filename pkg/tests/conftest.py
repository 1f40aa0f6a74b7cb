import numpy as np
import pytest


def central_difference_gradient(objective, x, rel_step=1e-6):
    """Independent gradient oracle: central differences with a per-coordinate
    step scaled by the coordinate magnitude."""
    x = np.asarray(x, dtype=np.float64)
    g = np.empty_like(x)
    for i in range(x.size):
        h = rel_step * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (objective.eval(xp) - objective.eval(xm)) / (2.0 * h)
    return g


def assert_gradient_matches(objective, x, rtol=1e-5):
    numeric = central_difference_gradient(objective, x)
    analytic = objective.gradient(np.asarray(x, dtype=np.float64))
    err = np.linalg.norm(numeric - analytic)
    scale = max(1.0, np.linalg.norm(analytic))
    assert err <= rtol * scale, (
        f"{objective.name}: gradient mismatch at {x}: |num-ana|={err:.3e}, "
        f"scale={scale:.3e}"
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
