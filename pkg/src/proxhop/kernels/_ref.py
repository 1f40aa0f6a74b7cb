"""NumPy reference implementations of the hot objective kernels.

Mirrors `_core.pyx`. Selected at import time by `proxhop.kernels` when the
compiled extension is unavailable (or when PROXHOP_KERNELS=python).
"""

import numpy as np

# Largest finite double, used as the coincident-atom energy sentinel.
LARGE_VALUE = float(np.finfo(np.float64).max)

# Pair distances below this make the energy meaningless -> sentinel.
LJ_COINCIDENT_DIST = 1e-12
# Distances are clamped here inside the gradient to keep arithmetic finite.
LJ_CLAMP_DIST = 1e-6

_TWO_PI = 2.0 * np.pi


def rastrigin_value(x):
    return float(np.sum(x * x + 10.0 * (1.0 - np.cos(_TWO_PI * x))))


def rastrigin_gradient(x):
    return 2.0 * x + 20.0 * np.pi * np.sin(_TWO_PI * x)


def griewank_value(x):
    scale = 1.0 / np.sqrt(np.arange(1.0, x.shape[0] + 1.0))
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x * scale)))


def griewank_gradient(x):
    d = x.shape[0]
    scale = 1.0 / np.sqrt(np.arange(1.0, d + 1.0))
    c = np.cos(x * scale)
    s = np.sin(x * scale)
    # prefix/suffix products give prod_{i != j} c_i without dividing by c_j
    prefix = np.ones(d)
    suffix = np.ones(d)
    np.cumprod(c[:-1], out=prefix[1:])
    np.cumprod(c[:0:-1], out=suffix[-2::-1])
    return x / 2000.0 + scale * s * prefix * suffix


def lj_value(x):
    pos = x.reshape(-1, 3)
    diff = pos[:, None, :] - pos[None, :, :]
    r2 = np.sum(diff * diff, axis=2)
    iu = np.triu_indices(pos.shape[0], k=1)
    r2 = r2[iu]
    if np.any(r2 < LJ_COINCIDENT_DIST * LJ_COINCIDENT_DIST):
        return LARGE_VALUE
    inv6 = r2 ** -3
    return float(np.sum(inv6 * inv6 - 2.0 * inv6))


def lj_gradient(x):
    pos = x.reshape(-1, 3)
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.sqrt(np.sum(diff * diff, axis=2))
    np.fill_diagonal(r, np.inf)
    contributing = r >= LJ_COINCIDENT_DIST
    rc = np.maximum(r, LJ_CLAMP_DIST)
    inv2 = 1.0 / (rc * rc)
    inv8 = inv2 ** 4
    coeff = np.where(contributing, 12.0 * (inv8 - inv8 * inv2 ** 3), 0.0)
    grad = np.sum(coeff[:, :, None] * diff, axis=1)
    return grad.reshape(3 * n)
