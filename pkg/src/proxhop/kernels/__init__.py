"""Backend dispatch for the hot objective kernels.

The compiled Cython extension is preferred when present; otherwise the NumPy
reference implementation is used. Override with PROXHOP_KERNELS=python or
PROXHOP_KERNELS=compiled (the latter raises if the extension is missing).
Both backends implement the same formulas; only summation order differs, so
results agree to rounding but are not guaranteed bit-identical across
backends. Within a backend every kernel is pure and deterministic.
"""

import os

from . import _ref

_choice = os.environ.get("PROXHOP_KERNELS", "auto")
if _choice not in ("auto", "compiled", "python"):
    raise ValueError(
        f"PROXHOP_KERNELS must be auto, compiled or python, got {_choice!r}"
    )

if _choice == "python":
    _impl = _ref
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _ref
        BACKEND = "python"

LARGE_VALUE = _ref.LARGE_VALUE
LJ_COINCIDENT_DIST = _ref.LJ_COINCIDENT_DIST
LJ_CLAMP_DIST = _ref.LJ_CLAMP_DIST

rastrigin_value = _impl.rastrigin_value
rastrigin_gradient = _impl.rastrigin_gradient
griewank_value = _impl.griewank_value
griewank_gradient = _impl.griewank_gradient
lj_value = _impl.lj_value
lj_gradient = _impl.lj_gradient
