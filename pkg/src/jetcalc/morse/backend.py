"""Kernel backend selection: numba JIT kernels by default, pure-numpy
fallback, chosen by the JETCALC_BACKEND environment variable ("numba" or
"numpy").

Both backends execute the same per-scalar operation sequence (accumulations
in the same order, integer powers by repeated multiplication, the same LAPACK
eigensolver), so the choice never changes a single output byte -- tests
assert bitwise equality.  Thread count is a performance knob with zero effect
on results: kernels only fill per-sample output slots and the reduction
happens outside, in fixed sample order.
"""

from __future__ import annotations

import os
import warnings

# Must happen before numba is first imported anywhere in the process:
# numba refuses set_num_threads(t) with t above NUMBA_NUM_THREADS, and the
# determinism contract exercises up to 8 workers even on small machines.
os.environ.setdefault("NUMBA_NUM_THREADS", "8")

from ..errors import InputDataError

_VALID = ("numba", "numpy")
_DEFAULT = "numba"


def backend_name(override: str | None = None) -> str:
    name = override if override is not None else os.environ.get(
        "JETCALC_BACKEND", _DEFAULT)
    if name not in _VALID:
        raise InputDataError(
            f"unknown backend {name!r}; valid backends: {', '.join(_VALID)}")
    return name


def get_kernel(override: str | None = None):
    """Return (effective_backend_name, kernel_module)."""
    name = backend_name(override)
    if name == "numba":
        try:
            from . import _kernels_numba as mod
            return "numba", mod
        except ImportError as exc:
            warnings.warn(
                f"numba backend unavailable ({exc}); falling back to numpy",
                RuntimeWarning, stacklevel=2)
    from . import _kernels_numpy as mod
    return "numpy", mod


def apply_threads(name: str, requested: int | None) -> int:
    """Set the worker count for the numba backend (clamped to the numba
    maximum); a no-op returning 1 for the numpy backend."""
    if requested is None:
        requested = 1
    if requested < 1:
        raise InputDataError(f"thread count must be >= 1, got {requested}")
    if name != "numba":
        return 1
    import numba
    effective = min(requested, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(effective)
    return effective
