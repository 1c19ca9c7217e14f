"""Kernel backend selection.

The stack-objective kernel exists twice: a compiled Cython extension for
speed and a pure-Python reference.  The compiled one is picked when it
imported cleanly; set KWRIST_KERNEL=python or KWRIST_KERNEL=compiled to
force a choice (forcing "compiled" raises if the extension is missing).
``benchmarks/bench_kernels.py`` compares the two.
"""

import os

import numpy as np

from . import _kernels_ref

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_forced = os.environ.get("KWRIST_KERNEL", "").strip().lower()
if _forced in ("python", "ref", "reference"):
    _impl = _kernels_ref
elif _forced in ("compiled", "c", "cython"):
    if _kernels_c is None:
        raise ImportError(
            "KWRIST_KERNEL=compiled but the kwrist._kernels_c extension is "
            "not built; reinstall the package or unset KWRIST_KERNEL")
    _impl = _kernels_c
elif _forced:
    raise ImportError(f"unknown KWRIST_KERNEL value {_forced!r}")
else:
    _impl = _kernels_c if _kernels_c is not None else _kernels_ref

#: Name of the active backend: "compiled" or "python".
BACKEND = "compiled" if _impl is _kernels_c else "python"


def backend_module(name: str):
    """Fetch a specific backend module ("compiled" or "python") for tests
    and benchmarks; raises ImportError when the extension is unavailable."""
    if name == "python":
        return _kernels_ref
    if name == "compiled":
        if _kernels_c is None:
            raise ImportError("compiled kernel extension not built")
        return _kernels_c
    raise ValueError(f"unknown backend {name!r}")


def stack_objective(x, a1, a2, shift, b_rest, d_rest, kf, kc, cols,
                    l_base, l_cmd, weight, cos_tab, sin_tab,
                    grad_out, tendon_out, impl=None):
    """Dispatch to the active kernel; see ``_kernels_ref.stack_objective``.

    All array arguments must already be contiguous float64/int64 numpy
    arrays of the documented shapes (the equilibrium module guarantees
    this); ``impl`` overrides the backend for comparisons.
    """
    fn = (_impl if impl is None else impl).stack_objective
    return fn(x, a1, a2, shift, b_rest, d_rest, kf, kc, cols,
              l_base, l_cmd, weight, cos_tab, sin_tab, grad_out, tendon_out)


def hexagon_tables(offset_deg: float) -> tuple:
    """cos/sin lookup of the six hexagon vertex azimuths 60*k + offset."""
    az = np.radians(60.0 * np.arange(6) + offset_deg)
    return np.cos(az).copy(), np.sin(az).copy()
