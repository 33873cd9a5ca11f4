"""Backend dispatch for the hot kernels.

Two interchangeable implementations exist: numba-jitted loops and a pure
numpy fallback.  Selection is driven by the ZPZP2_JIT environment variable:
"numba" forces the jitted path (ImportError if numba is missing), "numpy"
forces the fallback, anything else (or unset) tries numba first.
"""

from __future__ import annotations

import os

_ENV_VAR = "ZPZP2_JIT"
_cached = None
_cached_choice = None


def _resolve():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice in ("numpy", "off", "0"):
        from . import _kernels_numpy as mod

        return "numpy", mod
    if choice in ("numba", "jit", "1"):
        from . import _kernels_numba as mod

        return "numba", mod
    try:
        from . import _kernels_numba as mod

        return "numba", mod
    except ImportError:
        from . import _kernels_numpy as mod

        return "numpy", mod


def kernels():
    """Module holding rref_mod / membership_mask / kernel scan functions."""
    global _cached, _cached_choice
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if _cached is None or choice != _cached_choice:
        name, mod = _resolve()
        _cached = mod
        _cached_choice = choice
        _cached_name[0] = name
    return _cached


_cached_name = ["unresolved"]


def backend_name() -> str:
    kernels()
    return _cached_name[0]
