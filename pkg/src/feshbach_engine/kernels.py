"""Backend selection for the split-step kernels.

The compiled Cython extension is used when available; otherwise the NumPy
implementation takes over transparently.  Set FESHBACH_ENGINE_PURE_PYTHON=1
to force the fallback, or call use_backend() to switch at runtime (the
benchmark suite does this to compare the two).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

_active_name = "python"
_active = _kernels_py
if _compiled is not None and not os.environ.get("FESHBACH_ENGINE_PURE_PYTHON"):
    _active_name = "cython"
    _active = _compiled


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(BACKENDS))


def active_backend() -> str:
    return _active_name


def use_backend(name: str) -> str:
    """Switch the kernel backend; returns the previously active name."""
    global _active, _active_name
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    previous = _active_name
    _active_name = name
    _active = BACKENDS[name]
    return previous


def apply_local_phase(psi, potential, density_coef, g, dt):
    _active.apply_local_phase(psi, potential, density_coef, g, dt)


def apply_local_decay(psi, potential, density_coef, g, dt):
    _active.apply_local_decay(psi, potential, density_coef, g, dt)
