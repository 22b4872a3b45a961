"""Kernel backend selection.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
NumPy implementations in ``_pykernels`` are. Setting the environment
variable ``SYNTAXIRL_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("SYNTAXIRL_PURE_PYTHON", "") not in ("1", "true"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = _BACKENDS[BACKEND]
soft_backward = _active.soft_backward
forward_svf = _active.forward_svf
local_depth_sums = _active.local_depth_sums


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    """Return the kernel module registered under ``name``."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}") from None


def use_backend(name):
    """Route the module-level kernels to backend ``name`` for subsequent calls."""
    global BACKEND, soft_backward, forward_svf, local_depth_sums
    mod = get_backend(name)
    BACKEND = name
    soft_backward = mod.soft_backward
    forward_svf = mod.forward_svf
    local_depth_sums = mod.local_depth_sums
