"""Backend selection for the message-update kernels.

The compiled extension (_kernels_c) is preferred when importable; the
pure-Python module (_kernels_py) is the fallback.  Both produce bit-identical
trajectories.  Set QBFMP_KERNELS=py or QBFMP_KERNELS=c to force a backend;
the default is auto.
"""

import os

from . import _kernels_py

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_requested = os.environ.get("QBFMP_KERNELS", "auto")
if _requested not in ("auto", "c", "py"):
    raise ImportError(f"QBFMP_KERNELS must be auto, c, or py, not {_requested!r}")
if _requested == "c" and _kernels_c is None:
    raise ImportError("QBFMP_KERNELS=c but the compiled kernels are not built")

if _requested == "py" or _kernels_c is None:
    _impl = _kernels_py
    BACKEND = "python"
else:
    _impl = _kernels_c
    BACKEND = "c"

bp_sweep = _impl.bp_sweep
sp_sweep = _impl.sp_sweep


def available_backends() -> dict:
    """Map backend name to its kernel module (compiled entry only if built)."""
    out = {"python": _kernels_py}
    if _kernels_c is not None:
        out["c"] = _kernels_c
    return out
