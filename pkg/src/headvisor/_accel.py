"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise, or
when the environment variable ``HEADVISOR_PURE`` is set to a non-empty value
other than ``0``, the numpy implementation in ``_kernels_py`` is used.
"""

import os

from . import _kernels_py

_force_pure = os.environ.get("HEADVISOR_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

clipped_centroid = _impl.clipped_centroid
simplex_iterate = _impl.simplex_iterate

STATUS_OPTIMAL = _kernels_py.STATUS_OPTIMAL
STATUS_UNBOUNDED = _kernels_py.STATUS_UNBOUNDED
STATUS_ITERATION_LIMIT = _kernels_py.STATUS_ITERATION_LIMIT


def backends():
    """Return the available ``{name: module}`` kernel implementations."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
