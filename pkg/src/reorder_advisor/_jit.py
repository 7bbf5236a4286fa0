"""Optional numba acceleration.

Kernels are written as plain loops over numpy arrays and decorated with
:func:`njit`.  Setting ``REORDER_ADVISOR_DISABLE_NUMBA=1`` (or running without
numba installed) makes :func:`njit` the identity, and modules with a
vectorised numpy alternative switch to it through :data:`USE_NUMBA`.
The flag is read once, at import time.
"""

import os

_FLAG = "REORDER_ADVISOR_DISABLE_NUMBA"

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

USE_NUMBA = _nb is not None and os.environ.get(_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is enabled, otherwise a no-op decorator."""
    if USE_NUMBA:
        return _nb.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda func: func


def py_func(kernel):
    """Return the interpreted body of a (possibly compiled) kernel."""
    return getattr(kernel, "py_func", kernel)
