"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist:

* ``halfpot._impl_numba`` -- per-point loops compiled with ``numba.njit``
* ``halfpot._impl_numpy`` -- vectorised pure-numpy fallback

The active one is chosen once at import time from the environment variable
``HALFPOT_BACKEND`` (``numba``, ``numpy`` or ``auto``; default ``auto`` picks
numba when it imports cleanly).  ``get_impl`` can load either explicitly,
which is what the benchmark uses to compare them in one process.
"""

import os

_ENV_VAR = "HALFPOT_BACKEND"
_cache = {}


def _load(name):
    if name == "numpy":
        from . import _impl_numpy as mod
    elif name == "numba":
        from . import _impl_numba as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    return mod


def get_impl(name="auto"):
    """Return the implementation module for ``name`` (cached)."""
    name = (name or "auto").lower()
    if name == "auto":
        try:
            import numba  # noqa: F401
            name = "numba"
        except ImportError:
            name = "numpy"
    if name not in _cache:
        _cache[name] = _load(name)
    return _cache[name]


impl = get_impl(os.environ.get(_ENV_VAR, "auto"))


def active_backend():
    """Name of the backend selected at import time."""
    return impl.BACKEND_NAME
