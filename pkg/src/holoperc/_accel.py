"""Optional numba acceleration.

Set ``HOLOPERC_NO_NUMBA=1`` to force the pure-numpy paths, e.g. when
debugging or benchmarking. The flag is read once at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

USE_NUMBA = numba is not None and os.environ.get("HOLOPERC_NO_NUMBA", "") not in ("1", "true", "yes")


def njit(f=None, **options):
    """``numba.njit`` when acceleration is enabled, otherwise a no-op."""
    options.setdefault("cache", True)
    if not USE_NUMBA:
        return f if f is not None else (lambda g: g)
    if f is None:
        return lambda g: numba.njit(g, **options)
    return numba.njit(f, **options)
