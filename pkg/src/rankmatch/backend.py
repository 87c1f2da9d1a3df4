"""Kernel backend selection.

The hot inner loops (greedy matching, pairing recurrences, Monte Carlo,
initiative simulation) exist twice: a numba @njit implementation and a
pure numpy/Python fallback with identical call signatures and identical
random streams.  The active backend is chosen once at import time:

* ``RANKMATCH_BACKEND=numba``  force numba (ImportError if unavailable)
* ``RANKMATCH_BACKEND=numpy``  force the fallback
* unset                        numba when importable, else the fallback

Both backends draw randomness from the same MT19937 stream (numba's
internal generator reproduces ``numpy.random.RandomState`` bit for bit),
so seeded results are identical whichever backend runs them.
"""

import os

_ENV_VAR = "RANKMATCH_BACKEND"
_requested = os.environ.get(_ENV_VAR, "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"{_ENV_VAR}={_requested!r}: expected 'numba' or 'numpy'"
    )

if _requested == "numpy":
    _use_numba = False
else:
    try:
        import numba  # noqa: F401
        _use_numba = True
    except ImportError:
        if _requested == "numba":
            raise
        _use_numba = False

if _use_numba:
    from . import _kernels_numba as kernels
    BACKEND = "numba"
else:
    from . import _kernels_numpy as kernels
    BACKEND = "numpy"


def get_kernels(name: str | None = None):
    """Return the kernel module for `name` ('numba'/'numpy'), default active."""
    if name is None:
        return kernels
    if name == "numba":
        from . import _kernels_numba
        return _kernels_numba
    if name == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy
    raise ValueError(f"unknown backend {name!r}")
