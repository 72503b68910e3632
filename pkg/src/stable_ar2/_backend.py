"""Kernel backend selection.

The hot numeric loops exist in two interchangeable flavors: numba-jitted
(default when numba imports cleanly) and pure numpy.  Selection happens once
at import time:

* ``STABLE_AR2_BACKEND`` = ``auto`` (default) | ``numba`` | ``numpy``
* ``STABLE_AR2_THREADS`` caps the numba thread pool (parallel kernels only)
"""

import os

__all__ = ["BACKEND", "NUMBA_ENABLED", "numba"]

_requested = os.environ.get("STABLE_AR2_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"STABLE_AR2_BACKEND={_requested!r}: expected 'auto', 'numba' or 'numpy'"
    )

numba = None
if _requested in ("auto", "numba"):
    try:
        import numba  # type: ignore[no-redef]
    except ImportError:
        if _requested == "numba":
            raise RuntimeError(
                "STABLE_AR2_BACKEND=numba but numba is not importable"
            ) from None
        numba = None

NUMBA_ENABLED = numba is not None
BACKEND = "numba" if NUMBA_ENABLED else "numpy"

if NUMBA_ENABLED:
    _threads = os.environ.get("STABLE_AR2_THREADS")
    if _threads:
        _n = int(_threads)
        if _n < 1:
            raise RuntimeError("STABLE_AR2_THREADS must be >= 1")
        numba.set_num_threads(min(_n, numba.config.NUMBA_NUM_THREADS))
