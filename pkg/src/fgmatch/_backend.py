"""Kernel backend selection.

Hot numeric loops live in ``fgmatch._kernels`` and are compiled with numba
by default. Setting the environment variable ``FGM_BACKEND=numpy`` runs the
very same kernel functions as plain Python/numpy -- much slower, but with
identical results. The flag is read once at import time.
"""

import os

BACKEND = os.environ.get("FGM_BACKEND", "numba").strip().lower()

if BACKEND not in ("numba", "numpy"):
    raise RuntimeError(
        f"FGM_BACKEND={BACKEND!r} is not supported; use 'numba' or 'numpy'"
    )

if BACKEND == "numba":
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover
        BACKEND = "numpy"


def jit(func):
    """Compile ``func`` with numba, or return it unchanged on the numpy backend."""
    if BACKEND == "numba":
        from numba import njit

        return njit(cache=True)(func)
    return func
