"""Kernel backend selection.

The hot kernels in :mod:`padfec.kernels` are compiled with numba by default.
Setting ``PADFEC_BACKEND=numpy`` (or running without numba installed) makes
the same functions run as plain interpreted numpy code. Kernels are integer
and byte arithmetic only, so both backends produce bit-identical results;
see ``benchmarks/backend_bench.py`` for the speed comparison.
"""

import os

__all__ = ["NUMBA_ENABLED", "backend_name", "njit"]

_requested = os.environ.get("PADFEC_BACKEND", "numba").strip().lower()

NUMBA_ENABLED = _requested not in ("numpy", "python", "off", "0")

if NUMBA_ENABLED:
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - exercised via env flag instead
        NUMBA_ENABLED = False


if NUMBA_ENABLED:

    def njit(func):
        return _numba.njit(cache=True, nogil=True)(func)

else:

    def njit(func):
        return func


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
