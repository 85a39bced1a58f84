"""Hot numeric kernels: numba JIT path with a pure-numpy fallback.

The two inner loops that dominate the Monte-Carlo campaigns are direct
linear convolution and the anti-diagonal summation of a matrix.  Both have
a hand-written ``@njit`` implementation and a vectorized numpy one.  The
backend is picked once at import time from the ``AMBICONV_BACKEND``
environment variable:

* ``AMBICONV_BACKEND=numba``  -- require the JIT path (error if numba is absent)
* ``AMBICONV_BACKEND=numpy``  -- force the pure-numpy fallback
* unset / ``auto``            -- numba when importable, numpy otherwise

Both backends accumulate each output entry in the same index order, so they
agree to the last bit on the pure re-indexing identities the library relies
on (anti-diagonal shifts, support shifts).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    _HAVE_NUMBA = False


def _convolve_numpy(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.convolve(x, y)


def _lift_numpy(w: np.ndarray) -> np.ndarray:
    # bincount over k+l accumulates in row-major order, anti-diagonal by
    # anti-diagonal, matching the loop order of the numba kernel.
    m, n = w.shape
    idx = (np.arange(m)[:, None] + np.arange(n)[None, :]).ravel()
    return np.bincount(idx, weights=w.ravel(), minlength=m + n - 1)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _convolve_numba(x, y):  # pragma: no cover - measured via dispatch
        m = x.shape[0]
        n = y.shape[0]
        out = np.zeros(m + n - 1)
        for j in range(m):
            xj = x[j]
            for k in range(n):
                out[j + k] += xj * y[k]
        return out

    @njit(cache=True)
    def _lift_numba(w):  # pragma: no cover - measured via dispatch
        m, n = w.shape
        out = np.zeros(m + n - 1)
        for k in range(m):
            for l in range(n):
                out[k + l] += w[k, l]
        return out


def _select_backend() -> str:
    requested = os.environ.get("AMBICONV_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        return "numba" if _HAVE_NUMBA else "numpy"
    if requested == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError(
                "AMBICONV_BACKEND=numba requested but numba is not importable"
            )
        return "numba"
    if requested == "numpy":
        return "numpy"
    raise RuntimeError(f"unknown AMBICONV_BACKEND value: {requested!r}")


BACKEND = _select_backend()

if BACKEND == "numba":
    convolve_raw = _convolve_numba
    lift_raw = _lift_numba
else:
    convolve_raw = _convolve_numpy
    lift_raw = _lift_numpy
