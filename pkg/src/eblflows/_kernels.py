"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The Monte Carlo home-bias estimate reduces millions of affine holding
evaluations; that inner loop is the package's only hot spot.  Both backends
implement the same function:

``hb_path_means(y_H, y_F, coefs, burn_in)`` takes ``(n_paths, T)`` output
draws for each country plus the six affine coefficients of the two
world-share holdings ``X_HH = c0 + c1*y_H[t] + c2*y_H[t-1]`` and
``X_HF = c3 + c4*y_F[t] + c5*y_F[t-1]`` and returns the per-path time
average of ``X_HH - X_HF`` over ``t >= burn_in``.

Backend selection: the environment variable ``EBLFLOWS_BACKEND`` set to
``numpy`` (or ``0``/``off``) forces the fallback; anything else (default)
uses numba when importable.  ``benchmarks/bench_kernels.py`` compares the
two.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("EBLFLOWS_BACKEND", "numba").strip().lower()
    return flag not in ("numpy", "np", "0", "off")


def hb_path_means_numpy(
    y_H: np.ndarray, y_F: np.ndarray, coefs: np.ndarray, burn_in: int
) -> np.ndarray:
    """Vectorized per-path mean home bias (reference implementation)."""
    c0, c1, c2, c3, c4, c5 = coefs
    now = slice(burn_in, None)
    prev = slice(burn_in - 1, -1)
    hb = (c0 + c1 * y_H[:, now] + c2 * y_H[:, prev]) - (
        c3 + c4 * y_F[:, now] + c5 * y_F[:, prev]
    )
    return hb.mean(axis=1)


def _hb_path_means_loop(
    y_H: np.ndarray, y_F: np.ndarray, coefs: np.ndarray, burn_in: int
) -> np.ndarray:
    n_paths, T = y_H.shape
    c0, c1, c2, c3, c4, c5 = coefs[0], coefs[1], coefs[2], coefs[3], coefs[4], coefs[5]
    out = np.empty(n_paths)
    n_used = T - burn_in
    for p in range(n_paths):
        acc = 0.0
        for t in range(burn_in, T):
            x_hh = c0 + c1 * y_H[p, t] + c2 * y_H[p, t - 1]
            x_hf = c3 + c4 * y_F[p, t] + c5 * y_F[p, t - 1]
            acc += x_hh - x_hf
        out[p] = acc / n_used
    return out


BACKEND = "numpy"
hb_path_means = hb_path_means_numpy

if _numba_requested():
    try:
        from numba import njit

        hb_path_means_numba = njit(cache=True, parallel=False)(_hb_path_means_loop)
        hb_path_means = hb_path_means_numba
        BACKEND = "numba"
    except ImportError:
        pass


def active_backend() -> str:
    return BACKEND
