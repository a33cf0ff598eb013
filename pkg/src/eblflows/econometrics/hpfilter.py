"""Trend extraction by penalized least squares (pentadiagonal system).

The trend minimizes ``sum((y - tau)^2) + lamb * sum((d2 tau)^2)`` where
``d2`` is the second difference.  The first-order conditions form the
pentadiagonal system ``(I + lamb * D'D) tau = y`` which is solved in banded
form; ``lamb = 6.25`` is the conventional smoothing for annual data.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import solve_banded

from ..params import ParameterError


def hp_filter(series: Sequence[float], lamb: float = 6.25) -> np.ndarray:
    """Trend component of a series; requires at least 4 observations."""
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ParameterError("hp_filter expects a one-dimensional series")
    if len(y) < 4:
        raise ParameterError(f"series too short for trend extraction: {len(y)} < 4")
    if lamb < 0:
        raise ParameterError(f"smoothing parameter must be nonnegative, got {lamb}")
    n = len(y)
    # Band rows of I + lamb*D'D, ordered from the second superdiagonal down.
    ab = np.zeros((5, n))
    ab[0, 2:] = lamb
    ab[1, 1] = -2 * lamb
    ab[1, 2:-1] = -4 * lamb
    ab[1, -1] = -2 * lamb
    ab[2, 0] = ab[2, -1] = 1 + lamb
    ab[2, 1] = ab[2, -2] = 1 + 5 * lamb
    ab[2, 2:-2] = 1 + 6 * lamb
    ab[3, 0] = -2 * lamb
    ab[3, 1:-2] = -4 * lamb
    ab[3, -2] = -2 * lamb
    ab[4, :-2] = lamb
    return solve_banded((2, 2), ab, y)


def second_difference_matrix(n: int) -> np.ndarray:
    """Dense (n-2) x n second-difference operator, for cross-checks."""
    d = np.zeros((n - 2, n))
    for i in range(n - 2):
        d[i, i] = 1.0
        d[i, i + 1] = -2.0
        d[i, i + 2] = 1.0
    return d
