"""Pure NumPy fallback for the cyclic Jacobi kernel; same pivot order and arithmetic."""

from __future__ import annotations

import math

import numpy as np


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def jacobi_inplace(a: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int) -> int:
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                with np.errstate(over="ignore"):
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                x, y = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * x - s * y
                a[:, q] = s * x + c * y
                x, y = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * x - s * y
                a[q, :] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                x, y = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * x - s * y
                v[:, q] = s * x + c * y
    return -1
