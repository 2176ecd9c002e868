"""Chebyshev-Gauss-Lobatto grids.

Nodes are ``zeta_k = -cos(pi k / N)`` mapped to ``[a, b]``.  Lengths and
quotients use the sine closed forms

    |Lambda_k| = 2 sin(pi (2k+1) / (2N)) sin(pi / (2N))
    Q_k = sin(pi (2k+1) / (2N)) / sin(pi (2k-1) / (2N))

rather than node differences.
"""
from __future__ import annotations

import numpy as np

from . import lgl as lgl_module
from .errors import RangeError
from .grid_core import CheckResult, Grid

MAX_ORDER = 100000


def _check_order(order, low=1):
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool):
        raise TypeError(f"order must be an integer, got {order!r}")
    if order < low or order > MAX_ORDER:
        raise RangeError(f"order {order} outside supported range {low}..{MAX_ORDER}")
    return int(order)


def _reference_lengths(n):
    k = np.arange(n)
    return 2.0 * np.sin(np.pi * (2 * k + 1) / (2.0 * n)) * np.sin(np.pi / (2.0 * n))


class CglGrid(Grid):
    """CGL grid of order ``N`` on ``interval``; ``angles`` are ``pi k / N``."""

    def __init__(self, order: int, interval=(-1.0, 1.0)):
        n = _check_order(order)
        a, b = float(interval[0]), float(interval[1])
        half = 0.5 * (b - a)
        angles = np.pi * np.arange(n + 1) / n
        n_half = (n + 1) // 2
        t = 2.0 * np.sin(0.5 * angles[:n_half]) ** 2  # 1 - cos, without cancellation
        x = np.empty(n + 1)
        x[:n_half] = a + half * t
        x[n + 1 - n_half :] = (b - half * t)[::-1]
        if n % 2 == 0:
            x[n // 2] = 0.5 * (a + b)
        x[0], x[n] = a, b
        h = _reference_lengths(n)
        h[n - n_half :] = h[:n_half][::-1]  # exact mirror symmetry
        super().__init__(x, (a, b), lengths=half * h)
        self.order = n
        angles.flags.writeable = False
        self.angles = angles


def cgl_grid(order: int, interval=(-1.0, 1.0)) -> CglGrid:
    return CglGrid(order, interval)


def cgl_interval_length(order: int, k: int) -> float:
    """Closed-form length of cell ``k`` of the reference CGL grid, ``0 <= k < N``."""
    n = _check_order(order)
    if not 0 <= k < n:
        raise RangeError(f"cell index {k} outside 0..{n - 1}")
    return float(2.0 * np.sin(np.pi * (2 * k + 1) / (2.0 * n)) * np.sin(np.pi / (2.0 * n)))


def cgl_quotients(grid: CglGrid) -> np.ndarray:
    """``Q_k = |Lambda_k| / |Lambda_{k-1}|`` for ``1 <= k <= N - 1`` (sine ratio)."""
    n = grid.order
    if n < 2:
        raise RangeError("quotients need order >= 2")
    k = np.arange(1, n)
    return np.sin(np.pi * (2 * k + 1) / (2.0 * n)) / np.sin(np.pi * (2 * k - 1) / (2.0 * n))


QUASI_UNIFORM_BOUND = 1.5 * np.pi


def check_cgl_quasi_uniform(order: int) -> CheckResult:
    """``1/(3pi/2) <= Q_k <= 3pi/2`` and ``|Lambda_{k-1}| <= |Lambda_k|`` in the left half."""
    g = cgl_grid(order)
    if g.order < 2:
        return CheckResult(True, details={"max_quotient": 1.0})
    q = cgl_quotients(g)
    qmax = float(max(q.max(), (1.0 / q).max()))
    details = {"max_quotient": qmax}
    if qmax > QUASI_UNIFORM_BOUND:
        k = int(np.argmax(np.maximum(q, 1.0 / q))) + 1
        return CheckResult(False, {"k": k, "quotient": float(q[k - 1])}, details)
    h = g.lengths
    kmax = (g.order - 1) // 2
    bad = np.nonzero(h[:kmax] > h[1 : kmax + 1])[0]
    if bad.size:
        return CheckResult(False, {"k": int(bad[0]) + 1, "reason": "decreasing"}, details)
    return CheckResult(True, details=details)


def check_interlacing(order: int, tol: float = 1e-12) -> CheckResult:
    """LGL nodes sit between CGL nodes of the same order, left half.

    For ``1 <= k <= (N-1)//2``: ``zeta_k <= xi_k <= zeta_{k+1}`` and the LGL
    cell ``[xi_k, xi_{k+1}]`` lies in ``[zeta_k, zeta_{k+2}]``.  Compared
    through angles, ``eta_k`` against ``pi k / N``.
    """
    n = _check_order(order)
    if n > lgl_module.MAX_ORDER:
        raise RangeError(f"no LGL grid of order {n}")
    eta = lgl_module.lgl_grid(n).angles
    k = np.arange(1, (n - 1) // 2 + 1)
    theta = np.pi / n
    s1 = eta[k] - theta * k
    s2 = theta * (k + 1) - eta[k]
    s3 = theta * (k + 2) - eta[k + 1]
    slack = np.minimum(np.minimum(s1, s2), s3)
    details = {"min_angle_slack": float(slack.min()) if slack.size else 0.0}
    bad = np.nonzero(slack < -tol)[0]
    if bad.size:
        i = int(bad[0])
        return CheckResult(False, {"k": int(k[i]), "slacks": [float(s1[i]), float(s2[i]), float(s3[i])]}, details)
    return CheckResult(True, details=details)


def check_cgl_displacement(order: int, other: int, tol: float = 1e-12) -> CheckResult:
    """For ``M > N``: ``zeta^M_j <= zeta^N_k`` implies ``|Lambda^M_j| <= |Lambda^N_k|`` (left half)."""
    n = _check_order(order, low=1)
    m = _check_order(other, low=n + 1)
    gn, gm = cgl_grid(n), cgl_grid(m)
    kmax, jmax = (n - 1) // 2, (m - 1) // 2
    k = np.searchsorted(gn.angles[: kmax + 1], gm.angles[: jmax + 1], side="left")
    ok = k <= kmax
    j = np.nonzero(ok)[0]
    k = k[ok]
    slack = gn.lengths[k] - gm.lengths[j]
    details = {"min_slack": float(slack.min()) if slack.size else 0.0}
    bad = np.nonzero(slack < -tol)[0]
    if bad.size:
        i = int(bad[0])
        return CheckResult(False, {"j": int(j[i]), "k": int(k[i])}, details)
    return CheckResult(True, details=details)
