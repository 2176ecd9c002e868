"""Legendre-Gauss-Lobatto grids, their angles, and analytic bounds.

The LGL nodes of order ``N`` are the ``N + 1`` zeros of ``(1 - x^2) L_N'(x)``.
Writing a node as ``xi = -cos(eta)`` gives its angle ``eta`` in ``[0, pi]``.
Interior angles of the left half are found by a bisection-safeguarded
Newton iteration in ``eta``, bracketed by

    pi k / N  <=  eta_k  <=  pi (2k + 1) / (2N + 1),   1 <= k <= (N-1)//2,

and the right half follows by mirroring.  Cell lengths are taken from the
angles (``cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2)``), which keeps the
tiny boundary cells of high-order grids accurate to a few ulps.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import RangeError, SolverError
from .grid_core import CheckResult, Grid
from .orthopoly import _residual_batch, _residual_batch_dd

logger = logging.getLogger(__name__)

MAX_ORDER = 2000
MAX_ITER = 100
_EPS = np.finfo(float).eps


# McMahon-type expansion of the zeros of J_1 (good to ~1e-4 already at k=1)
def _bessel_guess(n, k):
    b = (k + 0.25) * np.pi
    j = b - 3.0 / (8.0 * b) + 36.0 / (3.0 * (8.0 * b) ** 3)
    return j / np.sqrt(n * (n + 1.0))


def _solve_left_angles(n: int):
    """Angles ``eta_1..eta_K`` of the left half, ``K = (n-1)//2``.

    Newton in the angle, all roots advanced together.  A step that leaves
    its bracket is replaced by bisection.  A root counts as converged once
    the step, measured in ``x = -cos(eta)``, is at most
    ``4 eps max(1, |x|)``.  A final Newton correction with a
    compensated residual removes the rounding error of the plain
    recurrence.

    Returns
    -------
    theta : ndarray
    iters : ndarray of int
        Iterations used per root.

    Raises
    ------
    SolverError
        If some root has not converged after ``MAX_ITER`` iterations.
    """
    m = (n - 1) // 2
    k = np.arange(1, m + 1, dtype=float)
    lo = np.pi * k / n
    hi = np.pi * (2.0 * k + 1.0) / (2.0 * n + 1.0)
    # L_N'(cos eta) is positive before the first root, so its sign just above
    # the lower bracket end is (-1)^(k-1)
    s_lo = np.where(k % 2 == 1, 1.0, -1.0)
    theta = _bessel_guess(n, k)
    outside = ~((lo < theta) & (theta < hi))
    theta[outside] = 0.5 * (lo[outside] + hi[outside])
    iters = np.zeros(m, dtype=np.int64)
    slope = np.ones(m)
    active = np.arange(m)
    for _ in range(MAX_ITER):
        if active.size == 0:
            break
        x = theta[active]
        f, df = _residual_batch(n, x)
        iters[active] += 1
        slope[active] = df
        below = f * s_lo[active] > 0.0
        lo[active] = np.where(below, x, lo[active])
        hi[active] = np.where(below, hi[active], x)
        l, h = lo[active], hi[active]
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - f / df
        bad = ~((l < xn) & (xn < h))
        xn[bad] = 0.5 * (l[bad] + h[bad])
        xn[f == 0.0] = x[f == 0.0]
        theta[active] = xn
        cosx = np.cos(xn)
        tol = 4.0 * _EPS * np.maximum(1.0, np.abs(cosx))
        done = (np.abs(np.sin(xn) * (xn - x)) <= tol) | (np.sin(xn) * (h - l) <= tol) | (f == 0.0)
        active = active[~done]
    if active.size:
        raise SolverError(f"LGL solver: {active.size} roots of order {n} did not converge")
    if m:
        # the slope from the last plain step is accurate enough for this
        # correction, which is of the order of the plain rounding error
        theta = theta - _residual_batch_dd(n, theta) / slope
    return theta, iters


@functools.lru_cache(maxsize=None)
def _reference(order: int):
    """Angles (all ``N + 1``) and cell lengths on ``[-1, 1]`` for one order."""
    n = order
    left, iters = _solve_left_angles(n)
    m = left.size
    eta = np.empty(n + 1)
    eta[0] = 0.0
    eta[1 : m + 1] = left
    if n % 2 == 0:
        eta[n // 2] = 0.5 * np.pi
    eta[n - m : n] = np.pi - left[::-1]
    eta[n] = np.pi

    # left-half cells, plus the central cell for odd N, from the angle form
    n_half = (n + 1) // 2
    a0 = eta[:n_half]
    a1 = np.empty(n_half)
    a1[: n_half - 1] = eta[1:n_half]
    if n % 2 == 1:
        a1[-1] = np.pi - eta[n_half - 1]
    else:
        a1[-1] = 0.5 * np.pi
    h_half = 2.0 * np.sin(0.5 * (a0 + a1)) * np.sin(0.5 * (a1 - a0))
    h = np.empty(n)
    h[:n_half] = h_half
    h[n_half:] = h_half[: n - n_half][::-1]
    # offsets from the nearest endpoint, t = 1 - cos(eta) = 2 sin(eta/2)^2
    t_left = 2.0 * np.sin(0.5 * eta[:n_half]) ** 2
    for arr in (eta, h, t_left):
        arr.flags.writeable = False
    logger.debug("LGL order %d: max Newton iterations %s", n, iters.max() if iters.size else 0)
    return eta, h, t_left


def _check_order(order, low=1):
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool):
        raise TypeError(f"order must be an integer, got {order!r}")
    if order < low or order > MAX_ORDER:
        raise RangeError(f"order {order} outside supported range {low}..{MAX_ORDER}")
    return int(order)


class LglGrid(Grid):
    """LGL grid of a given order mapped affinely to ``interval``.

    Attributes
    ----------
    order : int
    nodes : ndarray
        ``N + 1`` nodes on ``interval``.
    angles : ndarray
        ``eta_k = arccos(-xi_k)`` of the reference nodes on ``[-1, 1]``.
    lengths : ndarray
        Cell lengths on ``interval``.
    """

    def __init__(self, order: int, interval=(-1.0, 1.0)):
        n = _check_order(order)
        a, b = float(interval[0]), float(interval[1])
        eta, h_ref, t_left = _reference(n)
        half = 0.5 * (b - a)
        x = np.empty(n + 1)
        n_half = t_left.size
        x[:n_half] = a + half * t_left
        x[n + 1 - n_half :] = (b - half * t_left)[::-1]
        if n % 2 == 0:
            x[n // 2] = 0.5 * (a + b)
        x[0], x[n] = a, b
        super().__init__(x, (a, b), lengths=half * h_ref)
        self.order = n
        self.angles = eta


def lgl_grid(order: int, interval=(-1.0, 1.0)) -> LglGrid:
    """LGL grid of order ``1 <= N <= 2000`` on ``interval``."""
    return LglGrid(order, interval)


def lgl_quotients(grid: LglGrid) -> np.ndarray:
    """Quotients ``q_k = |D_k| / |D_{k-1}|`` for ``1 <= k <= N - 1``."""
    if grid.order < 2:
        raise RangeError("quotients need order >= 2")
    h = grid.lengths
    return h[1:] / h[:-1]


@dataclass(frozen=True)
class LglBounds:
    """Analytic bounds for one order.

    ``angle_lower[i]``/``angle_upper[i]`` bound ``eta_k`` for
    ``k = angle_index[i]``.  ``length_lower``/``length_upper`` bound the
    length of cell ``length_index[i]`` on ``[-1, 1]``; ``length_case[i]``
    names the estimate used (``general``, ``boundary``, ``central_odd`` or
    ``central_even``).
    """

    order: int
    angle_index: np.ndarray
    angle_lower: np.ndarray
    angle_upper: np.ndarray
    length_index: np.ndarray
    length_lower: np.ndarray
    length_upper: np.ndarray
    length_case: tuple[str, ...]


def lgl_angle_bounds(order: int) -> LglBounds:
    """Angle brackets ``pi k/N <= eta_k <= pi (2k+1)/(2N+1)``, ``1 <= k <= (N-1)//2``."""
    n = _check_order(order, low=2)
    k = np.arange(1, (n - 1) // 2 + 1)
    empty = np.empty(0)
    return LglBounds(
        order=n,
        angle_index=k,
        angle_lower=np.pi * k / n,
        angle_upper=np.pi * (2 * k + 1) / (2 * n + 1),
        length_index=np.empty(0, dtype=int),
        length_lower=empty,
        length_upper=empty,
        length_case=(),
    )


def _general_length_bounds(n, k):
    d = n * (2 * n + 1)
    lower = 2.0 * np.sin(0.5 * np.pi * (4 * k * n + k + 3 * n + 1) / d) * np.sin(
        0.5 * np.pi * (n + k + 1) / d
    )
    upper = 2.0 * np.sin(0.5 * np.pi * (4 * k * n + 3 * n + k) / d) * np.sin(
        0.5 * np.pi * (3 * n - k) / d
    )
    return lower, upper


def lgl_length_bounds(order: int) -> LglBounds:
    """Bounds on the left-half cell lengths on ``[-1, 1]``.

    Parameters
    ----------
    order : int
        ``N >= 3``.  The general sine-product bounds (indices
        ``1 <= k <= floor((N-1)/2 - 1)``) exist only for ``N >= 5``.

    Returns
    -------
    LglBounds
        One entry per bounded cell index, in increasing index order, with
        the angle brackets filled in as well.

    Raises
    ------
    RangeError
        For ``N < 3``, where no length bound is available.
    """
    n = _check_order(order, low=3)
    idx, lo, up, case = [], [], [], []
    idx.append(0)
    lo.append(4.0 / n**2)
    up.append(9.0 * np.pi**2 / (2.0 * (2 * n + 1) ** 2))
    case.append("boundary")
    if n >= 5:
        kmax = int(np.floor((n - 1) / 2 - 1))
        for k in range(1, kmax + 1):
            lw, uw = _general_length_bounds(n, k)
            idx.append(k)
            lo.append(float(lw))
            up.append(float(uw))
            case.append("general")
    if n % 2 == 1:
        kc = n // 2
        bounds = (2.0 / (2 * n + 1), (4.0 * n - 2) / n**2, "central_odd")
    elif n >= 4:
        kc = n // 2 - 1
        bounds = (3.0 / (2 * n + 1), (4.0 * n - 4) / n**2, "central_even")
    else:
        kc = None
    if kc is not None:
        idx.append(kc)
        lo.append(bounds[0])
        up.append(bounds[1])
        case.append(bounds[2])
    ab = lgl_angle_bounds(n)
    return LglBounds(
        order=n,
        angle_index=ab.angle_index,
        angle_lower=ab.angle_lower,
        angle_upper=ab.angle_upper,
        length_index=np.array(idx, dtype=int),
        length_lower=np.array(lo),
        length_upper=np.array(up),
        length_case=tuple(case),
    )


# --- checkable properties ---------------------------------------------------
# Each check works on the reference interval [-1, 1] and returns a
# CheckResult whose ``witness`` also carries the realized margins.

QUOTIENT_TOL = 1e-12


def check_angle_bounds(order: int, tol: float = QUOTIENT_TOL) -> CheckResult:
    """``pi k/N <= eta_k <= pi (2k+1)/(2N+1)`` for ``1 <= k <= (N-1)//2``."""
    ab = lgl_angle_bounds(order)
    eta = lgl_grid(order).angles[ab.angle_index]
    low = eta - ab.angle_lower
    up = ab.angle_upper - eta
    info = {"min_lower_slack": float(low.min()) if low.size else 0.0,
            "min_upper_slack": float(up.min()) if up.size else 0.0}
    bad = np.nonzero((low < -tol) | (up < -tol))[0]
    if bad.size:
        i = int(bad[0])
        info.update(k=int(ab.angle_index[i]), angle=float(eta[i]),
                    bounds=[float(ab.angle_lower[i]), float(ab.angle_upper[i])])
        return CheckResult(False, info, details=info)
    return CheckResult(True, details=info)


def check_length_bounds(order: int, tol: float = QUOTIENT_TOL) -> CheckResult:
    """Every available length estimate holds for the reference grid (``N >= 3``)."""
    lb = lgl_length_bounds(order)
    h = lgl_grid(order).lengths[lb.length_index]
    low = h - lb.length_lower
    up = lb.length_upper - h
    info = {"min_lower_slack": float(low.min()), "min_upper_slack": float(up.min())}
    bad = np.nonzero((low < -tol) | (up < -tol))[0]
    if bad.size:
        i = int(bad[0])
        info.update(k=int(lb.length_index[i]), case=lb.length_case[i], length=float(h[i]),
                    bounds=[float(lb.length_lower[i]), float(lb.length_upper[i])])
        return CheckResult(False, info, details=info)
    return CheckResult(True, details=info)


def check_mq(order: int, next_order: bool = True, tol: float = QUOTIENT_TOL) -> CheckResult:
    """Monotone quotients.

    (ii) ``q_k >= q_{k+1}`` for ``1 <= k <= (N-3)//2``; and, if
    ``next_order``, (i) ``q_k^N <= q_k^{N+1}`` for ``k in {1, 2}`` where
    ``q_k^N`` exists.
    """
    n = _check_order(order, low=2)
    q = lgl_quotients(lgl_grid(n))
    kmax = (n - 3) // 2
    info = {}
    if kmax >= 1:
        drop = q[:kmax] - q[1 : kmax + 1]
        info["min_decrease_in_k"] = float(drop.min())
        bad = np.nonzero(drop < -tol)[0]
        if bad.size:
            k = int(bad[0]) + 1
            info.update(part="ii", k=k, q_k=float(q[k - 1]), q_k1=float(q[k]))
            return CheckResult(False, info, details=info)
    if next_order and n < MAX_ORDER:
        q1 = lgl_quotients(lgl_grid(n + 1))
        for k in (1, 2):
            if k <= n - 1:
                rise = float(q1[k - 1] - q[k - 1])
                info[f"increase_in_N_k{k}"] = rise
                if rise < -tol:
                    info.update(part="i", k=k, q_N=float(q[k - 1]), q_N1=float(q1[k - 1]))
                    return CheckResult(False, info, details=info)
    return CheckResult(True, details=info)


def check_displacement(order: int, other: int, tol: float = QUOTIENT_TOL) -> CheckResult:
    """For ``M > N``: ``xi^M_j <= xi^N_k`` implies ``|D^M_j| <= |D^N_k|`` in the left half.

    Indices run over ``0 <= k <= (N-1)//2`` and ``0 <= j <= (M-1)//2``.
    Node positions are compared through their angles.
    """
    n = _check_order(order, low=2)
    m = _check_order(other, low=n + 1)
    gn, gm = lgl_grid(n), lgl_grid(m)
    kmax, jmax = (n - 1) // 2, (m - 1) // 2
    eta_n = gn.angles[: kmax + 1]
    eta_m = gm.angles[: jmax + 1]
    # smallest admissible k with eta^N_k >= eta^M_j; by monotonicity its cell
    # is the shortest one the condition applies to
    k = np.searchsorted(eta_n, eta_m, side="left")
    ok = k <= kmax
    j = np.nonzero(ok)[0]
    k = k[ok]
    slack = gn.lengths[k] - gm.lengths[j]
    info = {"min_slack": float(slack.min()) if slack.size else 0.0}
    bad = np.nonzero(slack < -tol)[0]
    if bad.size:
        i = int(bad[0])
        info.update(j=int(j[i]), k=int(k[i]), length_M=float(gm.lengths[j[i]]),
                    length_N=float(gn.lengths[k[i]]))
        return CheckResult(False, info, details=info)
    return CheckResult(True, details=info)


def convexity_values(order: int) -> np.ndarray:
    """Scaled values of ``(c^2 + delta^2 - 1) - 2 delta c xi_2`` per left-half triple.

    For the triple ``(xi_{k-1}, xi_k, xi_{k+1})``, ``1 <= k <= (N-1)//2``,
    with ``c = (xi_1 - xi_0)/(xi_2 - xi_1)`` and ``delta = c xi_1 - xi_0``.
    The inequality ``(c^2 + delta^2 - 1)/(2 delta c) < xi_2`` holds iff the
    value is negative.  Computed from endpoint offsets ``t = 1 + xi``, in
    which the expression reads ``2s + s^2 - 2 delta c t_2`` with
    ``s = c t_1 - t_0``, and divided by ``2 delta c t_2``.
    """
    n = _check_order(order, low=3)
    eta = lgl_grid(n).angles
    t = 2.0 * np.sin(0.5 * eta) ** 2
    kmax = (n - 1) // 2
    k = np.arange(1, kmax + 1)
    t0, t1, t2 = t[k - 1], t[k], t[k + 1]
    h = lgl_grid(n).lengths
    c = h[k - 1] / h[k]
    s = c * t1 - t0
    delta = (1.0 - c) + s
    return (2.0 * s + s * s - 2.0 * delta * c * t2) / (2.0 * delta * c * t2)


def check_convexity_condition(order: int) -> CheckResult:
    v = convexity_values(order)
    info = {"max_scaled_value": float(v.max()) if v.size else -1.0}
    bad = np.nonzero(v >= 0.0)[0]
    if bad.size:
        info["k"] = int(bad[0]) + 1
        return CheckResult(False, info, details=info)
    return CheckResult(True, details=info)
