"""Legendre polynomials and their first two derivatives.

Two evaluation paths are provided.  :func:`legendre_eval` is the plain
three-term recurrence in ``x``.  :func:`lobatto_residual` evaluates
``L_N'`` in the angular variable ``theta`` (``y = cos(theta)``) with a
recurrence written for the deviations ``1 - P_n(y)``, so that the distance
``t = 1 - y`` from the endpoint enters exactly.  The second path is the one
used by the LGL root solver: it keeps full relative accuracy in the tiny
boundary intervals of high-order grids.
"""
from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .errors import DomainError, RangeError

MAX_DEGREE = 2001


class LegendreEval(NamedTuple):
    value: float | np.ndarray
    derivative: float | np.ndarray
    second_derivative: float | np.ndarray


def _check_degree(degree):
    if not isinstance(degree, (int, np.integer)) or isinstance(degree, bool):
        raise TypeError(f"degree must be an integer, got {degree!r}")
    if degree < 0 or degree > MAX_DEGREE:
        raise RangeError(f"degree {degree} outside supported range 0..{MAX_DEGREE}")


def legendre_eval(degree: int, x) -> LegendreEval:
    """Evaluate ``L_N``, ``L_N'`` and ``L_N''`` at ``x``.

    Parameters
    ----------
    degree : int
        Polynomial degree ``N``, ``0 <= N <= 2001``.
    x : float or array_like
        Evaluation points in ``[-1, 1]``.

    Returns
    -------
    LegendreEval
        Scalars for scalar input, arrays otherwise.  Values at ``x = +-1``
        are the exact closed forms.

    Raises
    ------
    RangeError
        If the degree is outside the supported range.
    DomainError
        If any point lies outside ``[-1, 1]``.
    """
    _check_degree(degree)
    n = int(degree)
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(np.abs(xa) > 1.0):
        raise DomainError("legendre_eval: x must lie in [-1, 1]")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)

    p_prev = np.ones_like(xa)
    dp_prev = np.zeros_like(xa)
    if n == 0:
        p, dp = p_prev, dp_prev
    else:
        p, dp = xa.copy(), np.ones_like(xa)
        for k in range(1, n):
            p_next = ((2 * k + 1) * xa * p - k * p_prev) / (k + 1)
            dp_next = dp_prev + (2 * k + 1) * p
            p_prev, p = p, p_next
            dp_prev, dp = dp, dp_next

    nn1 = n * (n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        d2p = (2.0 * xa * dp - nn1 * p) / (1.0 - xa * xa)

    # exact endpoint values; the ODE form above is 0/0 there
    sign_left = -1.0 if n % 2 else 1.0
    d2_end = (n - 1) * n * (n + 1) * (n + 2) / 8.0
    right = xa == 1.0
    left = xa == -1.0
    p[right], dp[right], d2p[right] = 1.0, nn1 / 2.0, d2_end
    p[left], dp[left], d2p[left] = sign_left, -sign_left * nn1 / 2.0, sign_left * d2_end

    if scalar:
        return LegendreEval(float(p[0]), float(dp[0]), float(d2p[0]))
    return LegendreEval(p, dp, d2p)


@numba.njit(cache=True)
def _residual_kernel(n, theta):
    # deviations r_k = 1 - P_k(y) and d_k = k(k+1)/2 - P_k'(y), y = 1 - t;
    # both recurrences take t as an exact input
    half = np.sin(0.5 * theta)
    t = 2.0 * half * half
    r_prev, r = 0.0, t
    d_prev, d = 0.0, 0.0
    for k in range(1, n):
        r_next = ((2 * k + 1) * (t + r - t * r) - k * r_prev) / (k + 1)
        d_next = d_prev + (2 * k + 1) * r
        r_prev, r = r, r_next
        d_prev, d = d, d_next
    p = 1.0 - r
    dp = 0.5 * n * (n + 1) - d
    y = np.cos(theta)
    s = np.sin(theta)
    dtheta = -(2.0 * y * dp - n * (n + 1) * p) / s
    return dp, dtheta, p


@numba.njit(cache=True)
def _residual_batch(n, theta):
    # _residual_kernel for many angles at once; the inner loop runs over
    # independent angles so it vectorizes
    m = theta.size
    t = np.empty(m)
    r_prev = np.zeros(m)
    r = np.empty(m)
    d_prev = np.zeros(m)
    d = np.zeros(m)
    for j in range(m):
        h = np.sin(0.5 * theta[j])
        t[j] = 2.0 * h * h
        r[j] = t[j]
    for k in range(1, n):
        a = (2.0 * k + 1.0) / (k + 1.0)
        b = k / (k + 1.0)
        c = 2.0 * k + 1.0
        for j in range(m):
            rn = a * (t[j] + r[j] - t[j] * r[j]) - b * r_prev[j]
            dn = d_prev[j] + c * r[j]
            r_prev[j] = r[j]
            r[j] = rn
            d_prev[j] = d[j]
            d[j] = dn
    f = np.empty(m)
    df = np.empty(m)
    nn1 = float(n) * (n + 1)
    for j in range(m):
        p = 1.0 - r[j]
        dp = 0.5 * nn1 - d[j]
        f[j] = dp
        df[j] = -(2.0 * np.cos(theta[j]) * dp - nn1 * p) / np.sin(theta[j])
    return f, df


# --- compensated (double-double) arithmetic -------------------------------
# Error-free transformations on pairs of doubles (hi, lo).  Used only for the
# final polishing of LGL angles, where the plain recurrence loses about
# N^2 * eps of accuracy.

_SPLITTER = 134217729.0  # 2^27 + 1


@numba.njit(cache=True, inline="always")
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@numba.njit(cache=True, inline="always")
def _two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@numba.njit(cache=True, inline="always")
def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


@numba.njit(cache=True, inline="always")
def _dd_mul_d(ah, al, b):
    p, e = _two_prod(ah, b)
    e += al * b
    return _two_sum(p, e)


@numba.njit(cache=True, inline="always")
def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


@numba.njit(cache=True, inline="always")
def _dd_div_d(ah, al, b):
    q1 = ah / b
    ph, pl = _two_prod(q1, b)
    q2 = ((ah - ph) - pl + al) / b
    return _two_sum(q1, q2)


@numba.njit(cache=True)
def _residual_kernel_dd(n, theta):
    # same recurrences as _residual_kernel, carried in double-double
    half = np.sin(0.5 * theta)
    th, tl = _two_prod(half, half)
    th, tl = 2.0 * th, 2.0 * tl
    wh, wl = _dd_add(1.0, 0.0, -th, -tl)  # 1 - t
    rph, rpl = 0.0, 0.0
    rh, rl = th, tl
    dph, dpl = 0.0, 0.0
    dh, dl = 0.0, 0.0
    for k in range(1, n):
        c = 2.0 * k + 1.0
        # t + r (1 - t)
        uh, ul = _dd_mul(rh, rl, wh, wl)
        uh, ul = _dd_add(uh, ul, th, tl)
        uh, ul = _dd_mul_d(uh, ul, c)
        vh, vl = _dd_mul_d(rph, rpl, -float(k))
        uh, ul = _dd_add(uh, ul, vh, vl)
        nh, nl = _dd_div_d(uh, ul, k + 1.0)
        eh, el = _dd_mul_d(rh, rl, c)
        dnh, dnl = _dd_add(dph, dpl, eh, el)
        rph, rpl, rh, rl = rh, rl, nh, nl
        dph, dpl, dh, dl = dh, dl, dnh, dnl
    fh, fl = _dd_add(0.5 * n * (n + 1), 0.0, -dh, -dl)
    return fh + fl


@numba.njit(cache=True)
def _residual_batch_dd(n, theta):
    # _residual_kernel_dd for many angles at once
    m = theta.size
    th = np.empty(m)
    tl = np.empty(m)
    wh = np.empty(m)
    wl = np.empty(m)
    rph = np.zeros(m)
    rpl = np.zeros(m)
    rh = np.empty(m)
    rl = np.empty(m)
    dph = np.zeros(m)
    dpl = np.zeros(m)
    dh = np.zeros(m)
    dl = np.zeros(m)
    for j in range(m):
        half = np.sin(0.5 * theta[j])
        a, b = _two_prod(half, half)
        th[j], tl[j] = 2.0 * a, 2.0 * b
        wh[j], wl[j] = _dd_add(1.0, 0.0, -th[j], -tl[j])
        rh[j], rl[j] = th[j], tl[j]
    for k in range(1, n):
        c = 2.0 * k + 1.0
        fk = float(k)
        k1 = k + 1.0
        for j in range(m):
            uh, ul = _dd_mul(rh[j], rl[j], wh[j], wl[j])
            uh, ul = _dd_add(uh, ul, th[j], tl[j])
            uh, ul = _dd_mul_d(uh, ul, c)
            vh, vl = _dd_mul_d(rph[j], rpl[j], -fk)
            uh, ul = _dd_add(uh, ul, vh, vl)
            nh, nl = _dd_div_d(uh, ul, k1)
            eh, el = _dd_mul_d(rh[j], rl[j], c)
            dnh, dnl = _dd_add(dph[j], dpl[j], eh, el)
            rph[j], rpl[j] = rh[j], rl[j]
            rh[j], rl[j] = nh, nl
            dph[j], dpl[j] = dh[j], dl[j]
            dh[j], dl[j] = dnh, dnl
    f = np.empty(m)
    for j in range(m):
        fh, fl = _dd_add(0.5 * n * (n + 1), 0.0, -dh[j], -dl[j])
        f[j] = fh + fl
    return f


def lobatto_residual(degree: int, theta: float):
    """Return ``(L_N'(cos theta), d/dtheta L_N'(cos theta), L_N(cos theta))``.

    Accurate relative to the local scale even when ``theta`` is of order
    ``1/N``, because ``1 - cos(theta)`` is never formed by subtraction.
    Intended for ``0 < theta < pi``.
    """
    _check_degree(degree)
    if degree < 1:
        raise RangeError("lobatto_residual needs degree >= 1")
    if not 0.0 < theta < np.pi:
        raise DomainError("theta must lie in (0, pi)")
    dp, dth, p = _residual_kernel(int(degree), float(theta))
    return float(dp), float(dth), float(p)
