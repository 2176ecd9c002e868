import numpy as np
import pytest

from lgl_dyadic import RangeError, bessel_j1_zeros, limit_gap, qhat
from lgl_dyadic.asymptotics import QHAT_MAX_K, scaled_angle_gap

import mp_oracle

# published values of qhat_k, k = 1..10
QHAT_TABLE = [
    2.352305866930589,
    1.571700087758225,
    1.363668985974650,
    1.266674201821978,
    1.210528759973443,
    1.173914021641693,
    1.148148599944429,
    1.129032489668108,
    1.114285842810397,
    1.102564178478225,
]


def test_zeros_match_mpmath():
    zeros = bessel_j1_zeros().zeros
    assert zeros[0] == 0.0
    ref = mp_oracle.j1_zeros(len(zeros) - 1)
    for z, r in zip(zeros[1:], ref):
        assert z == float(r)


@pytest.mark.parametrize("k", range(1, 11))
def test_qhat_table(k):
    assert qhat(k) == pytest.approx(QHAT_TABLE[k - 1], abs=1e-12)


def test_qhat_strictly_decreasing():
    q = [qhat(k) for k in range(1, QHAT_MAX_K + 1)]
    assert all(a > b for a, b in zip(q, q[1:]))


def test_qhat_one_is_squared_zero_ratio_minus_one():
    j = bessel_j1_zeros().zeros
    assert qhat(1) == pytest.approx((j[2] / j[1]) ** 2 - 1, rel=1e-15)


@pytest.mark.parametrize("k", [0, 11, -2])
def test_qhat_range(k):
    with pytest.raises(RangeError):
        qhat(k)


def test_limit_gap_shrinks():
    orders = [100, 200, 400, 800, 1600]
    for k in (1, 2):
        gaps = [limit_gap(n, k) for n in orders]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_limit_gap_at_2000():
    assert limit_gap(2000, 1) < 5e-6
    assert limit_gap(2000, 2) < 5e-6


def test_scaled_angle_gap_shrinks():
    gaps = [scaled_angle_gap(n) for n in (250, 500, 1000, 2000)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 5e-3
    assert np.isclose(gaps[0] / gaps[1], 2.0, rtol=0.05)


def test_limit_gap_range():
    with pytest.raises(RangeError):
        limit_gap(5, 5)
    with pytest.raises(RangeError):
        scaled_angle_gap(3, 3)


def _j0_j1(x):
    """Ascending series of J_0 and J_1 (fine in double precision for x < 10)."""
    j0 = j1 = 0.0
    t0, t1 = 1.0, x / 2
    for m in range(60):
        j0 += t0
        j1 += t1
        t0 *= -(x * x / 4) / ((m + 1) * (m + 1))
        t1 *= -(x * x / 4) / ((m + 1) * (m + 2))
    return j0, j1


@pytest.mark.parametrize("k, lo, hi", [(1, 3.5, 4.2), (2, 6.8, 7.3)])
def test_first_zeros_by_series_newton(k, lo, hi):
    x = 0.5 * (lo + hi)
    for _ in range(50):
        j0, j1 = _j0_j1(x)
        step = j1 / (j0 - j1 / x)
        x = min(max(x - step, lo), hi)
        if abs(step) < 1e-15:
            break
    assert x == pytest.approx(bessel_j1_zeros().zeros[k], abs=1e-12)
