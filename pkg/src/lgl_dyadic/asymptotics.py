"""Zeros of the Bessel function J_1 and the limits of the LGL quotients.

As ``N`` grows, ``N eta_k`` tends to ``j_{1,k}`` and the quotient
``q_k = |D_k| / |D_{k-1}|`` tends to

    qhat_k = (j_{1,k+1}^2 - j_{1,k}^2) / (j_{1,k}^2 - j_{1,k-1}^2).
"""
from __future__ import annotations

from typing import NamedTuple

from .errors import RangeError
from .lgl import lgl_grid, lgl_quotients

# j_{1,0} .. j_{1,11}, with j_{1,0} = 0 counted as the first nonnegative zero
_J1_ZEROS = (
    0.0,
    3.8317059702075123156,
    7.0155866698156187535,
    10.173468135062722077,
    13.323691936314223032,
    16.470630050877632813,
    19.615858510468242021,
    22.760084380592771898,
    25.903672087618382625,
    29.046828534916855067,
    32.189679910974403627,
    35.332307550083865103,
)

QHAT_MAX_K = len(_J1_ZEROS) - 2


class BesselZeros(NamedTuple):
    zeros: tuple[float, ...]


def bessel_j1_zeros() -> BesselZeros:
    """The nonnegative zeros ``j_{1,0} = 0 < j_{1,1} < ... < j_{1,11}``."""
    return BesselZeros(_J1_ZEROS)


def qhat(k: int) -> float:
    """Limit of ``q_k^N`` as ``N -> inf``, for ``1 <= k <= 10``."""
    if not 1 <= k <= QHAT_MAX_K:
        raise RangeError(f"qhat needs 1 <= k <= {QHAT_MAX_K}, got {k}")
    j = _J1_ZEROS
    return (j[k + 1] ** 2 - j[k] ** 2) / (j[k] ** 2 - j[k - 1] ** 2)


def limit_gap(order: int, k: int) -> float:
    """``|q_k^N - qhat_k|`` for the LGL grid of the given order."""
    if not 1 <= k <= order - 1:
        raise RangeError(f"quotient index {k} outside 1..{order - 1}")
    q = lgl_quotients(lgl_grid(order))
    return abs(float(q[k - 1]) - qhat(k))


def scaled_angle_gap(order: int, k: int = 1) -> float:
    """``|N eta_k - j_{1,k}|``."""
    if not 1 <= k <= min(order - 1, len(_J1_ZEROS) - 1):
        raise RangeError(f"angle index {k} outside the available range")
    return abs(order * float(lgl_grid(order).angles[k]) - _J1_ZEROS[k])
