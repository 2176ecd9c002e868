import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgl_dyadic import DomainError, RangeError, legendre_eval
from lgl_dyadic.orthopoly import lobatto_residual

import mp_oracle


@pytest.mark.parametrize(
    "degree, x, expected",
    [
        (0, 0.3, (1.0, 0.0, 0.0)),
        (1, 0.3, (0.3, 1.0, 0.0)),
        (2, 0.5, (-0.125, 1.5, 3.0)),
        (3, 0.5, (-0.4375, 0.375, 7.5)),
    ],
)
def test_low_degree_closed_forms(degree, x, expected):
    r = legendre_eval(degree, x)
    assert r.value == pytest.approx(expected[0], abs=1e-15)
    assert r.derivative == pytest.approx(expected[1], abs=1e-15)
    assert r.second_derivative == pytest.approx(expected[2], abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 101, 2000])
def test_endpoint_values(n):
    right = legendre_eval(n, 1.0)
    left = legendre_eval(n, -1.0)
    s = (-1) ** n
    assert right.value == 1.0
    assert right.derivative == n * (n + 1) / 2
    assert right.second_derivative == (n - 1) * n * (n + 1) * (n + 2) / 8
    assert left.value == s
    assert left.derivative == -s * n * (n + 1) / 2
    assert left.second_derivative == s * (n - 1) * n * (n + 1) * (n + 2) / 8


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 60), x=st.floats(-0.999, 0.999))
def test_matches_mpmath(n, x):
    r = legendre_eval(n, x)
    with mp.workdps(30):
        p, d1, d2 = mp_oracle.legendre_with_derivatives(n, x)
    scale = 1.0 + n * n
    assert abs(r.value - float(p)) <= 1e-13 * scale
    assert abs(r.derivative - float(d1)) <= 1e-13 * scale**1.5
    assert abs(r.second_derivative - float(d2)) <= 1e-12 * scale**2.5


def test_array_input_shape():
    x = np.linspace(-1, 1, 7)
    r = legendre_eval(4, x)
    assert r.value.shape == (7,)
    assert np.allclose(r.value, [float(mp.legendre(4, v)) for v in x], atol=1e-15)


@pytest.mark.parametrize("x", [1.0000001, -1.5, math.inf])
def test_domain_error(x):
    with pytest.raises(DomainError):
        legendre_eval(3, x)


@pytest.mark.parametrize("n", [-1, 2002])
def test_range_error(n):
    with pytest.raises(RangeError):
        legendre_eval(n, 0.0)


def test_type_error():
    with pytest.raises(TypeError):
        legendre_eval(2.0, 0.0)


@pytest.mark.parametrize("n", [3, 8, 40, 300])
def test_lobatto_residual_vanishes_at_nodes(n):
    eta = [float(t) for t in mp_oracle.lgl_angles(n)]
    f = np.array([lobatto_residual(n, t)[0] for t in eta])
    # relative to the size of L_N' near the boundary, N(N+1)/2
    assert np.all(np.abs(f) <= 1e-12 * n * (n + 1) / 2)


@pytest.mark.parametrize("n, theta", [(9, 0.7), (50, 0.01), (400, 2.5)])
def test_lobatto_residual_agrees_with_recurrence(n, theta):
    dp, dtheta, p = lobatto_residual(n, theta)
    r = legendre_eval(n, math.cos(theta))
    assert dp == pytest.approx(r.derivative, rel=1e-11, abs=1e-11 * n * n)
    assert p == pytest.approx(r.value, rel=1e-11, abs=1e-12)
    assert dtheta == pytest.approx(-math.sin(theta) * r.second_derivative, rel=1e-10, abs=1e-10 * n**3)


@pytest.mark.parametrize("theta", [0.0, math.pi, -0.1])
def test_lobatto_residual_domain(theta):
    with pytest.raises(DomainError):
        lobatto_residual(5, theta)
