import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgl_dyadic import RangeError, lgl_angle_bounds, lgl_grid, lgl_length_bounds, lgl_quotients
from lgl_dyadic.lgl import (
    check_angle_bounds,
    check_convexity_condition,
    check_displacement,
    check_length_bounds,
    check_mq,
    convexity_values,
)

import mp_oracle


@pytest.mark.parametrize(
    "order, expected",
    [
        (1, [-1.0, 1.0]),
        (2, [-1.0, 0.0, 1.0]),
        (3, [-1.0, -1 / math.sqrt(5), 1 / math.sqrt(5), 1.0]),
        (4, [-1.0, -math.sqrt(3 / 7), 0.0, math.sqrt(3 / 7), 1.0]),
    ],
)
def test_small_orders_closed_form(order, expected):
    assert np.allclose(lgl_grid(order).nodes, expected, atol=1e-15, rtol=0)


@pytest.mark.parametrize("order", [5, 6, 17, 50, 201, 500, 1001])
def test_angles_match_mpmath(order):
    # the boundary angles are the hard ones; the first 40 keep the oracle cheap
    count = min((order - 1) // 2, 40)
    ref = np.array([float(t) for t in mp_oracle.lgl_angles(order, count)])
    eta = lgl_grid(order).angles[1 : ref.size + 1]
    assert np.all(np.abs(eta - ref) <= 2.5e-16 * np.maximum(ref, 1.0))


@pytest.mark.parametrize("order", [5, 50, 500, 1001])
def test_quotients_match_mpmath(order):
    ref = [float(q) for q in mp_oracle.lgl_quotients(order, 2)]
    q = lgl_quotients(lgl_grid(order))
    assert q[0] == pytest.approx(ref[0], rel=2e-15)
    assert q[1] == pytest.approx(ref[1], rel=2e-15)


@pytest.mark.parametrize("order", [1, 2, 7, 64, 333])
def test_symmetry_and_lengths(order):
    g = lgl_grid(order)
    assert np.array_equal(g.nodes, -g.nodes[::-1])
    assert np.array_equal(g.lengths, g.lengths[::-1])
    assert g.lengths.sum() == pytest.approx(2.0, rel=1e-14)
    assert np.allclose(g.lengths, np.diff(g.nodes), rtol=1e-12, atol=0)


@settings(max_examples=25, deadline=None)
@given(
    order=st.integers(1, 300),
    a=st.floats(-1e3, 1e3),
    width=st.floats(1e-3, 1e3),
)
def test_affine_map(order, a, width):
    b = a + width
    g = lgl_grid(order, (a, b))
    ref = lgl_grid(order)
    assert g.nodes[0] == a and g.nodes[-1] == b
    assert np.allclose(g.lengths, ref.lengths * ((b - a) / 2), rtol=1e-13, atol=0)
    assert np.all(np.diff(g.nodes) > 0)


def test_grid_is_read_only():
    g = lgl_grid(10)
    with pytest.raises(ValueError):
        g.nodes[3] = 0.0


@pytest.mark.parametrize("order", [0, -3, 2001])
def test_order_out_of_range(order):
    with pytest.raises(RangeError):
        lgl_grid(order)


def test_order_must_be_integer():
    with pytest.raises(TypeError):
        lgl_grid(3.0)


def test_quotients_need_two_cells():
    with pytest.raises(RangeError):
        lgl_quotients(lgl_grid(1))


@pytest.mark.parametrize("order", [2, 3, 10, 99, 250])
def test_angle_bounds_contain_angles(order):
    ab = lgl_angle_bounds(order)
    eta = lgl_grid(order).angles[ab.angle_index]
    assert np.all(ab.angle_lower <= eta + 1e-15)
    assert np.all(eta <= ab.angle_upper + 1e-15)


def test_angle_bounds_values():
    ab = lgl_angle_bounds(7)
    assert list(ab.angle_index) == [1, 2, 3]
    assert np.allclose(ab.angle_lower, np.pi * np.array([1, 2, 3]) / 7)
    assert np.allclose(ab.angle_upper, np.pi * np.array([3, 5, 7]) / 15)


@pytest.mark.parametrize("order", [3, 4, 5, 6, 11, 12, 100, 101])
def test_length_bounds(order):
    assert check_length_bounds(order)
    lb = lgl_length_bounds(order)
    assert np.all(lb.length_lower <= lb.length_upper)
    assert "boundary" in lb.length_case


def test_length_bounds_need_order_three():
    with pytest.raises(RangeError):
        lgl_length_bounds(2)


@pytest.mark.parametrize("order", [2, 3, 8, 9, 120, 499])
def test_checks_hold(order):
    assert check_angle_bounds(order)
    assert check_mq(order)
    if order >= 3:
        assert check_convexity_condition(order)


def test_mq_reports_margins():
    r = check_mq(40)
    assert r.holds
    assert r.details["min_decrease_in_k"] > 0
    assert r.details["increase_in_N_k1"] > 0


@pytest.mark.parametrize("n, m", [(2, 3), (5, 6), (10, 20), (33, 100), (150, 151)])
def test_displacement(n, m):
    assert check_displacement(n, m)


def test_displacement_needs_larger_order():
    with pytest.raises(RangeError):
        check_displacement(10, 10)


def test_convexity_values_are_negative():
    v = convexity_values(60)
    assert v.size == 29
    assert np.all(v < 0)


def test_solver_is_deterministic_and_fast_converging():
    from lgl_dyadic.lgl import _solve_left_angles

    theta1, iters = _solve_left_angles(777)
    theta2, _ = _solve_left_angles(777)
    assert np.array_equal(theta1, theta2)
    assert np.array_equal(theta1, lgl_grid(777).angles[1 : theta1.size + 1])
    assert iters.max() <= 20
