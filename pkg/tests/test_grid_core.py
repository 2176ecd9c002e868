import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgl_dyadic import (
    DomainError,
    Grid,
    check_equivalence,
    check_monotone_symmetric,
    check_quasi_uniform,
    check_str,
    lgl_grid,
    partition,
    stretch,
)
from lgl_dyadic.grid_core import overlapping_pairs


def test_partition_and_lengths():
    g = Grid([0.0, 0.5, 2.0])
    assert partition(g) == [(0.0, 0.5), (0.5, 2.0)]
    assert list(g.lengths) == [0.5, 1.5]
    assert len(g) == 3 and g.n_cells == 2 and g.width == 2.0


@pytest.mark.parametrize(
    "nodes, interval",
    [
        ([0.0], None),
        ([0.0, 0.0, 1.0], None),
        ([0.0, 2.0, 1.0], None),
        ([0.0, 1.0], (0.0, 2.0)),
        ([1.0, 2.0], (1.0, 1.0)),
    ],
)
def test_invalid_grids(nodes, interval):
    with pytest.raises(DomainError):
        Grid(nodes, interval)


def test_quasi_uniform_constant():
    assert check_quasi_uniform(Grid([0.0, 1.0])) == 1.0
    assert check_quasi_uniform(Grid([0.0, 1.0, 4.0, 5.0])) == 3.0
    assert check_quasi_uniform(lgl_grid(2)) == 1.0


def _brute_equivalence(g1, g2):
    ratios = []
    for (i, c1), (j, c2) in itertools.product(enumerate(partition(g1)), enumerate(partition(g2))):
        if max(c1[0], c2[0]) <= min(c1[1], c2[1]):
            ratios.append((g1.lengths[i] / g2.lengths[j], i, j))
    return min(ratios)[0], max(ratios)[0], {(i, j) for _, i, j in ratios}


grids = st.lists(st.integers(1, 63), min_size=0, max_size=12, unique=True).map(
    lambda xs: Grid([0.0] + sorted(x / 64 for x in xs) + [1.0])
)


@settings(max_examples=80, deadline=None)
@given(g1=grids, g2=grids)
def test_equivalence_matches_brute_force(g1, g2):
    r = check_equivalence(g1, g2)
    lo, hi, pairs = _brute_equivalence(g1, g2)
    assert r.min_ratio == lo and r.max_ratio == hi
    i, j = overlapping_pairs(g1, g2)
    assert set(zip(i.tolist(), j.tolist())) == pairs


def test_equivalence_counts_touching_cells():
    g1 = Grid([0.0, 0.5, 1.0])
    g2 = Grid([0.0, 0.25, 0.5, 1.0])
    r = check_equivalence(g1, g2)
    # [0, 0.5] touches [0.5, 1] in g2 (ratio 1); [0.5, 1] touches [0.25, 0.5] (ratio 2)
    assert r.min_ratio == 1.0 and r.max_ratio == 2.0
    assert r.witness_min == (0, 2)  # ties go to the smallest index pair
    assert r.witness_max == (0, 0)
    assert r.pairs == 5
    assert r.holds_for(1.0, 2.0) and not r.holds_for(1.0, 1.9)


def test_equivalence_needs_common_interval():
    with pytest.raises(DomainError):
        check_equivalence(Grid([0.0, 1.0]), Grid([0.0, 2.0]))


def test_stretch():
    assert stretch((-1.0, -0.5)) == (-1.0, 0.0)
    assert stretch((0.25, 0.5), (0.0, 2.0)) == (0.5, 1.0)
    with pytest.raises(DomainError):
        stretch((-0.2, 0.1))


def test_str_strict_and_include():
    # the boundary cell [0, 1] stretches to [0, 2] and meets the longer cell [1, 4];
    # [1, 4] stretches to [2, 8], longer than both cells it meets
    g = Grid([0, 1, 4, 8, 12, 15, 16])
    assert check_str(g, strict=True)
    r = check_str(g, strict=False)
    assert not r.holds
    assert r.witness["I_index"] == 0 and r.witness["I_prime_index"] == 1


@pytest.mark.parametrize("order", [2, 3, 4])
def test_str_small_lgl_both_readings(order):
    assert check_str(lgl_grid(order), strict=True)
    assert check_str(lgl_grid(order), strict=False)


@pytest.mark.parametrize("order", [5, 20, 100])
def test_str_lgl_boundary_cell(order):
    assert check_str(lgl_grid(order), strict=True)
    r = check_str(lgl_grid(order), strict=False)
    assert not r.holds and r.witness["I_index"] == 0


def test_str_requires_symmetry():
    with pytest.raises(DomainError):
        check_str(Grid([0.0, 0.1, 1.0]))


def test_monotone_symmetric():
    assert check_monotone_symmetric(lgl_grid(30))
    r = check_monotone_symmetric(Grid([0.0, 0.3, 0.4, 0.6, 0.7, 1.0]))
    assert not r.holds and r.witness["reason"] == "decreasing"
    r = check_monotone_symmetric(Grid([0.0, 0.1, 1.0]))
    assert not r.holds and r.witness["reason"] == "asymmetric"


def test_cells_meeting():
    g = Grid([0.0, 1.0, 2.0, 3.0])
    assert g.cells_meeting(1.0, 2.0) == (0, 2)
    assert g.cells_meeting(1.2, 1.8) == (1, 1)
    assert g.cells_meeting(0.0, 0.5) == (0, 0)
