"""Ordered grids on an interval and the predicates defined on them.

A grid is a strictly increasing node set ``x_0 = a < ... < x_N = b``.  Its
partition consists of the closed cells ``[x_j, x_{j+1}]``; two cells
"overlap" when their intersection is non-empty, so cells that only touch at
an endpoint count as overlapping.  All checks compare lengths with an
additive tolerance of ``1e-12 * (b - a)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError

LENGTH_TOL = 1e-12
SYMMETRY_TOL = 1e-13


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a boolean predicate.

    ``witness`` locates a violation; ``details`` carries realized margins or
    constants that are worth reporting either way.
    """

    holds: bool
    witness: dict[str, Any] | None = None
    details: dict[str, Any] | None = None

    def __bool__(self):
        return bool(self.holds)


class Grid:
    """Strictly increasing nodes on ``[a, b]`` with cached cell lengths.

    Parameters
    ----------
    nodes : array_like
        Node coordinates; the first and last must equal ``a`` and ``b``.
    interval : (float, float), optional
        The base interval.  Defaults to ``(nodes[0], nodes[-1])``.
    lengths : array_like, optional
        Cell lengths, when they are known more accurately than the node
        differences (the LGL and CGL grids compute them from angles).
    """

    def __init__(self, nodes, interval=None, *, lengths=None):
        x = np.array(nodes, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise DomainError("a grid needs at least two nodes")
        if interval is None:
            interval = (x[0], x[-1])
        a, b = float(interval[0]), float(interval[1])
        if not a < b:
            raise DomainError(f"empty interval ({a}, {b})")
        if x[0] != a or x[-1] != b:
            raise DomainError("grid endpoints must equal the interval endpoints")
        if np.any(np.diff(x) <= 0.0):
            raise DomainError("grid nodes must be strictly increasing")
        x.flags.writeable = False
        if lengths is None:
            h = np.diff(x)
        else:
            h = np.array(lengths, dtype=float)
            if h.shape != (x.size - 1,) or np.any(h <= 0.0):
                raise DomainError("lengths must be positive, one per cell")
        h.flags.writeable = False
        self.nodes = x
        self.interval = (a, b)
        self.lengths = h

    @property
    def n_cells(self) -> int:
        return self.lengths.size

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]

    def __len__(self):
        return self.nodes.size

    def cell(self, j: int) -> tuple[float, float]:
        return float(self.nodes[j]), float(self.nodes[j + 1])

    def cells_meeting(self, left: float, right: float) -> tuple[int, int]:
        """Index range ``lo..hi`` (inclusive) of cells meeting ``[left, right]``."""
        x = self.nodes
        lo = max(int(np.searchsorted(x, left, side="left")) - 1, 0)
        hi = min(int(np.searchsorted(x, right, side="right")) - 1, self.n_cells - 1)
        return lo, hi

    def __repr__(self):
        return f"{type(self).__name__}(n_cells={self.n_cells}, interval={self.interval})"


def partition(grid: Grid) -> list[tuple[float, float]]:
    """Closed cells ``[x_j, x_{j+1}]`` of the grid, left to right."""
    x = grid.nodes
    return [(float(x[j]), float(x[j + 1])) for j in range(x.size - 1)]


def check_quasi_uniform(grid: Grid) -> float:
    """Smallest ``C`` with ``1/C <= |D'|/|D| <= C`` for all adjacent cells."""
    h = grid.lengths
    if h.size < 2:
        return 1.0
    r = h[1:] / h[:-1]
    return float(max(r.max(), (1.0 / r).max()))


@dataclass(frozen=True)
class EquivalenceReport:
    """Extremal ratios ``|D1|/|D2|`` over overlapping cell pairs.

    Witnesses are ``(index in g1, index in g2)`` pairs.
    """

    min_ratio: float
    max_ratio: float
    witness_min: tuple[int, int]
    witness_max: tuple[int, int]
    pairs: int = field(default=0, compare=False)

    def holds_for(self, A: float, B: float, rtol: float = 0.0) -> bool:
        return self.min_ratio >= A * (1.0 - rtol) and self.max_ratio <= B * (1.0 + rtol)


def overlapping_pairs(g1: Grid, g2: Grid) -> tuple[np.ndarray, np.ndarray]:
    """All ``(i, j)`` with cell ``i`` of ``g1`` meeting cell ``j`` of ``g2``.

    Runs in linear time after merging the two node sets.
    """
    if g1.interval != g2.interval:
        raise DomainError(f"grids live on different intervals {g1.interval} vs {g2.interval}")
    x, y = g1.nodes, g2.nodes
    z = np.union1d(x, y)
    # every elementary piece [z_k, z_{k+1}] lies in exactly one cell of each grid
    i = np.searchsorted(x, z[:-1], side="right") - 1
    j = np.searchsorted(y, z[:-1], side="right") - 1
    # cells touching at a shared interior node
    common = np.intersect1d(x[1:-1], y[1:-1], assume_unique=True)
    ci = np.searchsorted(x, common)
    cj = np.searchsorted(y, common)
    i = np.concatenate([i, ci - 1, ci])
    j = np.concatenate([j, cj, cj - 1])
    return i, j


def check_equivalence(g1: Grid, g2: Grid) -> EquivalenceReport:
    """Extremal length ratios between overlapping cells of two grids.

    Ties between equal ratios go to the pair with the smallest ``(i, j)``.
    """
    i, j = overlapping_pairs(g1, g2)
    order = np.lexsort((j, i))
    i, j = i[order], j[order]
    ratio = g1.lengths[i] / g2.lengths[j]
    kmin = int(np.argmin(ratio))
    kmax = int(np.argmax(ratio))
    return EquivalenceReport(
        min_ratio=float(ratio[kmin]),
        max_ratio=float(ratio[kmax]),
        witness_min=(int(i[kmin]), int(j[kmin])),
        witness_max=(int(i[kmax]), int(j[kmax])),
        pairs=int(ratio.size),
    )


def stretch(cell, interval=(-1.0, 1.0)) -> tuple[float, float]:
    """Image of ``cell`` under ``x -> 2x - a``; the cell must lie in the left half."""
    a, b = float(interval[0]), float(interval[1])
    left, right = float(cell[0]), float(cell[1])
    if left < a or right > 0.5 * (a + b) or left > right:
        raise DomainError(f"cell {cell} is not contained in the left half of {interval}")
    return 2.0 * left - a, 2.0 * right - a


def is_symmetric(grid: Grid, tol: float = SYMMETRY_TOL) -> bool:
    a, b = grid.interval
    x = grid.nodes
    return bool(np.all(np.abs(x + x[::-1] - (a + b)) <= tol * (b - a)))


def check_str(grid: Grid, strict: bool = True) -> CheckResult:
    """Check the stretching property on the first quarter of the interval.

    For each cell ``I`` inside the first quarter, every cell meeting the
    stretched cell ``L(I)`` must be at most ``|L(I)|`` long.

    Parameters
    ----------
    grid : Grid
        A symmetric grid.
    strict : bool
        If true (default), the quarter is the half-open ``(a, a + (b-a)/4]``
        and the boundary cell starting at ``a`` is skipped.  If false, that
        boundary cell is checked as well.

    Returns
    -------
    CheckResult
        On failure the witness holds the offending ``I`` and ``I'``.
    """
    if not is_symmetric(grid):
        raise DomainError("check_str requires a symmetric grid")
    a, b = grid.interval
    tol = LENGTH_TOL * (b - a)
    quarter = a + 0.25 * (b - a)
    x, h = grid.nodes, grid.lengths
    start = 1 if strict else 0
    for k in range(start, grid.n_cells):
        if x[k + 1] > quarter:
            break
        stretched = 2.0 * h[k]
        lo, hi = grid.cells_meeting(2.0 * x[k] - a, 2.0 * x[k + 1] - a)
        m = lo + int(np.argmax(h[lo : hi + 1]))
        if h[m] > stretched + tol:
            return CheckResult(
                False,
                {
                    "I_index": k,
                    "I": list(grid.cell(k)),
                    "L_I": [float(2.0 * x[k] - a), float(2.0 * x[k + 1] - a)],
                    "I_prime_index": m,
                    "I_prime": list(grid.cell(m)),
                    "I_prime_length": float(h[m]),
                    "L_I_length": float(stretched),
                },
            )
    return CheckResult(True)


def check_monotone_symmetric(grid: Grid) -> CheckResult:
    """Symmetric about the midpoint with non-decreasing cells in the left half."""
    if not is_symmetric(grid):
        x = grid.nodes
        a, b = grid.interval
        k = int(np.argmax(np.abs(x + x[::-1] - (a + b))))
        return CheckResult(False, {"reason": "asymmetric", "node_index": k})
    a, b = grid.interval
    mid = 0.5 * (a + b)
    tol = LENGTH_TOL * (b - a)
    x, h = grid.nodes, grid.lengths
    n_left = int(np.searchsorted(x, mid + tol, side="right")) - 1  # cells with right end <= mid
    bad = np.nonzero(h[: n_left - 1] > h[1:n_left] + tol)[0]
    if bad.size:
        k = int(bad[0])
        return CheckResult(
            False,
            {"reason": "decreasing", "cell_index": k, "lengths": [float(h[k]), float(h[k + 1])]},
        )
    return CheckResult(True)
