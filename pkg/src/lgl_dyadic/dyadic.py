"""Dyadic grids: exact intervals, midpoint refinement driven by a reference grid.

A dyadic interval is an integer pair ``(level, index)`` standing for
``[a + (b-a) i / 2^j, a + (b-a) (i+1) / 2^j]``.  A dyadic grid is the set of
leaves of a full binary tree rooted at ``[a, b]``.  Nodes are compared as
exact dyadic rationals, so nestedness, gradedness and closedness under
stretching involve no rounding at all.

:func:`dyadic_refine` splits every leaf ``D`` with ``|D| > alpha |D_min|``,
where ``D_min`` is the shortest cell of the reference grid meeting ``D``,
until no such leaf is left.  :func:`nested_dyadic_family` chains it over
the LGL grids of increasing order.
"""
from __future__ import annotations

import bisect
import logging
import math
import random
from collections import deque
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DomainError
from .grid_core import CheckResult, Grid
from .lgl import lgl_grid

logger = logging.getLogger(__name__)

SPLIT_RTOL = 1e-12


class DyadicInterval(NamedTuple):
    level: int
    index: int

    @property
    def parent(self) -> "DyadicInterval":
        if self.level == 0:
            raise DomainError("the root interval has no parent")
        return DyadicInterval(self.level - 1, self.index // 2)

    @property
    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        j, i = self.level + 1, 2 * self.index
        return DyadicInterval(j, i), DyadicInterval(j, i + 1)

    def realize(self, base=(-1.0, 1.0)) -> tuple[float, float]:
        a, b = base
        w = (b - a) * 2.0**-self.level
        return a + self.index * w, a + (self.index + 1) * w

    def length(self, base=(-1.0, 1.0)) -> float:
        return (base[1] - base[0]) * 2.0**-self.level


def node_key(level: int, index: int) -> tuple[int, int]:
    """Reduced form of the dyadic rational ``index / 2**level``."""
    while level > 0 and index % 2 == 0:
        index //= 2
        level -= 1
    return level, index


class DyadicGrid:
    """Leaves of a full binary tree of dyadic intervals on ``base``.

    Parameters
    ----------
    leaves : iterable of (level, index)
        Must tile the base interval exactly; they are sorted left to right.
    base : (float, float)
    """

    def __init__(self, leaves: Iterable, base=(-1.0, 1.0)):
        a, b = float(base[0]), float(base[1])
        if not a < b:
            raise DomainError(f"empty base interval ({a}, {b})")
        items = [DyadicInterval(int(j), int(i)) for j, i in leaves]
        if not items:
            raise DomainError("a dyadic grid needs at least one leaf")
        top = max(d.level for d in items)
        items.sort(key=lambda d: d.index << (top - d.level))
        pos = 0
        for d in items:
            if d.level < 0 or not 0 <= d.index < 2**d.level:
                raise DomainError(f"invalid dyadic interval {tuple(d)}")
            if d.index << (top - d.level) != pos:
                raise DomainError(f"leaves do not tile the base interval at {tuple(d)}")
            pos += 1 << (top - d.level)
        if pos != 1 << top:
            raise DomainError("leaves do not cover the base interval")
        self.base = (a, b)
        self.leaves = tuple(items)

    @classmethod
    def root(cls, base=(-1.0, 1.0)) -> "DyadicGrid":
        return cls([(0, 0)], base)

    @classmethod
    def uniform(cls, level: int, base=(-1.0, 1.0)) -> "DyadicGrid":
        return cls([(level, i) for i in range(2**level)], base)

    def __len__(self):
        return len(self.leaves)

    def __eq__(self, other):
        return isinstance(other, DyadicGrid) and self.base == other.base and self.leaves == other.leaves

    def __hash__(self):
        return hash((self.base, self.leaves))

    def __repr__(self):
        return f"DyadicGrid(n_leaves={len(self.leaves)}, max_level={self.max_level}, base={self.base})"

    @property
    def n_nodes(self) -> int:
        return len(self.leaves) + 1

    @property
    def levels(self) -> np.ndarray:
        return np.array([d.level for d in self.leaves], dtype=int)

    @property
    def max_level(self) -> int:
        return max(d.level for d in self.leaves)

    def node_keys(self) -> list[tuple[int, int]]:
        """Nodes as reduced ``(level, index)`` pairs, left to right."""
        keys = [node_key(d.level, d.index) for d in self.leaves]
        keys.append((0, 1))
        return keys

    def nodes(self) -> np.ndarray:
        a, b = self.base
        x = [a + (b - a) * i * 2.0**-j for j, i in self.node_keys()]
        x[-1] = b
        return np.array(x)

    def lengths(self) -> np.ndarray:
        a, b = self.base
        return (b - a) * np.exp2(-self.levels.astype(float))

    def to_grid(self) -> Grid:
        """The node set as a :class:`Grid`, with exact dyadic cell lengths."""
        return Grid(self.nodes(), self.base, lengths=self.lengths())

    def tree(self) -> set[DyadicInterval]:
        """All tree nodes: the leaves and every ancestor."""
        out = set()
        for d in self.leaves:
            while d not in out:
                out.add(d)
                if d.level == 0:
                    break
                d = d.parent
        return out

    def is_full_tree(self) -> bool:
        t = self.tree()
        leaves = set(self.leaves)
        for d in t:
            if d in leaves:
                continue
            c0, c1 = d.children
            if c0 not in t or c1 not in t:
                return False
        return True

    def to_dict(self) -> dict:
        return {"base": [self.base[0], self.base[1]], "leaves": [[d.level, d.index] for d in self.leaves]}

    @classmethod
    def from_dict(cls, data: dict) -> "DyadicGrid":
        return cls([tuple(x) for x in data["leaves"]], tuple(data["base"]))


class OverlapExtremals(NamedTuple):
    largest: int
    smallest: int


class _CellLookup:
    """Fast scalar queries against a fixed grid (plain lists and bisect)."""

    def __init__(self, g: Grid):
        self.x = g.nodes.tolist()
        self.h = g.lengths.tolist()
        self.last = len(self.h) - 1

    def span(self, left, right):
        lo = max(bisect.bisect_left(self.x, left) - 1, 0)
        hi = min(bisect.bisect_right(self.x, right) - 1, self.last)
        return lo, hi

    def shortest(self, left, right):
        lo, hi = self.span(left, right)
        return min(self.h[lo : hi + 1])


def overlap_extremals(interval: DyadicInterval, g: Grid) -> OverlapExtremals:
    """Indices of the longest and shortest cells of ``g`` meeting ``interval``.

    Cells touching the interval at one point count.  Ties go to the
    leftmost cell.
    """
    left, right = interval.realize(g.interval)
    lo, hi = g.cells_meeting(left, right)
    h = g.lengths[lo : hi + 1]
    return OverlapExtremals(largest=lo + int(np.argmax(h)), smallest=lo + int(np.argmin(h)))


def _should_split(length, shortest, alpha):
    threshold = alpha * shortest
    return length > threshold and length - threshold > SPLIT_RTOL * max(length, threshold)


def dyadic_refine(g: Grid, d0: DyadicGrid, alpha: float, order: str = "fifo", seed=None) -> DyadicGrid:
    """Refine ``d0`` until no leaf is longer than ``alpha`` times its shortest overlapping cell.

    Parameters
    ----------
    g : Grid
        Reference grid on the same interval as ``d0``.
    d0 : DyadicGrid
        Starting grid; only refined, never coarsened.
    alpha : float
        Positive refinement parameter.
    order : {"fifo", "lifo", "random"}
        Worklist discipline.  The result does not depend on it.
    seed : int, optional
        Seed for ``order="random"``.

    Returns
    -------
    DyadicGrid
    """
    if not alpha > 0.0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if tuple(g.interval) != tuple(d0.base):
        raise DomainError(f"grid interval {g.interval} differs from dyadic base {d0.base}")
    a, b = d0.base
    width = b - a
    lookup = _CellLookup(g)
    rng = random.Random(seed) if order == "random" else None
    if order not in ("fifo", "lifo", "random"):
        raise ValueError(f"unknown worklist order {order!r}")

    work = list(d0.leaves) if order != "fifo" else deque(d0.leaves)
    if rng is not None:
        rng.shuffle(work)
    done = []
    while work:
        if order == "fifo":
            d = work.popleft()
        elif order == "lifo":
            d = work.pop()
        else:
            k = rng.randrange(len(work))
            work[k], work[-1] = work[-1], work[k]
            d = work.pop()
        j, i = d
        step = width * 2.0**-j
        left = a + i * step
        shortest = lookup.shortest(left, left + step)
        if _should_split(step, shortest, alpha):
            work.extend(d.children)
        else:
            done.append(d)
    return DyadicGrid(done, d0.base)


def max_level_bound(g: Grid, alpha: float) -> int:
    """``J = ceil(log2((b - a) / (alpha h)))`` with ``h`` the shortest cell of ``g``, floored at 0.

    Evaluated as the smallest ``j >= 0`` for which a level-``j`` interval
    passes the split test against ``h``, so ties are decided exactly as in
    :func:`dyadic_refine`.  Refining from ``{a, b}`` reaches this level.
    """
    h = float(g.lengths.min())
    j = 0
    while _should_split(g.width * 2.0**-j, h, alpha):
        j += 1
    return j


def nested_dyadic_family(max_order: int, alpha: float, interval=(-1.0, 1.0)) -> list[DyadicGrid]:
    """``[D_1, ..., D_N]`` with ``D_1`` from ``{a, b}`` and ``D_{j+1}`` refining ``D_j``."""
    if max_order < 1:
        raise DomainError("max_order must be at least 1")
    family = []
    d = DyadicGrid.root(interval)
    for n in range(1, max_order + 1):
        d = dyadic_refine(lgl_grid(n, interval), d, alpha)
        family.append(d)
    return family


def standalone_dyadic(order: int, alpha: float, interval=(-1.0, 1.0)) -> DyadicGrid:
    """Refinement of ``{a, b}`` against the LGL grid of one order."""
    return dyadic_refine(lgl_grid(order, interval), DyadicGrid.root(interval), alpha)


def check_graded(d: DyadicGrid) -> CheckResult:
    """Neighbouring leaves differ by at most one level."""
    lv = d.levels
    if lv.size < 2:
        return CheckResult(True)
    bad = np.nonzero(np.abs(np.diff(lv)) > 1)[0]
    if bad.size:
        k = int(bad[0])
        return CheckResult(
            False,
            {"leaf_index": k, "leaves": [list(d.leaves[k]), list(d.leaves[k + 1])]},
        )
    return CheckResult(True)


def check_nested(d1: DyadicGrid, d2: DyadicGrid) -> CheckResult:
    """Every node of ``d1`` is a node of ``d2`` (exact)."""
    if d1.base != d2.base:
        raise DomainError("dyadic grids on different base intervals")
    finer = set(d2.node_keys())
    for key in d1.node_keys():
        if key not in finer:
            a, b = d1.base
            value = a + (b - a) * key[1] * 2.0**-key[0]
            return CheckResult(False, {"missing_node": list(key), "missing_node_value": value})
    return CheckResult(True)


def check_closed_under_stretching(d: DyadicGrid) -> CheckResult:
    """``x -> 2x - a`` maps every node in the left half onto a node."""
    keys = d.node_keys()
    present = set(keys)
    for j, i in keys:
        if 2 * i > 2**j:  # right of the midpoint
            continue
        image = (0, 0) if j == 0 else node_key(j - 1, i)
        if image not in present:
            return CheckResult(False, {"node": [j, i], "image": list(image)})
    return CheckResult(True)
