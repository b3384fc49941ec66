"""Grid box counting and box-dimension estimation.

The grid is anchored at the ambient box's lower corner with cells of side
delta.  Conventions, chosen so counts of grid-aligned covers are exact:

* an interval starting on a grid boundary j belongs to cell j;
* an interval ending on a grid boundary j stops in cell j - 1;
* a degenerate point sitting on a boundary counts toward the smaller cell
  (clamped at 0);
* coordinates within 1e-9 cells of a boundary are snapped onto it first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .geometry import AmbientBox
from .model import DEFAULT_BUDGET, Rifs, cylinder_cover, resolution_depth
from .sequences import OmegaSeq

SNAP_TOL = 1e-9


def _snap(q: np.ndarray) -> np.ndarray:
    r = np.round(q)
    return np.where(np.abs(q - r) <= SNAP_TOL, r, q)


def _axis_cells(n_cells: int, lo: float, a: np.ndarray, b: np.ndarray,
                delta: float) -> tuple[np.ndarray, np.ndarray]:
    s = _snap((a - lo) / delta)
    e = _snap((b - lo) / delta)
    js = np.floor(s).astype(np.int64)
    e_floor = np.floor(e).astype(np.int64)
    on_edge = e == e_floor
    je = np.where(on_edge, e_floor - 1, e_floor)
    degen = je < js
    shrunk = np.maximum(je, 0)
    js = np.where(degen, shrunk, js)
    je = np.where(degen, shrunk, je)
    return np.clip(js, 0, n_cells - 1), np.clip(je, 0, n_cells - 1)


def _grid_shape(ambient: AmbientBox, delta: float) -> tuple[int, ...]:
    shape = []
    for lo, hi in zip(ambient.lo, ambient.hi):
        q = float(_snap(np.asarray((hi - lo) / delta)))
        shape.append(max(1, int(math.ceil(q))))
    return tuple(shape)


def count_boxes(items: np.ndarray, delta: float, ambient: AmbientBox) -> int:
    """Number of grid cells meeting the items (boxes (n,dim,2) or points
    (n,dim)), under the boundary conventions above."""
    if delta <= 0.0:
        raise UsageError("delta must be > 0")
    arr = np.asarray(items, dtype=float)
    if arr.ndim == 2:
        arr = np.stack([arr, arr], axis=-1)
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[1] != ambient.dim:
        raise UsageError("items must be (n, dim, 2) boxes or (n, dim) points")
    if arr.shape[0] == 0:
        raise UsageError("cannot count an empty family")

    shape = _grid_shape(ambient, delta)
    dim = ambient.dim
    js = np.empty((arr.shape[0], dim), dtype=np.int64)
    je = np.empty_like(js)
    for ax in range(dim):
        js[:, ax], je[:, ax] = _axis_cells(
            shape[ax], ambient.lo[ax], arr[:, ax, 0], arr[:, ax, 1], delta)

    strides = np.ones(dim, dtype=np.int64)
    for ax in range(dim - 2, -1, -1):
        strides[ax] = strides[ax + 1] * shape[ax + 1]

    simple = (je == js).all(axis=1)
    linear = [(js[simple] * strides).sum(axis=1)]
    for i in np.nonzero(~simple)[0]:
        ranges = [range(int(js[i, ax]), int(je[i, ax]) + 1) for ax in range(dim)]
        cells = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        linear.append((cells * strides).sum(axis=1))
    return int(np.unique(np.concatenate(linear)).size)


@dataclass(frozen=True)
class BoxCountTable:
    """Rows of (delta, count) with strictly decreasing deltas and counts that
    never drop as the grid refines."""

    rows: tuple[tuple[float, int], ...]
    source: str

    def __post_init__(self) -> None:
        if not self.rows:
            raise UsageError("a box-count table needs at least one row")
        deltas = [d for d, _ in self.rows]
        counts = [c for _, c in self.rows]
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise UsageError("deltas must be strictly decreasing")
        if any(c < 1 for c in counts):
            raise UsageError("counts must be positive")
        if any(b < a for a, b in zip(counts, counts[1:])):
            raise UsageError("counts may not drop as delta shrinks")

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(d for d, _ in self.rows)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.rows)


@dataclass(frozen=True)
class BoxDimEstimate:
    """Per-rung exponents log N / log(1/delta), the least-squares slope over
    the trailing window, and the min/max exponent over that window."""

    lower_est: float
    upper_est: float
    slope: float
    exponents: tuple[float, ...]
    depths: tuple[int, ...]
    window: tuple[int, int]


def estimate_box_dims(rifs: Rifs, omega: OmegaSeq, deltas,
                      budget: int = DEFAULT_BUDGET,
                      ) -> tuple[BoxCountTable, BoxDimEstimate]:
    """Count cylinder boxes on each grid of the ladder, then read off the
    dimension two ways: per-rung exponents and a log-log slope."""
    deltas = tuple(float(d) for d in deltas)
    if not deltas:
        raise UsageError("empty delta ladder")
    if any(d >= 1.0 or d <= 0.0 for d in deltas):
        raise UsageError("ladder deltas must lie in (0, 1)")

    covers: dict[int, np.ndarray] = {}
    rows = []
    depths = []
    for delta in deltas:
        # resolve each rung to cylinders no larger than a quarter cell
        depth = resolution_depth(rifs, omega, delta / 4.0, budget)
        if depth not in covers:
            covers[depth] = cylinder_cover(rifs, omega, depth, budget).boxes
        rows.append((delta, count_boxes(covers[depth], delta, rifs.ambient)))
        depths.append(depth)

    table = BoxCountTable(tuple(rows), source="cylinder cover")
    exps = tuple(math.log(c) / -math.log(d) for d, c in rows)
    n = len(rows)
    start = n // 2 if n >= 4 else 0
    window = (start, n)
    tail = exps[start:]
    if n - start >= 2:
        xs = [-math.log(d) for d, _ in rows[start:]]
        ys = [math.log(c) for _, c in rows[start:]]
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = exps[-1]
    est = BoxDimEstimate(min(tail), max(tail), slope, exps,
                         tuple(depths), window)
    return table, est
