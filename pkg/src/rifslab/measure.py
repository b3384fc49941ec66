"""Gauge functions and measure-theoretic bounds.

A gauge maps diameters to weights, vanishing at zero and non-decreasing.
Cover sums against a gauge give upper bounds in the Hausdorff direction;
greedy packings give lower bounds in the packing direction.  A cylinder
measure spreads unit mass over the cylinder tree and brackets ball masses to
produce two-sided dimension-print style constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GeometryDomainError, ResourceError, UsageError
from .dimension import CarpetSpec, similarity_dimension
from .model import (DEFAULT_BUDGET, CylinderCover, Rifs, cylinder_cover,
                    resolution_depth)
from .sequences import OmegaSeq


class Gauge:
    """Base class; subclasses fill in `_eval` over positive arrays."""

    label = "gauge"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0.0):
            raise UsageError("gauges take non-negative diameters")
        safe = np.where(arr > 0.0, arr, 1.0)
        out = np.where(arr > 0.0, self._eval(safe), 0.0)
        if np.isscalar(t) or arr.ndim == 0:
            return float(out)
        return out


class PowerGauge(Gauge):
    """t -> t**s for a positive exponent."""

    def __init__(self, s: float) -> None:
        if s <= 0.0:
            raise UsageError("power gauge exponent must be > 0")
        self.s = float(s)
        self.label = f"power[{self.s:g}]"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        return t ** self.s


class PowerLogGauge(Gauge):
    """t -> t**s * log(1/t) on (0, t0], continued linearly above t0.

    The raw formula stops increasing near t = 1; the cap point t0 = e^(-2/s)
    sits safely inside the increasing range and the continuation keeps the
    gauge monotone with a matching slope t0**(s-1).
    """

    def __init__(self, s: float) -> None:
        if s <= 0.0:
            raise UsageError("power-log gauge exponent must be > 0")
        self.s = float(s)
        self.t0 = math.exp(-2.0 / self.s)
        self.slope = self.t0 ** (self.s - 1.0)
        self.base = self.t0 ** self.s * (2.0 / self.s)
        self.label = f"power_log[{self.s:g}]"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        inside = t ** self.s * np.log(1.0 / t)
        return np.where(t <= self.t0,
                        inside,
                        self.base + self.slope * (t - self.t0))


class TableGauge(Gauge):
    """Piecewise-linear gauge through tabulated (t, value) knots.

    Below the first knot the gauge runs linearly through the origin; above
    the last knot the final segment's slope continues.
    """

    def __init__(self, knots) -> None:
        pts = sorted((float(t), float(g)) for t, g in knots)
        if not pts:
            raise UsageError("table gauge needs at least one knot")
        self.kt = np.array([t for t, _ in pts])
        self.kg = np.array([g for _, g in pts])
        if self.kt[0] <= 0.0:
            raise UsageError("table gauge knots must have t > 0")
        if np.any(np.diff(self.kt) <= 0.0):
            raise UsageError("table gauge knots must be strictly increasing")
        if self.kg[0] < 0.0 or np.any(np.diff(self.kg) < 0.0):
            raise UsageError("table gauge values must be non-decreasing")
        if self.kt.size >= 2:
            self.tail_slope = float(
                (self.kg[-1] - self.kg[-2]) / (self.kt[-1] - self.kt[-2]))
        else:
            self.tail_slope = float(self.kg[0] / self.kt[0])
        self.label = f"table[{self.kt.size} knots]"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        out = np.interp(t, self.kt, self.kg)
        below = t < self.kt[0]
        above = t > self.kt[-1]
        out = np.where(below, self.kg[0] * t / self.kt[0], out)
        out = np.where(above,
                       self.kg[-1] + self.tail_slope * (t - self.kt[-1]), out)
        return out


@dataclass(frozen=True)
class DoublingReport:
    """Envelope for G(c*t)/G(t) over scales up to the given diameter."""

    c: float
    d_minus: float
    d_plus: float
    gauge_label: str
    samples: int


def doubling_constants(g: Gauge, c: float, diameter: float,
                       samples: int = 10_000) -> DoublingReport:
    if not (0.0 < c <= 1.0):
        raise UsageError("scale factor c must lie in (0, 1]")
    if diameter <= 0.0:
        raise UsageError("diameter must be > 0")
    if c == 1.0:
        return DoublingReport(c, 1.0, 1.0, g.label, 0)
    if isinstance(g, PowerGauge):
        exact = c ** g.s
        return DoublingReport(c, exact, exact, g.label, 0)
    t = np.geomspace(1e-9 * diameter, diameter, samples)
    ratios = np.asarray(g(c * t)) / np.asarray(g(t))
    lo = float(ratios.min())
    hi = float(ratios.max())
    if isinstance(g, PowerLogGauge):
        # ratio tends to c**s as t -> 0; fold in the analytic limit
        limit = c ** g.s
        lo = min(lo, limit)
        hi = max(hi, limit)
    return DoublingReport(c, lo, hi, g.label, samples)


def hausdorff_upper_bound(cover, g: Gauge) -> float:
    """Sum of gauge values over piece diameters.

    Accepts a CylinderCover, an (n, dim, 2) box array, or a flat array of
    diameters.
    """
    if isinstance(cover, CylinderCover):
        diams = cover.diameters()
    else:
        arr = np.asarray(cover, dtype=float)
        if arr.ndim == 3:
            diams = np.linalg.norm(arr[:, :, 1] - arr[:, :, 0], axis=1)
        elif arr.ndim == 1:
            diams = arr
        else:
            raise UsageError("expected a cover, boxes, or diameters")
    if diams.size == 0:
        raise UsageError("empty cover")
    return float(np.asarray(g(diams)).sum())


@dataclass(frozen=True)
class PackingReport:
    count: int
    delta: float
    gauge_value: float


def packing_lower_bound(points, g: Gauge, delta: float) -> PackingReport:
    """Greedy delta-separated subset, seeded at the lexicographically
    smallest point, growing by farthest-first insertion while the farthest
    remaining point is strictly more than delta away.  The reported value is
    count * G(delta)."""
    if delta <= 0.0:
        raise UsageError("delta must be > 0")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise UsageError("cannot pack an empty point set")
    order = np.lexsort(pts.T[::-1])
    p = pts[order]
    d2 = ((p - p[0]) ** 2).sum(axis=1)
    count = 1
    thresh = delta * delta
    while True:
        i = int(np.argmax(d2))
        if not d2[i] > thresh:
            break
        count += 1
        d2 = np.minimum(d2, ((p - p[i]) ** 2).sum(axis=1))
    return PackingReport(count, delta, count * float(g(delta)))


@dataclass(frozen=True)
class CylinderMeasure:
    """Unit mass split across the cylinder tree.

    Each system i carries an exponent s_i; a map with upper Lipschitz bound
    r gets mass fraction r**s_i among its siblings.  With the default
    exponents (the root of sum r_j**s = 1 per system) the fractions of every
    system sum to one, so each level's masses sum to one.
    """

    rifs: Rifs
    omega: OmegaSeq
    exponents: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.exponents:
            roots = tuple(
                similarity_dimension([m.lip_hi for m in sys_.maps]).value
                for sys_ in self.rifs.systems)
            object.__setattr__(self, "exponents", roots)
        if len(self.exponents) != len(self.rifs.systems):
            raise UsageError("one exponent per system is required")

    def factors(self, level_system: int) -> np.ndarray:
        sys_ = self.rifs.systems[level_system - 1]
        s = self.exponents[level_system - 1]
        return np.array([m.lip_hi ** s for m in sys_.maps])


def cylinder_mass(cm: CylinderMeasure, word) -> float:
    """Mass of the cylinder at a 0-based index word along the measure's
    sequence."""
    mass = 1.0
    for level, idx in enumerate(word, start=1):
        fac = cm.factors(cm.omega.entry(level))
        if not (0 <= idx < fac.size):
            raise UsageError(
                f"word entry {idx} out of range at level {level}")
        mass *= float(fac[idx])
    return mass


def level_masses(cm: CylinderMeasure, depth: int,
                 budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Masses of all depth-k cylinders, aligned with cylinder_cover order."""
    if depth < 1:
        raise UsageError("depth must be >= 1")
    masses = np.ones(1)
    total = 1
    for level in range(depth, 0, -1):
        fac = cm.factors(cm.omega.entry(level))
        total *= fac.size
        if total > budget:
            raise ResourceError(
                f"mass table of size {total} exceeds budget", count=total)
        masses = np.concatenate([f * masses for f in fac])
    return masses


@dataclass(frozen=True)
class MdpReport:
    """Empirical mass-distribution bracket over the probed balls.

    lambda_sup bounds mass(B(x, r)) / r**s from above via cylinders meeting
    the ball; lambda_inf bounds it from below via cylinders inside the ball.
    They translate to a Hausdorff lower bound 1/lambda_sup and a packing
    upper bound 2**s / lambda_inf.
    """

    s: float
    depth: int
    lambda_sup: float
    lambda_inf: float
    h_lower: float
    p_upper: float
    rows: tuple[tuple[tuple[float, ...], float, float, float], ...]


_INNER_SLACK = 1.0 + 1e-12


def mdp_bounds(cm: CylinderMeasure, s: float, radii, sample_points,
               budget: int = DEFAULT_BUDGET) -> MdpReport:
    if s <= 0.0:
        raise UsageError("exponent s must be > 0")
    radii = tuple(float(r) for r in radii)
    if not radii or any(r <= 0.0 for r in radii):
        raise UsageError("radii must be positive")
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if pts.shape[1] != cm.rifs.ambient.dim:
        raise UsageError("sample points do not match the ambient dimension")

    depth = resolution_depth(cm.rifs, cm.omega, min(radii) / 4.0, budget)
    cover = cylinder_cover(cm.rifs, cm.omega, depth, budget)
    masses = level_masses(cm, depth, budget)
    lo = cover.boxes[:, :, 0]
    hi = cover.boxes[:, :, 1]

    rows = []
    lam_sup = 0.0
    lam_inf = math.inf
    for x in pts:
        gap = np.maximum(np.maximum(lo - x, x - hi), 0.0)
        near2 = (gap ** 2).sum(axis=1)
        far = np.maximum(np.abs(x - lo), np.abs(hi - x))
        far2 = (far ** 2).sum(axis=1)
        for r in radii:
            outer = float(masses[near2 <= r * r].sum())
            rin = r * _INNER_SLACK
            inner = float(masses[far2 <= rin * rin].sum())
            scale = r ** s
            lam_sup = max(lam_sup, outer / scale)
            lam_inf = min(lam_inf, inner / scale)
            rows.append((tuple(float(v) for v in x), r, outer, inner))

    if lam_sup <= 0.0:
        raise GeometryDomainError(
            "no cylinder mass met any probed ball; bracket is empty")
    h_lower = 1.0 / lam_sup
    p_upper = math.inf if lam_inf <= 0.0 else 2.0 ** s / lam_inf
    return MdpReport(s, depth, lam_sup, lam_inf, h_lower, p_upper,
                     tuple(rows))


def check_msc_grid(carpets: Sequence[CarpetSpec], omega: OmegaSeq,
                   depth: int) -> bool:
    """True when sibling cylinders along ``omega`` stay interior-disjoint
    down to ``depth``.

    Grid cells make this exact: a level-k cylinder occupies one cell of the
    product grid, so positive-area overlap happens only when two words land
    on the same (column, row) pair.  Shared edges are allowed.
    """
    if depth < 0:
        raise UsageError("depth must be non-negative")
    cells: set[tuple[int, int]] = {(0, 0)}
    for level in range(1, depth + 1):
        idx = omega.entry(level)
        if not (1 <= idx <= len(carpets)):
            raise UsageError(f"sequence entry {idx} has no carpet")
        carpet = carpets[idx - 1]
        refined: set[tuple[int, int]] = set()
        for col, row in cells:
            for c, r in carpet.chosen:
                child = (col * carpet.m + c, row * carpet.n + r)
                if child in refined:
                    return False
                refined.add(child)
        cells = refined
    return True
