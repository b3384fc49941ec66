"""Dimension formulas: Hutchinson, its randomized form, grid self-affine
carpets and their random mixtures, extremal similarity bounds, and the
per-level growth factors used to witness measure-killing conditions.

Every root is found by bisection on a strictly decreasing function over the
bracket [0, 64] with 200 iterations; no derivative methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import (GeometryDomainError, RifsError, UnsupportedShapeError,
                     UsageError)

if TYPE_CHECKING:  # pragma: no cover
    from .model import Rifs

BRACKET = (0.0, 64.0)
BISECT_ITERS = 200
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class DimensionReport:
    value: float
    equation: str
    residual: float
    bracket: tuple[float, float]


def check_weights(weights: Sequence[float], n: int | None = None) -> tuple[float, ...]:
    w = tuple(float(x) for x in weights)
    if n is not None and len(w) != n:
        raise UsageError(f"expected {n} weights, got {len(w)}")
    if any(x < 0.0 for x in w):
        raise UsageError("weights must be non-negative")
    if abs(sum(w) - 1.0) > 1e-12:
        raise UsageError(f"weights sum {sum(w):.17g}, expected 1")
    return w


def _bisect_decreasing(f, equation: str) -> DimensionReport:
    lo, hi = BRACKET
    flo = f(lo)
    fhi = f(hi)
    if flo < 0.0:
        # only possible for pathological inputs; the defining sums start >= 1
        raise RifsError(f"{equation}: function already negative at s=0")
    if fhi > 0.0:
        raise GeometryDomainError(
            f"{equation}: no root in [0, 64]; f(64) = {fhi:.3g} > 0")
    if flo == 0.0:
        return DimensionReport(0.0, equation, 0.0, BRACKET)
    a, b = lo, hi
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if f(mid) >= 0.0:
            a = mid
        else:
            b = mid
    root = 0.5 * (a + b)
    residual = f(root)
    if abs(residual) > RESIDUAL_TOL:
        raise RifsError(f"{equation}: residual {residual:.3g} out of tolerance")
    return DimensionReport(root, equation, residual, BRACKET)


def similarity_dimension(ratios: Sequence[float]) -> DimensionReport:
    """Solve sum(r_i^s) = 1 for the list of similarity ratios."""
    rs = [float(r) for r in ratios]
    if not rs:
        raise UsageError("need at least one ratio")
    for r in rs:
        if not (0.0 < r < 1.0):
            raise GeometryDomainError(f"ratio {r} outside (0, 1)")

    def f(s: float) -> float:
        return math.fsum(r ** s for r in rs) - 1.0

    return _bisect_decreasing(f, "hutchinson")


def randomized_similarity_dimension(ratio_lists: Sequence[Sequence[float]],
                                    weights: Sequence[float]) -> DimensionReport:
    """Solve prod_i (sum_j r_ij^s)^{p_i} = 1, as the root of the log form.

    Systems with weight zero are dropped before taking logs.
    """
    lists = [[float(r) for r in rs] for rs in ratio_lists]
    w = check_weights(weights, len(lists))
    for rs in lists:
        if not rs:
            raise UsageError("every system needs at least one ratio")
        for r in rs:
            if not (0.0 < r < 1.0):
                raise GeometryDomainError(f"ratio {r} outside (0, 1)")
    active = [(p, rs) for p, rs in zip(w, lists) if p > 0.0]

    def g(s: float) -> float:
        return math.fsum(p * math.log(math.fsum(r ** s for r in rs))
                         for p, rs in active)

    return _bisect_decreasing(g, "hutchinson_randomized")


@dataclass(frozen=True)
class CarpetSpec:
    """Grid carpet: m columns, n rows (m <= n), and the chosen cells.

    Cells are (column, row) pairs with 0-based indices, columns along x.
    Duplicates are representable so separation checks can reject them;
    column counts use distinct rows.
    """

    m: int
    n: int
    chosen: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not (1 <= self.m <= self.n):
            raise UsageError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if not self.chosen:
            raise UsageError("carpet needs at least one chosen cell")
        for col, row in self.chosen:
            if not (0 <= col < self.m and 0 <= row < self.n):
                raise UsageError(f"cell ({col}, {row}) outside {self.m}x{self.n} grid")

    @property
    def column_counts(self) -> tuple[int, ...]:
        cols = [set() for _ in range(self.m)]
        for col, row in self.chosen:
            cols[col].add(row)
        return tuple(len(c) for c in cols)

    def distinct_cells(self) -> bool:
        return len(set(self.chosen)) == len(self.chosen)


def bedford_mcmullen_dimension(carpet: CarpetSpec) -> float:
    """(1/log m) * log(sum_j C_j^(log m / log n)); empty columns contribute 0."""
    m, n = carpet.m, carpet.n
    counts = carpet.column_counts
    if m == 1 and n == 1:
        raise GeometryDomainError("1x1 grid has no contraction")
    if m == 1:
        # continuous limit of the formula: a single column of n-adic cells
        return math.log(counts[0]) / math.log(n)
    e = math.log(m) / math.log(n)
    total = math.fsum(c ** e for c in counts if c > 0)
    return math.log(total) / math.log(m)


def random_carpet_dimension(carpets: Sequence[CarpetSpec],
                            weights: Sequence[float]) -> float:
    """Weighted carpet formula via nu_1 = prod m_i^p_i, nu_2 = prod n_i^p_i."""
    w = check_weights(weights, len(carpets))
    active = [(p, c) for p, c in zip(w, carpets) if p > 0.0]
    log_nu1 = math.fsum(p * math.log(c.m) for p, c in active)
    log_nu2 = math.fsum(p * math.log(c.n) for p, c in active)
    if log_nu1 == 0.0:
        raise GeometryDomainError("nu_1 = 1: no horizontal contraction in mix")
    theta = log_nu1 / log_nu2
    acc = 0.0
    for p, c in active:
        total = math.fsum(cc ** theta for cc in c.column_counts if cc > 0)
        acc += p * math.log(total)
    return acc / log_nu1


def carpet_dimension_curve(carpets: Sequence[CarpetSpec],
                           weights_grid: Sequence[Sequence[float]]
                           ) -> list[tuple[tuple[float, ...], float]]:
    """One (weights, dimension) row per grid vector."""
    if not weights_grid:
        raise UsageError("weights grid must be non-empty")
    return [(tuple(float(x) for x in w), random_carpet_dimension(carpets, w))
            for w in weights_grid]


_PRESCAN = 257
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_carpet_dimension(carpets: Sequence[CarpetSpec],
                              tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section minimum of p -> dim over (p, 1-p) mixes of two carpets.

    A 257-point pre-scan certifies unimodality first; a flat curve returns the
    grid midpoint.
    """
    if len(carpets) != 2:
        raise UsageError("minimizer handles exactly two carpets")

    def val(p: float) -> float:
        return random_carpet_dimension(carpets, (p, 1.0 - p))

    ps = [i / (_PRESCAN - 1) for i in range(_PRESCAN)]
    vs = [val(p) for p in ps]
    lo = min(vs)
    hi = max(vs)
    if hi - lo <= 1e-12:
        mid = ps[(_PRESCAN - 1) // 2]
        return mid, val(mid)
    k = vs.index(lo)
    wiggle = 1e-13
    descent = all(vs[i] >= vs[i + 1] - wiggle for i in range(k))
    ascent = all(vs[i] <= vs[i + 1] + wiggle for i in range(k, _PRESCAN - 1))
    if not (descent and ascent):
        raise UnsupportedShapeError(
            f"dimension curve not unimodal on pre-scan; grid argmin p = {ps[k]:.6f}")
    a = ps[max(0, k - 1)]
    b = ps[min(_PRESCAN - 1, k + 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = val(c), val(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = val(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = val(d)
    p_star = 0.5 * (a + b)
    return p_star, val(p_star)


def extremal_ss_bounds(rifs: "Rifs") -> tuple[float, float, tuple[float, ...]]:
    """Per-system similarity dimensions and their min/max.

    Only meaningful for similarity maps; anything else is refused.
    """
    ss = []
    for system in rifs.systems:
        ratios = []
        for m in system.maps:
            if m.kind != "similarity":
                raise UnsupportedShapeError(
                    f"system {system.label!r} contains a non-similarity map")
            ratios.append(m.lip_hi)
        ss.append(similarity_dimension(ratios).value)
    return min(ss), max(ss), tuple(ss)


@dataclass(frozen=True)
class GrowthReport:
    h: float
    p: float
    factors_minus: tuple[float, ...]
    factors_plus: tuple[float, ...]
    lip_minus_witness: int | None
    lip_plus_witness: int | None


def check_growth_conditions(rifs: "Rifs", h: float, p: float) -> GrowthReport:
    """Per-system level factors along constant sequences.

    Phi-_i(h) = sum_j lip_lo^h and Phi+_i(p) = sum_j lip_hi^p telescope the
    level-l sums, so Phi-_i(h) > 1 makes the lower sum blow up along (i,i,...)
    and Phi+_i(p) < 1 makes the upper sum vanish.  Witness indices are
    1-based; factors exactly 1 witness nothing.
    """
    if h < 0.0 or p < 0.0:
        raise UsageError("exponents must be >= 0")
    fm = tuple(math.fsum(m.lip_lo ** h for m in sys.maps)
               for sys in rifs.systems)
    fp = tuple(math.fsum(m.lip_hi ** p for m in sys.maps)
               for sys in rifs.systems)
    wm = next((i + 1 for i, f in enumerate(fm) if f > 1.0), None)
    wp = next((i + 1 for i, f in enumerate(fp) if f < 1.0), None)
    return GrowthReport(h, p, fm, fp, wm, wp)


def check_uosc_grid(carpets: Sequence[CarpetSpec]) -> bool:
    """Distinct grid cells have disjoint interiors inside the open square."""
    return all(c.distinct_cells() for c in carpets)
