"""Ambient boxes and the three families of contracting self-maps.

Everything downstream (cylinder covers, dimension solvers, measures) sits on
top of three map kinds: exact similarities, 2x2 affine maps, and a closed
catalog of nonlinear maps given by explicit formulas.  Maps carry declared
bi-Lipschitz bounds; compositions track the product bounds, which are upper
bounds for Lip+ and lower bounds for Lip-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryDomainError, UsageError

CONTAIN_TOL = 1e-9


@dataclass(frozen=True)
class AmbientBox:
    """Axis-aligned box in R^1 or R^2 with the Euclidean metric."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi) or len(self.lo) not in (1, 2):
            raise UsageError("ambient box must be 1- or 2-dimensional")
        for a, (l, h) in enumerate(zip(self.lo, self.hi)):
            if not l < h:
                raise UsageError(f"ambient box axis {a}: lo {l} must be < hi {h}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def diameter(self) -> float:
        return math.hypot(*(h - l for l, h in zip(self.lo, self.hi)))

    @property
    def center(self) -> tuple[float, ...]:
        return tuple((l + h) / 2.0 for l, h in zip(self.lo, self.hi))

    def corners(self) -> np.ndarray:
        if self.dim == 1:
            return np.array([[self.lo[0]], [self.hi[0]]])
        (x0, y0), (x1, y1) = self.lo, self.hi
        return np.array([[x0, y0], [x0, y1], [x1, y0], [x1, y1]])

    def as_array(self) -> np.ndarray:
        """Box as an (dim, 2) array of [lo, hi] per axis."""
        return np.stack([np.asarray(self.lo), np.asarray(self.hi)], axis=1)

    def contains(self, pts: np.ndarray, tol: float = CONTAIN_TOL) -> bool:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        lo = np.asarray(self.lo) - tol
        hi = np.asarray(self.hi) + tol
        return bool(np.all(pts >= lo) and np.all(pts <= hi))


def unit_box(dim: int) -> AmbientBox:
    return AmbientBox((0.0,) * dim, (1.0,) * dim)


def _affine_image_boxes(linear: np.ndarray, shift: np.ndarray,
                        boxes: np.ndarray) -> np.ndarray:
    """Exact bounding boxes of affine images of axis-aligned boxes.

    boxes has shape (n, dim, 2); the image bounding box is the min/max of the
    transformed corners, which is exact for affine maps.
    """
    n, dim, _ = boxes.shape
    if dim == 1:
        ends = boxes[:, 0, :] * linear[0, 0] + shift[0]  # (n, 2)
        out = np.empty_like(boxes)
        out[:, 0, 0] = np.minimum(ends[:, 0], ends[:, 1])
        out[:, 0, 1] = np.maximum(ends[:, 0], ends[:, 1])
        return out
    # 2D: four corners per box
    corners = np.empty((n, 4, 2))
    corners[:, 0] = boxes[:, :, 0]
    corners[:, 1, 0] = boxes[:, 0, 0]
    corners[:, 1, 1] = boxes[:, 1, 1]
    corners[:, 2, 0] = boxes[:, 0, 1]
    corners[:, 2, 1] = boxes[:, 1, 0]
    corners[:, 3] = boxes[:, :, 1]
    moved = corners @ linear.T + shift
    out = np.empty_like(boxes)
    out[:, :, 0] = moved.min(axis=1)
    out[:, :, 1] = moved.max(axis=1)
    return out


class ContractionMap:
    """Base for all map kinds.  Subclasses fill in the vectorized paths."""

    kind: str = "abstract"
    dim: int
    lip_lo: float
    lip_hi: float

    def _check_lips(self) -> None:
        if not (0.0 < self.lip_lo <= self.lip_hi < 1.0):
            raise UsageError(
                f"declared Lipschitz bounds ({self.lip_lo}, {self.lip_hi}) "
                "must satisfy 0 < lo <= hi < 1")

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def image_box_array(self, boxes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind


class Similarity(ContractionMap):
    """Exact similarity: x -> ratio * O x + translation, O orthogonal.

    In one dimension O is +-1 (reflect flag).  In two dimensions O is a
    rotation optionally composed with a reflection of the x axis.  Distances
    scale by exactly `ratio`, so lip_lo = lip_hi = ratio.
    """

    kind = "similarity"

    def __init__(self, ratio: float, translation: tuple[float, ...],
                 rotation_deg: float = 0.0, reflect: bool = False):
        self.ratio = float(ratio)
        self.translation = tuple(float(t) for t in translation)
        self.rotation_deg = float(rotation_deg)
        self.reflect = bool(reflect)
        self.dim = len(self.translation)
        if self.dim not in (1, 2):
            raise UsageError("similarity must be 1- or 2-dimensional")
        if self.dim == 1 and rotation_deg not in (0.0,):
            raise UsageError("rotation is undefined in one dimension")
        self.lip_lo = self.lip_hi = self.ratio
        self._check_lips()
        if self.dim == 1:
            self._linear = np.array([[-self.ratio if reflect else self.ratio]])
        else:
            th = math.radians(self.rotation_deg)
            rot = np.array([[math.cos(th), -math.sin(th)],
                            [math.sin(th), math.cos(th)]])
            if reflect:
                rot = rot @ np.array([[-1.0, 0.0], [0.0, 1.0]])
            self._linear = self.ratio * rot
        self._shift = np.asarray(self.translation)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        if self.dim == 1:
            return pts * self._linear[0, 0] + self._shift
        return pts @ self._linear.T + self._shift

    def image_box_array(self, boxes: np.ndarray) -> np.ndarray:
        return _affine_image_boxes(self._linear, self._shift, boxes)

    def describe(self) -> str:
        return f"similarity(ratio={self.ratio:g})"


class Affine2(ContractionMap):
    """2x2 affine map; Lipschitz bounds are the singular values."""

    kind = "affine2"

    def __init__(self, matrix, translation: tuple[float, float]):
        self.matrix = np.asarray(matrix, dtype=float)
        if self.matrix.shape != (2, 2):
            raise UsageError("affine2 needs a 2x2 matrix")
        self.translation = tuple(float(t) for t in translation)
        self.dim = 2
        sv = np.linalg.svd(self.matrix, compute_uv=False)
        self.lip_lo = float(sv[-1])
        self.lip_hi = float(sv[0])
        self._check_lips()
        self._shift = np.asarray(self.translation)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.matrix.T + self._shift

    def image_box_array(self, boxes: np.ndarray) -> np.ndarray:
        return _affine_image_boxes(self.matrix, self._shift, boxes)

    def describe(self) -> str:
        return f"affine2(sv=[{self.lip_lo:g},{self.lip_hi:g}])"


# --- closed-form catalog -----------------------------------------------------
#
# Each entry is a hand-derived formula with its exact per-axis range function,
# so cylinder boxes nest exactly.  Declared Lipschitz bounds come from the
# derivative ranges; the quadratic planar maps have derivative ranges touching
# 0 and 1, so their declarations are clamped to the open interval and they are
# kept away from error-certified operations.

_CLAMP_LO = 1e-12
_CLAMP_HI = 1.0 - 1e-12

# singular-value extremes of [[1/3, 0], [b, 1/2]] over |b| <= 1/2
_ARCH_LIP_LO = math.sqrt((22.0 - math.sqrt(340.0)) / 72.0)
_ARCH_LIP_HI = math.sqrt((22.0 + math.sqrt(340.0)) / 72.0)


def _interval_affine(vals: np.ndarray, a: float, b: float) -> np.ndarray:
    """Range of a*t + b over [lo, hi] columns, exact."""
    lo = vals[..., 0] * a + b
    hi = vals[..., 1] * a + b
    return np.stack([np.minimum(lo, hi), np.maximum(lo, hi)], axis=-1)


def _interval_halfsquare(vals: np.ndarray) -> np.ndarray:
    # t^2/2 is increasing on [0, 1]
    return np.stack([vals[..., 0] ** 2 / 2.0, vals[..., 1] ** 2 / 2.0], axis=-1)


def _arch_profile(x: np.ndarray) -> np.ndarray:
    return x * (1.0 - x) / 2.0


def _interval_arch(vals: np.ndarray) -> np.ndarray:
    """Range of x(1-x)/2 over [lo, hi] within [0, 1]; peak 1/8 at x = 1/2."""
    lo, hi = vals[..., 0], vals[..., 1]
    at_lo = _arch_profile(lo)
    at_hi = _arch_profile(hi)
    rmin = np.minimum(at_lo, at_hi)
    rmax = np.maximum(at_lo, at_hi)
    covers_peak = (lo <= 0.5) & (hi >= 0.5)
    rmax = np.where(covers_peak, 0.125, rmax)
    return np.stack([rmin, rmax], axis=-1)


def _cookie_25_left(x):
    return 0.5 - 0.5 * np.sqrt(1.0 - 0.8 * x)


def _cookie_25_right(x):
    return 0.5 + 0.5 * np.sqrt(1.0 - 0.8 * x)


def _cookie_69_left(x):
    return 0.5 - np.sqrt(1.0 + x) / 3.0


def _cookie_69_right(x):
    return 0.5 + np.sqrt(1.0 + x) / 3.0


class _Entry:
    __slots__ = ("dim", "lip_lo", "lip_hi", "fn", "box_fn", "note")

    def __init__(self, dim, lip_lo, lip_hi, fn, box_fn, note):
        self.dim = dim
        self.lip_lo = lip_lo
        self.lip_hi = lip_hi
        self.fn = fn
        self.box_fn = box_fn
        self.note = note


def _mono1d(fn, increasing: bool):
    def box_fn(boxes: np.ndarray) -> np.ndarray:
        a = fn(boxes[:, 0, 0])
        b = fn(boxes[:, 0, 1])
        lo, hi = (a, b) if increasing else (b, a)
        return np.stack([lo, hi], axis=-1)[:, None, :]
    return box_fn


def _planar(fx, fy):
    def fn(pts: np.ndarray) -> np.ndarray:
        return np.stack([fx(pts[:, 0], pts[:, 1]), fy(pts[:, 0], pts[:, 1])],
                        axis=-1)
    return fn


def _quad_boxes(x_rule, y_rule):
    def box_fn(boxes: np.ndarray) -> np.ndarray:
        return np.stack([x_rule(boxes), y_rule(boxes)], axis=1)
    return box_fn


CLOSED_FORMS: dict[str, _Entry] = {
    # inverse branches of an expanding interval map with |slope| in [2, 5]
    "cookie_branch_2_5_left": _Entry(
        1, 0.2, 0.5, _cookie_25_left, _mono1d(_cookie_25_left, True),
        "increasing branch onto the left of [0,1]"),
    "cookie_branch_2_5_right": _Entry(
        1, 0.2, 0.5, _cookie_25_right, _mono1d(_cookie_25_right, False),
        "decreasing branch onto the right of [0,1]"),
    # inverse branches of an expanding interval map with |slope| in [6, 9]
    "cookie_branch_6_9_left": _Entry(
        1, 1.0 / 9.0, 1.0 / 6.0, _cookie_69_left,
        _mono1d(_cookie_69_left, False), "decreasing branch, tight"),
    "cookie_branch_6_9_right": _Entry(
        1, 1.0 / 9.0, 1.0 / 6.0, _cookie_69_right,
        _mono1d(_cookie_69_right, True), "increasing branch, tight"),
    # planar maps with one quadratic component; derivative range hits 0 and 1
    "quad_y_bottom_left": _Entry(
        2, _CLAMP_LO, _CLAMP_HI,
        _planar(lambda x, y: x / 2.0, lambda x, y: y * y / 2.0),
        _quad_boxes(lambda b: _interval_affine(b[:, 0], 0.5, 0.0),
                    lambda b: _interval_halfsquare(b[:, 1])),
        "halves x, square-halves y"),
    "quad_x_top_left": _Entry(
        2, _CLAMP_LO, _CLAMP_HI,
        _planar(lambda x, y: x * x / 2.0, lambda x, y: y / 2.0 + 0.5),
        _quad_boxes(lambda b: _interval_halfsquare(b[:, 0]),
                    lambda b: _interval_affine(b[:, 1], 0.5, 0.5)),
        "square-halves x, lifts y"),
    "quad_x_bottom_left": _Entry(
        2, _CLAMP_LO, _CLAMP_HI,
        _planar(lambda x, y: x * x / 2.0, lambda x, y: y / 2.0),
        _quad_boxes(lambda b: _interval_halfsquare(b[:, 0]),
                    lambda b: _interval_affine(b[:, 1], 0.5, 0.0)),
        "square-halves x, halves y"),
    # planar maps bending the square along a parabolic arch
    "arch_left": _Entry(
        2, _ARCH_LIP_LO, _ARCH_LIP_HI,
        _planar(lambda x, y: x / 3.0,
                lambda x, y: _arch_profile(x) + y / 2.0),
        _quad_boxes(
            lambda b: _interval_affine(b[:, 0], 1.0 / 3.0, 0.0),
            lambda b: _sum_ranges(_interval_arch(b[:, 0]),
                                  _interval_affine(b[:, 1], 0.5, 0.0))),
        "thirds x, arches y"),
    "arch_right": _Entry(
        2, _ARCH_LIP_LO, _ARCH_LIP_HI,
        _planar(lambda x, y: 1.0 - x / 3.0,
                lambda x, y: _arch_profile(x) + y / 2.0),
        _quad_boxes(
            lambda b: _interval_affine(b[:, 0], -1.0 / 3.0, 1.0),
            lambda b: _sum_ranges(_interval_arch(b[:, 0]),
                                  _interval_affine(b[:, 1], 0.5, 0.0))),
        "mirrored thirds x, arches y"),
    "arch_top_mid": _Entry(
        2, _ARCH_LIP_LO, _ARCH_LIP_HI,
        _planar(lambda x, y: x / 3.0 + 1.0 / 3.0,
                lambda x, y: _arch_profile(x) + y / 2.0 + 0.5),
        _quad_boxes(
            lambda b: _interval_affine(b[:, 0], 1.0 / 3.0, 1.0 / 3.0),
            lambda b: _sum_ranges(_interval_arch(b[:, 0]),
                                  _interval_affine(b[:, 1], 0.5, 0.5))),
        "thirds x shifted, arches y, lifted"),
}


def _sum_ranges(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # exact range of f(x) + g(y) when the variables are independent
    return np.stack([a[..., 0] + b[..., 0], a[..., 1] + b[..., 1]], axis=-1)


class ClosedFormMap(ContractionMap):
    """One of the cataloged explicit nonlinear maps."""

    kind = "closed_form"

    def __init__(self, name: str):
        try:
            entry = CLOSED_FORMS[name]
        except KeyError:
            raise UsageError(f"unknown closed-form map {name!r}") from None
        self.name = name
        self.dim = entry.dim
        self.lip_lo = entry.lip_lo
        self.lip_hi = entry.lip_hi
        self._entry = entry
        self._check_lips()

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return self._entry.fn(pts)

    def image_box_array(self, boxes: np.ndarray) -> np.ndarray:
        return self._entry.box_fn(boxes)

    def describe(self) -> str:
        return f"closed_form({self.name})"


def apply(m: ContractionMap, p, box: AmbientBox | None = None):
    """Evaluate a map at one point, checking the point is in the ambient box."""
    box = box or unit_box(m.dim)
    pt = np.asarray(p, dtype=float).reshape(1, m.dim)
    if not box.contains(pt):
        raise GeometryDomainError(f"point {p!r} outside ambient box")
    out = m.apply_array(pt)[0]
    return float(out[0]) if m.dim == 1 else tuple(float(v) for v in out)


@dataclass(frozen=True)
class MapComposition:
    """Ordered composition; factors apply right to left, as written."""

    factors: tuple[ContractionMap, ...]
    lip_lo_bound: float
    lip_hi_bound: float

    @property
    def dim(self) -> int:
        return self.factors[0].dim

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        for m in reversed(self.factors):
            pts = m.apply_array(pts)
        return pts

    def image_box_array(self, boxes: np.ndarray) -> np.ndarray:
        for m in reversed(self.factors):
            boxes = m.image_box_array(boxes)
        return boxes


def compose(maps) -> MapComposition:
    """Compose maps left-to-right-outermost, multiplying the Lip bounds.

    Lip+ is submultiplicative and Lip- is supermultiplicative, so the products
    bound the composite from the correct sides.
    """
    maps = tuple(maps)
    if not maps:
        raise UsageError("cannot compose an empty list of maps")
    dims = {m.dim for m in maps}
    if len(dims) != 1:
        raise UsageError("cannot compose maps of different dimensions")
    lo = 1.0
    hi = 1.0
    for m in maps:
        lo *= m.lip_lo
        hi *= m.lip_hi
    return MapComposition(maps, lo, hi)


def _kronecker_points(box: AmbientBox, n: int, mults: tuple[float, ...],
                      shift: float) -> np.ndarray:
    """Deterministic low-discrepancy points: fractional parts of j*alpha."""
    j = np.arange(1, n + 1, dtype=float)[:, None]
    alpha = np.asarray(mults[: box.dim])[None, :]
    frac = np.modf(j * alpha + shift)[0]
    lo = np.asarray(box.lo)
    hi = np.asarray(box.hi)
    return lo + frac * (hi - lo)


_MULTS_A = (math.sqrt(2.0) - 1.0, math.sqrt(3.0) - 1.0)
_MULTS_B = (math.sqrt(5.0) - 2.0, math.sqrt(7.0) - 2.0)


@dataclass(frozen=True)
class LipValidation:
    observed_lo: float
    observed_hi: float
    ok: bool
    samples: int
    tol: float


def validate_lip_bounds(m: ContractionMap, samples: int,
                        box: AmbientBox | None = None,
                        tol: float = 1e-9) -> LipValidation:
    """Sample distance ratios and compare against the declared bounds.

    The sample is a fixed Kronecker sequence, so reports are reproducible.
    Degenerate pairs are skipped, never divided.
    """
    if samples < 2:
        raise UsageError("need at least 2 samples")
    box = box or unit_box(m.dim)
    xs = _kronecker_points(box, samples, _MULTS_A, 0.5)
    ys = _kronecker_points(box, samples, _MULTS_B, 0.25)
    d_in = np.linalg.norm(xs - ys, axis=-1)
    keep = d_in > 0.0
    fx = m.apply_array(xs[keep])
    fy = m.apply_array(ys[keep])
    d_out = np.linalg.norm(fx - fy, axis=-1)
    ratios = d_out / d_in[keep]
    obs_lo = float(ratios.min())
    obs_hi = float(ratios.max())
    ok = (m.lip_lo - tol <= obs_lo) and (obs_hi <= m.lip_hi + tol)
    return LipValidation(obs_lo, obs_hi, ok, int(keep.sum()), tol)
