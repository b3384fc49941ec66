"""Random iterated function systems: cylinder covers along a sequence,
attractor approximation with a certified Hausdorff-metric error, splices,
Bernoulli sampling, and the continuity probe.

Cylinders at depth k along omega are the compositions S_{w1,i1} o ... o
S_{wk,ik} applied to the ambient box.  They are enumerated bottom-up: the
depth-k family along omega is the image of the depth-(k-1) family along the
shifted sequence under the first-level maps, which yields lexicographic word
order with the first symbol most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dimension import CarpetSpec, check_weights
from .errors import ResourceError, UsageError
from .geometry import (Affine2, AmbientBox, ContractionMap, MapComposition,
                       Similarity, compose, _kronecker_points, _MULTS_A)
from .sequences import OmegaSeq, omega_distance, splice

DEFAULT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class DeterministicIfs:
    """One IFS: a non-empty ordered family of maps over a shared box."""

    maps: tuple[ContractionMap, ...]
    label: str

    def __post_init__(self) -> None:
        if not self.maps:
            raise UsageError(f"system {self.label!r} has no maps")
        dims = {m.dim for m in self.maps}
        if len(dims) != 1:
            raise UsageError(f"system {self.label!r} mixes dimensions")

    @property
    def dim(self) -> int:
        return self.maps[0].dim


@dataclass(frozen=True)
class Rifs:
    """An ordered list of IFSs acting on one ambient box."""

    systems: tuple[DeterministicIfs, ...]
    ambient: AmbientBox

    def __post_init__(self) -> None:
        if not self.systems:
            raise UsageError("a RIFS needs at least one system")
        for sys_ in self.systems:
            if sys_.dim != self.ambient.dim:
                raise UsageError(
                    f"system {sys_.label!r} dimension {sys_.dim} does not match "
                    f"ambient dimension {self.ambient.dim}")
            for m in sys_.maps:
                _check_contains(m, self.ambient, sys_.label)

    @property
    def n_systems(self) -> int:
        return len(self.systems)

    def system_for_level(self, omega: OmegaSeq, level: int) -> DeterministicIfs:
        idx = omega.entry(level)
        if not (1 <= idx <= len(self.systems)):
            raise UsageError(f"sequence entry {idx} has no system")
        return self.systems[idx - 1]


def _check_contains(m: ContractionMap, box: AmbientBox, label: str) -> None:
    probes = np.vstack([box.corners(),
                        _kronecker_points(box, 1000, _MULTS_A, 0.5)])
    if not box.contains(m.apply_array(probes)):
        raise UsageError(
            f"map {m.describe()} of system {label!r} leaves the ambient box")


def carpet_system(carpet: CarpetSpec, label: str) -> DeterministicIfs:
    """Grid-cell maps of a carpet: cell (col, row) -> diag(1/m, 1/n) + offset.

    Cells are taken in the carpet's declared order.
    """
    maps: list[ContractionMap] = []
    m, n = carpet.m, carpet.n
    for col, row in carpet.chosen:
        shift = (col / m, row / n)
        if m == n:
            maps.append(Similarity(1.0 / m, shift))
        else:
            maps.append(Affine2([[1.0 / m, 0.0], [0.0, 1.0 / n]], shift))
    return DeterministicIfs(tuple(maps), label)


def _level_counts(rifs: Rifs, omega: OmegaSeq, depth: int) -> list[int]:
    return [len(rifs.system_for_level(omega, l).maps)
            for l in range(1, depth + 1)]


def _guard_budget(counts: list[int], budget: int) -> int:
    total = 1
    for c in counts:
        total *= c
    if total > budget:
        raise ResourceError(
            f"cylinder count {total} exceeds budget {budget}", count=total)
    return total


@dataclass(frozen=True)
class CylinderCover:
    """Depth-k cover of the attractor by composed images of the ambient box.

    Boxes are exact per-axis ranges propagated through the factor maps, so a
    child box always sits inside its parent.  `words` holds 0-based map
    indices, lexicographically ordered.
    """

    rifs: Rifs
    omega: OmegaSeq
    depth: int
    boxes: np.ndarray          # (count, dim, 2)
    lip_hi_prods: np.ndarray   # (count,)
    lip_lo_prods: np.ndarray   # (count,)
    error_bound: float

    @property
    def count(self) -> int:
        return self.boxes.shape[0]

    @cached_property
    def words(self) -> np.ndarray:
        counts = _level_counts(self.rifs, self.omega, self.depth)
        total = self.count
        out = np.empty((total, self.depth), dtype=np.int32)
        stride = total
        idx = np.arange(total)
        for pos, c in enumerate(counts):
            stride //= c
            out[:, pos] = (idx // stride) % c
        return out

    def diameters(self) -> np.ndarray:
        # Similarities scale diameters exactly, so the ratio product is the
        # true cylinder diameter; otherwise fall back to the box diagonal.
        if all(m.kind == "similarity"
               for sys_ in self.rifs.systems for m in sys_.maps):
            return self.lip_hi_prods * self.rifs.ambient.diameter
        spans = self.boxes[:, :, 1] - self.boxes[:, :, 0]
        return np.linalg.norm(spans, axis=1)

    def composition(self, word) -> MapComposition:
        factors = [self.rifs.system_for_level(self.omega, l + 1).maps[i]
                   for l, i in enumerate(word)]
        return compose(factors)

    def cylinders(self):
        """Iterate (word, composition, box) triples; meant for small covers."""
        for row, box in zip(self.words, self.boxes):
            word = tuple(int(i) for i in row)
            yield word, self.composition(word), box


def cylinder_cover(rifs: Rifs, omega: OmegaSeq, depth: int,
                   budget: int = DEFAULT_BUDGET) -> CylinderCover:
    """Enumerate all depth-k cylinders along omega."""
    if depth < 1:
        raise UsageError("depth must be >= 1")
    counts = _level_counts(rifs, omega, depth)
    _guard_budget(counts, budget)
    boxes = rifs.ambient.as_array()[None, :, :]
    hi = np.ones(1)
    lo = np.ones(1)
    for level in range(depth, 0, -1):
        maps = rifs.system_for_level(omega, level).maps
        boxes = np.concatenate([m.image_box_array(boxes) for m in maps])
        hi = np.concatenate([m.lip_hi * hi for m in maps])
        lo = np.concatenate([m.lip_lo * lo for m in maps])
    err = float(hi.max()) * rifs.ambient.diameter
    return CylinderCover(rifs, omega, depth, boxes, hi, lo, err)


def cylinder_images(rifs: Rifs, omega: OmegaSeq, depth: int, seeds: np.ndarray,
                    budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Images of seed points under every depth-k composition along omega.

    Returns (count * len(seeds), dim); each word's block keeps seed order,
    blocks are in lexicographic word order.
    """
    if depth < 0:
        raise UsageError("depth must be >= 0")
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    counts = _level_counts(rifs, omega, depth)
    _guard_budget(counts, budget)
    pts = seeds
    for level in range(depth, 0, -1):
        maps = rifs.system_for_level(omega, level).maps
        pts = np.concatenate([m.apply_array(pts) for m in maps])
    return pts


def resolution_depth(rifs: Rifs, omega: OmegaSeq, target_error: float,
                     budget: int = DEFAULT_BUDGET) -> int:
    """Smallest depth (at least 1) whose cover error bound meets the target.

    The bound shrinks by each level's largest lip_hi, so the search is pure
    arithmetic; the cylinder count is still checked against the budget.
    """
    if target_error <= 0.0:
        raise UsageError("target error must be > 0")
    depth = 0
    bound = rifs.ambient.diameter
    count = 1
    while depth < 1 or bound > target_error:
        maps = rifs.system_for_level(omega, depth + 1).maps
        next_count = count * len(maps)
        if next_count > budget:
            raise ResourceError(
                f"cylinder count {next_count} at depth {depth + 1} exceeds "
                f"budget {budget} before reaching error {target_error:.6g}; "
                f"best achievable error {bound:.6g}",
                count=next_count, best_error=bound)
        depth += 1
        count = next_count
        bound *= max(m.lip_hi for m in maps)
        if depth > 10_000:
            raise ResourceError(
                "contraction too weak to reach target error",
                best_error=bound)
    return depth


@dataclass(frozen=True)
class AttractorPoints:
    points: np.ndarray
    depth: int
    error_bound: float


def attractor_points(rifs: Rifs, omega: OmegaSeq, target_error: float,
                     budget: int = DEFAULT_BUDGET) -> AttractorPoints:
    """One representative point per cylinder, at the smallest depth whose
    error bound meets the target.

    The representative is the composed image of the ambient center, so it
    lies inside its cylinder; the point set is within the reported error
    bound of the attractor in the Hausdorff metric.
    """
    depth = resolution_depth(rifs, omega, target_error, budget)
    bound = _max_scale(rifs, omega, depth) * rifs.ambient.diameter
    center = np.asarray(rifs.ambient.center)[None, :]
    pts = cylinder_images(rifs, omega, depth, center, budget)
    return AttractorPoints(pts, depth, bound)


# --- Hausdorff distance ------------------------------------------------------

_BRUTE_CHUNK = 4_000_000  # pair evaluations per chunk


def _directed_sq_brute(a: np.ndarray, b: np.ndarray) -> float:
    """max over a of min over b of squared distance."""
    rows = max(1, _BRUTE_CHUNK // b.shape[0])
    worst = 0.0
    for start in range(0, a.shape[0], rows):
        chunk = a[start:start + rows]
        d2 = ((chunk[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1)
        worst = max(worst, float(d2.min(axis=1).max()))
    return worst


def _nearest_sq_sorted(a: np.ndarray, b_sorted: np.ndarray) -> np.ndarray:
    """Exact nearest squared distances in one dimension via a sorted array."""
    pos = np.searchsorted(b_sorted, a)
    left = np.clip(pos - 1, 0, b_sorted.size - 1)
    right = np.clip(pos, 0, b_sorted.size - 1)
    d2l = (a - b_sorted[left]) ** 2
    d2r = (a - b_sorted[right]) ** 2
    return np.minimum(d2l, d2r)


def _directed_sq_bucket(a: np.ndarray, b: np.ndarray) -> float:
    """Grid-bucket exact directed distance for planar point sets.

    Points of b are grouped into square cells; each group of a sharing a cell
    scans Chebyshev rings of cells outward until no farther ring can improve
    its worst minimum.  The per-pair arithmetic matches the brute force path,
    so minima agree exactly.
    """
    lo = b.min(axis=0)
    span = float(max((b.max(axis=0) - lo).max(), 1e-300))
    ncell = max(1, int(math.sqrt(b.shape[0] / 4.0)))
    h = span / ncell

    def keys_of(pts: np.ndarray) -> np.ndarray:
        k = np.floor((pts - lo) / h).astype(np.int64)
        return np.clip(k, -(1 << 30), 1 << 30)

    bk = keys_of(b)
    border = {}
    for i, key in enumerate(map(tuple, bk)):
        border.setdefault(key, []).append(i)
    bgroups = {k: b[np.asarray(v)] for k, v in border.items()}

    ak = keys_of(a)
    order = np.lexsort((ak[:, 1], ak[:, 0]))
    worst = 0.0
    start = 0
    while start < a.shape[0]:
        stop = start
        key = tuple(ak[order[start]])
        while stop < a.shape[0] and tuple(ak[order[stop]]) == key:
            stop += 1
        group = a[order[start:stop]]
        best2 = np.full(group.shape[0], np.inf)
        r = 0
        max_r = 2 * ncell + 2
        while True:
            cells = _ring_cells(key, r)
            cands = [bgroups[c] for c in cells if c in bgroups]
            if cands:
                cand = np.concatenate(cands)
                d2 = ((group[:, None, :] - cand[None, :, :]) ** 2).sum(axis=-1)
                best2 = np.minimum(best2, d2.min(axis=1))
            # any cell at ring >= r+1 is at least r*h away from this cell
            if best2.max() <= (r * h) ** 2 or r > max_r:
                break
            r += 1
        worst = max(worst, float(best2.max()))
        start = stop
    return worst


def _ring_cells(key: tuple[int, int], r: int) -> list[tuple[int, int]]:
    ci, cj = key
    if r == 0:
        return [key]
    cells = []
    for di in range(-r, r + 1):
        for dj in range(-r, r + 1):
            if max(abs(di), abs(dj)) == r:
                cells.append((ci + di, cj + dj))
    return cells


def hausdorff_distance(a, b, method: str = "auto") -> float:
    """Exact symmetric Hausdorff distance between finite point sets."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise UsageError("Hausdorff distance needs non-empty point sets")
    if a.shape[1] != b.shape[1]:
        raise UsageError("point sets must share a dimension")

    def directed(x: np.ndarray, y: np.ndarray) -> float:
        if method == "brute":
            return _directed_sq_brute(x, y)
        accelerate = method == "bucket" or (
            method == "auto" and x.shape[0] > 10_000 and y.shape[0] > 10_000)
        if accelerate and x.shape[1] == 1:
            ys = np.sort(y[:, 0])
            return float(_nearest_sq_sorted(x[:, 0], ys).max())
        if accelerate and x.shape[1] == 2:
            return _directed_sq_bucket(x, y)
        return _directed_sq_brute(x, y)

    return math.sqrt(max(directed(a, b), directed(b, a)))


# --- Bernoulli sampling ------------------------------------------------------


@dataclass(frozen=True)
class BernoulliSampler:
    weights: tuple[float, ...]
    seed: int

    def __post_init__(self) -> None:
        check_weights(self.weights)


def sample_omega(sampler: BernoulliSampler, horizon: int) -> OmegaSeq:
    """Draw `horizon` symbols i.i.d. from the weight vector.

    Deterministic in the seed: a PCG64 stream mapped through the inverse CDF.
    The result is the drawn prefix with the last symbol repeating.
    """
    if horizon < 1:
        raise UsageError("horizon must be >= 1")
    rng = np.random.Generator(np.random.PCG64(sampler.seed))
    u = rng.random(horizon)
    edges = np.cumsum(np.asarray(sampler.weights))
    symbols = np.searchsorted(edges, u, side="right") + 1
    symbols = np.minimum(symbols, len(sampler.weights))  # guard u ~ 1 edge
    prefix = tuple(int(s) for s in symbols)
    return OmegaSeq(prefix, (prefix[-1],))


# --- continuity of omega -> attractor ---------------------------------------


@dataclass(frozen=True)
class ProbeRow:
    tail: OmegaSeq
    d_omega: float
    d_hausdorff: float
    bound: float


def continuity_probe(rifs: Rifs, omega: OmegaSeq, k: int,
                     tails: list[OmegaSeq], depth: int,
                     budget: int = DEFAULT_BUDGET) -> list[ProbeRow]:
    """Splice each tail at depth k and compare attractor approximations.

    The Hausdorff column is bounded by 2 * (max composed lip_hi over depth-k
    cylinders) * diameter + 2 * error_bound, which is also reported.
    """
    if depth < k:
        raise UsageError("probe depth must be >= splice depth k")
    center = np.asarray(rifs.ambient.center)[None, :]
    base_pts = cylinder_images(rifs, omega, depth, center, budget)
    scale_k = _max_scale(rifs, omega, k)
    base_err = _max_scale(rifs, omega, depth) * rifs.ambient.diameter
    rows = []
    for tail in tails:
        spliced = splice(omega, k, tail)
        d_om = omega_distance(omega, spliced)
        pts = cylinder_images(rifs, spliced, depth, center, budget)
        d_h = hausdorff_distance(base_pts, pts)
        err = max(base_err,
                  _max_scale(rifs, spliced, depth) * rifs.ambient.diameter)
        bound = 2.0 * scale_k * rifs.ambient.diameter + 2.0 * err
        rows.append(ProbeRow(tail, d_om, d_h, bound))
    return rows


def _max_scale(rifs: Rifs, omega: OmegaSeq, depth: int) -> float:
    """Largest composed lip_hi over depth-k words: per-level maxima multiply."""
    scale = 1.0
    for level in range(1, depth + 1):
        scale *= max(m.lip_hi for m in rifs.system_for_level(omega, level).maps)
    return scale
