"""Geometric primitives for arrangements of axis-parallel unit squares.

Conventions are closed throughout: a square with anchor (x_left, y_top)
occupies the closed box [x_left, x_left + 1] x [y_top - 1, y_top],
containment includes boundaries, and clip regions are closed half-planes
or closed unit-height slabs.  Because closed boxes satisfy the Helly
property in the plane, the maximum depth of an arrangement equals the
size of the largest subset with a common point, so depth and clique size
are used interchangeably.

All functions here are pure and operate on immutable values; they are
safe to call concurrently.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Point",
    "UnitSquare",
    "ClipRegion",
    "CLIP_NONE",
    "PlyRegion",
    "contains",
    "square_meets_line",
    "compute_ply",
    "representative_region",
]


@dataclass(frozen=True)
class Point:
    """An input point. Ids are dense ordinals within an instance."""

    x: float
    y: float
    id: int = 0


@dataclass(frozen=True)
class UnitSquare:
    """Closed unit square anchored by its left edge and top edge."""

    x_left: float
    y_top: float
    id: int = 0

    @property
    def x_right(self) -> float:
        return self.x_left + 1.0

    @property
    def y_bottom(self) -> float:
        return self.y_top - 1.0


def contains(square: UnitSquare, point: Point) -> bool:
    """Closed containment test, boundaries included."""
    return (
        square.x_left <= point.x <= square.x_right
        and square.y_bottom <= point.y <= square.y_top
    )


def square_meets_line(square: UnitSquare, y: float) -> bool:
    """True iff the horizontal line at height y intersects the square."""
    return square.y_bottom <= y <= square.y_top


@dataclass(frozen=True)
class ClipRegion:
    """Closed region restricting where depth is measured.

    kind is one of "none", "below" (y <= y_high), "above" (y >= y_low)
    or "slab" (y_low <= y <= y_high with y_high = y_low + 1).
    """

    kind: str = "none"
    y_low: float | None = None
    y_high: float | None = None

    @staticmethod
    def none() -> "ClipRegion":
        return CLIP_NONE

    @staticmethod
    def below(y: float) -> "ClipRegion":
        return ClipRegion("below", y_high=y)

    @staticmethod
    def above(y: float) -> "ClipRegion":
        return ClipRegion("above", y_low=y)

    @staticmethod
    def slab(y_low: float, y_high: float) -> "ClipRegion":
        if y_high != y_low + 1.0:
            raise ValueError(f"slab must have unit height, got [{y_low}, {y_high}]")
        return ClipRegion("slab", y_low=y_low, y_high=y_high)

    def contains_y(self, y: float) -> bool:
        if self.kind == "none":
            return True
        if self.kind == "below":
            return y <= self.y_high
        if self.kind == "above":
            return y >= self.y_low
        return self.y_low <= y <= self.y_high

    def clip_interval(self, lo: float, hi: float) -> tuple[float, float] | None:
        """Intersect the closed y-interval [lo, hi] with the clip; None if empty."""
        if self.kind in ("below", "slab") and self.y_high is not None:
            hi = min(hi, self.y_high)
        if self.kind in ("above", "slab") and self.y_low is not None:
            lo = max(lo, self.y_low)
        if lo > hi:
            return None
        return lo, hi

    def boundary_values(self) -> tuple[float, ...]:
        if self.kind == "below":
            return (self.y_high,)
        if self.kind == "above":
            return (self.y_low,)
        if self.kind == "slab":
            return (self.y_low, self.y_high)
        return ()


CLIP_NONE = ClipRegion("none")


@dataclass(frozen=True)
class PlyRegion:
    """A maximum-depth face of the arrangement: the common intersection of
    its clique, clipped.  Degenerate (zero-width or zero-height) rectangles
    are legal under the closed convention."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    depth: int
    clique: frozenset[int]
    anchor: str = "unanchored"

    @property
    def rect(self) -> tuple[float, float, float, float]:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi)

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo


def _with_midpoints(values: list[float]) -> list[float]:
    # One candidate per vertex and per open edge of the 1D subdivision.
    out: list[float] = []
    for i, v in enumerate(values):
        out.append(v)
        if i + 1 < len(values):
            out.append((v + values[i + 1]) / 2.0)
    return out


def _anchor_of(members: list[UnitSquare], clip: ClipRegion) -> str:
    if clip.kind != "slab":
        return "unanchored"
    meets_low = any(square_meets_line(s, clip.y_low) for s in members)
    meets_high = any(square_meets_line(s, clip.y_high) for s in members)
    if meets_low and meets_high:
        return "floating"
    if meets_high:
        return "top"
    if meets_low:
        return "bottom"
    # A unit square intersecting a closed unit slab always meets a boundary.
    raise AssertionError("clique square meets neither slab boundary")


def compute_ply(
    squares, clip: ClipRegion = CLIP_NONE
) -> tuple[int, list[PlyRegion]]:
    """Maximum depth of the clipped arrangement, with one region per
    maximum-depth clique.

    The arrangement is evaluated on a candidate grid built from every
    square edge plus the clip boundaries; taking both the grid lines and
    the midpoints between consecutive lines places one candidate point in
    every face (cell, edge, vertex) of the arrangement, so degenerate
    closed slivers are counted.  O(m^3) overall, which is fine at the
    scale this library targets.
    """
    sqs = list(squares)
    if not sqs:
        return 0, []

    xs_edges = sorted({v for s in sqs for v in (s.x_left, s.x_right)})
    ys_set = {v for s in sqs for v in (s.y_top, s.y_bottom)}
    ys_set.update(clip.boundary_values())
    ys_edges = sorted(ys_set)

    xs = _with_midpoints(xs_edges)
    ys = [y for y in _with_midpoints(ys_edges) if clip.contains_y(y)]
    if not ys:
        return 0, []

    xl = np.fromiter((s.x_left for s in sqs), dtype=float, count=len(sqs))
    xr = xl + 1.0
    yt = np.fromiter((s.y_top for s in sqs), dtype=float, count=len(sqs))
    yb = yt - 1.0

    ax = np.asarray(xs)[:, None]
    ay = np.asarray(ys)[:, None]
    cov_x = (ax >= xl) & (ax <= xr)  # (num_x, m)
    cov_y = (ay >= yb) & (ay <= yt)  # (num_y, m)
    depth = cov_x.astype(np.int32) @ cov_y.astype(np.int32).T
    max_depth = int(depth.max())
    if max_depth == 0:
        return 0, []

    ia, ib = np.nonzero(depth == max_depth)
    seen: dict[bytes, np.ndarray] = {}
    for a, b in zip(ia, ib):
        mask = cov_x[a] & cov_y[b]
        seen.setdefault(mask.tobytes(), mask)

    regions: list[PlyRegion] = []
    for mask in seen.values():
        members = [sqs[t] for t in np.nonzero(mask)[0]]
        ids = frozenset(s.id for s in members)
        x_lo = max(s.x_left for s in members)
        x_hi = min(s.x_right for s in members)
        y_lo = max(s.y_bottom for s in members)
        y_hi = min(s.y_top for s in members)
        clipped = clip.clip_interval(y_lo, y_hi)
        if clipped is None:  # cannot happen: the candidate point lies inside
            raise AssertionError("max-depth clique clipped to empty")
        y_lo, y_hi = clipped
        regions.append(
            PlyRegion(x_lo, x_hi, y_lo, y_hi, max_depth, ids, _anchor_of(members, clip))
        )

    regions.sort(key=lambda r: (r.x_hi, r.y_hi, tuple(sorted(r.clique))))
    return max_depth, regions


def representative_region(regions: list[PlyRegion]) -> PlyRegion:
    """The rightmost region: maximal x_hi, then maximal y_hi, then the
    smallest clique id-set lexicographically.  Deterministic under any
    input permutation."""
    if not regions:
        raise ValueError("representative_region: empty region list")
    best = regions[0]
    for r in regions[1:]:
        if (r.x_hi, r.y_hi) > (best.x_hi, best.y_hi):
            best = r
        elif (r.x_hi, r.y_hi) == (best.x_hi, best.y_hi) and tuple(
            sorted(r.clique)
        ) < tuple(sorted(best.clique)):
            best = r
    return best
