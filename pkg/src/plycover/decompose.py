"""Splitting a covering problem into subproblems and merging the covers.

Covers from subproblems are unioned; the ply of the union is measured
globally (no clip).  For the slab pipeline the plane is cut into
unit-height slabs anchored at floor(min point y); a chosen square can
overlap at most the slab above and below its own, so the global ply of
the merged cover is at most the maximum over any three consecutive slabs
of their per-slab ply sum.
"""

import math
from dataclasses import dataclass

from .errors import UncoveredPoint
from .geometry import CLIP_NONE, PlyRegion, Point, UnitSquare, compute_ply, contains, representative_region
from .greedy import solve_one_side
from .slab import SlabContext, solve_slab

__all__ = [
    "PartSolution",
    "MergedCover",
    "SlabBucket",
    "SlabAssignment",
    "split_by_line",
    "solve_two_sided",
    "partition_slabs",
    "solve_full",
    "global_ply",
]


@dataclass(frozen=True)
class PartSolution:
    """Cover chosen for one subproblem; key names the subproblem (side
    label or absolute slab index)."""

    key: str | int
    square_ids: frozenset[int]
    ply: int


@dataclass(frozen=True)
class MergedCover:
    square_ids: frozenset[int]
    ply: int  # global, measured with no clip
    witness: PlyRegion | None
    parts: tuple[PartSolution, ...]


@dataclass(frozen=True)
class SlabBucket:
    index: int  # absolute slab index k: the strip [origin + k, origin + k + 1]
    y_low: float
    y_high: float
    point_ids: tuple[int, ...]
    square_ids: tuple[int, ...]

    def context(self) -> SlabContext:
        return SlabContext(self.y_low, self.y_high)


@dataclass(frozen=True)
class SlabAssignment:
    origin: float
    slabs: tuple[SlabBucket, ...]


def global_ply(cover, squares) -> tuple[int, PlyRegion | None]:
    """Unclipped ply of a chosen square set, with its rightmost witness."""
    cover = frozenset(cover)
    members = [s for s in squares if s.id in cover]
    ply, regions = compute_ply(members, CLIP_NONE)
    witness = representative_region(regions) if regions else None
    return ply, witness


def split_by_line(line_y: float, squares, points):
    """Points at or below the line go below; strictly above goes above.
    Squares are shared by both sides."""
    below = [p for p in points if p.y <= line_y]
    above = [p for p in points if p.y > line_y]
    return below, above


def solve_two_sided(line_y: float, squares, points) -> MergedCover:
    """Union of the two one-sided line covers.

    Each side is solved independently, so the global ply of the union is
    at most ply(below) + ply(above): any square stabbed by the line that
    contains a point (x, y) also contains (x, line_y), hence each side's
    contribution anywhere is bounded by its clipped ply.
    """
    squares = list(squares)
    for p in points:
        if not any(contains(s, p) for s in squares):
            raise UncoveredPoint(p.id)
    below_pts, above_pts = split_by_line(line_y, squares, points)
    below = solve_one_side(line_y, squares, below_pts, "below")
    above = solve_one_side(line_y, squares, above_pts, "above")
    union = below.squares | above.squares
    ply, witness = global_ply(union, squares)
    parts = (
        PartSolution("below", below.squares, below.ply),
        PartSolution("above", above.squares, above.ply),
    )
    return MergedCover(union, ply, witness, parts)


def _slab_index(y: float, origin: float) -> int:
    t = y - origin
    k = math.floor(t)
    if t == k and k > 0:  # boundary points belong to the lower slab
        k -= 1
    return int(k)


def partition_slabs(points, squares) -> SlabAssignment:
    """Assign every point to one unit slab and every square to the slabs
    it can serve.

    Slab k spans [origin + k, origin + k + 1] with origin = floor of the
    lowest point; only slabs holding at least one point are kept.  A
    square joins a slab iff it overlaps the closed strip and contains at
    least one of the slab's points; any unit square overlapping a closed
    unit strip meets one of its boundary lines, so every assigned square
    is usable by the slab solver.
    """
    points = list(points)
    squares = list(squares)
    for p in points:
        if not any(contains(s, p) for s in squares):
            raise UncoveredPoint(p.id)
    if not points:
        return SlabAssignment(0.0, ())
    origin = float(math.floor(min(p.y for p in points)))
    buckets: dict[int, list[Point]] = {}
    for p in points:
        buckets.setdefault(_slab_index(p.y, origin), []).append(p)
    slabs = []
    for k in sorted(buckets):
        lo = origin + k
        hi = origin + k + 1
        members = buckets[k]
        slab_squares = [
            s
            for s in squares
            if s.y_top >= lo and s.y_bottom <= hi and any(contains(s, p) for p in members)
        ]
        slabs.append(
            SlabBucket(
                k,
                lo,
                hi,
                tuple(p.id for p in members),
                tuple(s.id for s in slab_squares),
            )
        )
    return SlabAssignment(origin, tuple(slabs))


def solve_full(points, squares) -> MergedCover:
    """Full pipeline: partition into unit slabs, solve each, merge."""
    squares = list(squares)
    by_id = {s.id: s for s in squares}
    points = list(points)
    point_by_id = {p.id: p for p in points}
    assignment = partition_slabs(points, squares)
    union: frozenset[int] = frozenset()
    parts = []
    for bucket in assignment.slabs:
        entry = solve_slab(
            bucket.context(),
            [by_id[i] for i in bucket.square_ids],
            [point_by_id[i] for i in bucket.point_ids],
        )
        union |= entry.squares
        parts.append(PartSolution(bucket.index, entry.squares, entry.ply))
    ply, witness = global_ply(union, squares)
    return MergedCover(union, ply, witness, tuple(parts))
