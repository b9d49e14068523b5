"""Incremental greedy table solver for line-stabbed covering.

Points are processed left to right.  Cell (i, j) of the table holds the
preferred cover of the first i+1 points that uses square j for point i,
derived from one feasible cell of the previous row.  Cover preference is
a total order: ply first, then (slab mode) floating regions before
anchored ones, then the leftmost region right side, then the narrowest
region, then the lexicographically smallest clique and cover id-sets.

Two candidate evaluators produce (ply, representative region) for a
parent cover extended by one square:

* "arrangement" recomputes the clipped arrangement from scratch via
  geometry.compute_ply; it works for any clip and is the reference.
* "interval" exploits that squares stabbed by a horizontal line, clipped
  to the closed half-plane below it, are unit-width rectangles whose top
  edges all lie on the line, so depth is a 1D interval-overlap problem.
  It maintains per-entry interval caches and is what makes large solves
  run in about n * m^2 time.

Both evaluators return bit-identical entries; the test suite checks this
by differential testing over random instances.
"""

import bisect
from dataclasses import dataclass, field, replace

from .errors import RowBoundViolation, SquareMissesLine, UncoveredPoint, ValidationError
from .geometry import (
    CLIP_NONE,
    ClipRegion,
    PlyRegion,
    Point,
    UnitSquare,
    compute_ply,
    contains,
    representative_region,
    square_meets_line,
)

__all__ = [
    "GreedyCriteria",
    "CoverEntry",
    "GreedyTable",
    "INFEASIBLE",
    "EMPTY_COVER",
    "entry_key",
    "compare_covers",
    "compute_entry",
    "fill_table",
    "best_cell",
    "best_entry",
    "trace_parents",
    "build_line_table",
    "solve_one_side",
]


@dataclass(frozen=True)
class GreedyCriteria:
    """mode "line" uses the four base preference rules; mode "slab"
    inserts floating-before-anchored between ply and region position."""

    mode: str = "line"


@dataclass(frozen=True)
class CoverEntry:
    """One table cell: a cover (square ids) for a point prefix.

    ivs is an internal cache used by the interval evaluator (cover
    intervals sorted by left edge); it never participates in equality.
    """

    squares: frozenset[int]
    ply: int
    region: PlyRegion | None
    parent: tuple[int, int] | None
    feasible: bool
    ivs: tuple[tuple[float, int], ...] | None = field(
        default=None, compare=False, repr=False
    )


INFEASIBLE = CoverEntry(frozenset(), 0, None, None, False)
EMPTY_COVER = CoverEntry(frozenset(), 0, None, None, True)


def entry_key(entry: CoverEntry, criteria: GreedyCriteria):
    """Sort key realizing the preference order; smaller is preferred."""
    region = entry.region
    if region is None:
        raise ValueError("entry has no region to compare")
    clique = tuple(sorted(region.clique))
    cover = tuple(sorted(entry.squares))
    if criteria.mode == "slab":
        anchored = 0 if region.anchor == "floating" else 1
        return (entry.ply, anchored, region.x_hi, region.width, clique, cover)
    return (entry.ply, region.x_hi, region.width, clique, cover)


def compare_covers(a: CoverEntry, b: CoverEntry, criteria: GreedyCriteria) -> int:
    """-1 if a is preferred, 1 if b is preferred, 0 on full tie."""
    if not (a.feasible and b.feasible):
        raise ValueError("compare_covers requires two feasible entries")
    ka, kb = entry_key(a, criteria), entry_key(b, criteria)
    return -1 if ka < kb else (1 if ka > kb else 0)


class _ArrangementEvaluator:
    """Reference evaluator: recompute the clipped arrangement per union."""

    def __init__(self, squares: list[UnitSquare], clip: ClipRegion):
        self.by_id = {s.id: s for s in squares}
        self.clip = clip

    def _entry(self, cover: frozenset[int], parent, cell) -> CoverEntry:
        members = [self.by_id[i] for i in sorted(cover)]
        ply, regions = compute_ply(members, self.clip)
        return CoverEntry(cover, ply, representative_region(regions), cell, True)

    def base_entry(self, sid: int) -> CoverEntry:
        return self._entry(frozenset((sid,)), None, None)

    def extend(self, parent: CoverEntry, sid: int, cell) -> CoverEntry:
        if sid in parent.squares:
            return replace(parent, parent=cell)
        return self._entry(parent.squares | {sid}, parent, cell)


class _IntervalEvaluator:
    """Fast line-mode evaluator over x-interval overlaps.

    Valid when every square meets the line and the clip is the closed
    half-plane below it: each clipped square is then a unit-width
    rectangle reaching up to the line, so the depth at any x is largest
    on the line itself and equals the number of x-intervals covering x.
    """

    def __init__(self, squares: list[UnitSquare], line_y: float):
        self.line_y = line_y
        self.by_id = {s.id: s for s in squares}

    def _region(self, clique: frozenset[int]) -> PlyRegion:
        members = [self.by_id[i] for i in clique]
        x_lo = max(s.x_left for s in members)
        x_hi = min(s.x_right for s in members)
        y_lo = max(s.y_bottom for s in members)
        return PlyRegion(x_lo, x_hi, y_lo, self.line_y, len(clique), clique)

    def base_entry(self, sid: int) -> CoverEntry:
        sq = self.by_id[sid]
        region = self._region(frozenset((sid,)))
        return CoverEntry(frozenset((sid,)), 1, region, None, True, ((sq.x_left, sid),))

    @staticmethod
    def _righter(a: PlyRegion, b: PlyRegion) -> PlyRegion:
        if (b.x_hi, b.y_hi) > (a.x_hi, a.y_hi):
            return b
        if (b.x_hi, b.y_hi) == (a.x_hi, a.y_hi) and tuple(sorted(b.clique)) < tuple(
            sorted(a.clique)
        ):
            return b
        return a

    def extend(self, parent: CoverEntry, sid: int, cell) -> CoverEntry:
        if sid in parent.squares:
            return replace(parent, parent=cell)
        sq = self.by_id[sid]
        lo, hi = sq.x_left, sq.x_right
        ivs = parent.ivs
        # Parent intervals overlapping [lo, hi]: left edge within [lo-1, hi].
        a = bisect.bisect_left(ivs, (lo - 1.0,))
        b = bisect.bisect_right(ivs, (hi, float("inf")))
        near = ivs[a:b]

        # Depth of the parent inside [lo, hi] changes only at interval
        # endpoints; checking those stations (rightmost first kept) gives
        # the max overlap and the rightmost point attaining it.
        stations = {lo, hi}
        for x, _ in near:
            if lo < x <= hi:
                stations.add(x)
            x_r = x + 1.0
            if lo <= x_r < hi:
                stations.add(x_r)
        best = -1
        best_x = lo
        for x in sorted(stations):
            c = 0
            for x_l, _ in near:
                if x_l <= x <= x_l + 1.0:
                    c += 1
            if c >= best:
                best, best_x = c, x

        new_depth = best + 1
        if new_depth >= parent.ply:
            clique = frozenset(s for x_l, s in near if x_l <= best_x <= x_l + 1.0) | {
                sid
            }
            candidate = self._region(clique)
            if new_depth > parent.ply:
                ply, region = new_depth, candidate
            else:
                ply, region = parent.ply, self._righter(parent.region, candidate)
        else:
            ply, region = parent.ply, parent.region

        new_ivs = list(ivs)
        bisect.insort(new_ivs, (lo, sid))
        return CoverEntry(parent.squares | {sid}, ply, region, cell, True, tuple(new_ivs))


@dataclass
class GreedyTable:
    """Filled greedy table plus the context it was built with."""

    points: list[Point]  # sorted left to right
    squares: list[UnitSquare]
    clip: ClipRegion
    criteria: GreedyCriteria
    entries: list[list[CoverEntry]] = field(repr=False, default_factory=list)
    row_bound_checks: int = 0
    reflected: bool = False
    _evaluator: object = field(repr=False, default=None)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.squares)


def sort_points(points) -> list[Point]:
    """Left-to-right processing order; (x, y, id) keeps ties deterministic."""
    return sorted(points, key=lambda p: (p.x, p.y, p.id))


def compute_entry(table: GreedyTable, i: int, j: int) -> CoverEntry:
    """Entry for row i (0-based, i-th leftmost point) and column j.

    Row 0 entries are singletons; later rows extend every feasible entry
    of the previous row by square j and keep the preferred candidate.
    The parent link points at the first cell achieving the preferred key.
    """
    point = table.points[i]
    square = table.squares[j]
    if not contains(square, point):
        return INFEASIBLE
    if i == 0:
        return table._evaluator.base_entry(square.id)
    best = None
    best_key = None
    for k, parent in enumerate(table.entries[i - 1]):
        if not parent.feasible:
            continue
        cand = table._evaluator.extend(parent, square.id, (i - 1, k))
        key = entry_key(cand, table.criteria)
        if best is None or key < best_key:
            best, best_key = cand, key
    return best if best is not None else INFEASIBLE


def fill_table(
    points,
    squares,
    clip: ClipRegion,
    criteria: GreedyCriteria,
    engine: str = "auto",
) -> GreedyTable:
    """Fill the whole table row by row.

    Asserts the row-wise ply bound at every step: each feasible entry of
    row i+1 has ply within {ply_i, ply_i + 1} where ply_i is the minimum
    feasible ply of row i.  A violation raises RowBoundViolation and
    indicates a solver bug.
    """
    squares = list(squares)
    if len({s.id for s in squares}) != len(squares):
        raise ValidationError("unique-square-ids", "duplicate ids in square list")
    pts = sort_points(points)
    if engine == "auto":
        engine = "interval" if (clip.kind == "below" and criteria.mode == "line") else "arrangement"
    if engine == "interval":
        if clip.kind != "below":
            raise ValueError("interval engine requires a below-line clip")
        evaluator = _IntervalEvaluator(squares, clip.y_high)
    else:
        evaluator = _ArrangementEvaluator(squares, clip)

    table = GreedyTable(pts, squares, clip, criteria, entries=[], _evaluator=evaluator)
    prev_min: int | None = None
    for i in range(len(pts)):
        row = [compute_entry(table, i, j) for j in range(len(squares))]
        table.entries.append(row)
        feasible = [e for e in row if e.feasible]
        if not feasible:
            raise UncoveredPoint(pts[i].id)
        if prev_min is not None:
            for e in feasible:
                if not prev_min <= e.ply <= prev_min + 1:
                    raise RowBoundViolation(
                        f"row {i}: entry ply {e.ply} outside [{prev_min}, {prev_min + 1}]"
                    )
                table.row_bound_checks += 1
        prev_min = min(e.ply for e in feasible)
    return table


def best_cell(table: GreedyTable) -> tuple[int, int]:
    """Preferred cell of the last row under the greedy criteria."""
    if not table.entries:
        raise ValueError("empty table has no best cell")
    row = table.rows - 1
    best_j = None
    best_key = None
    for j, e in enumerate(table.entries[row]):
        if not e.feasible:
            continue
        key = entry_key(e, table.criteria)
        if best_j is None or key < best_key:
            best_j, best_key = j, key
    if best_j is None:
        raise UncoveredPoint(table.points[row].id)
    return row, best_j


def best_entry(table: GreedyTable) -> CoverEntry:
    if not table.entries:
        return EMPTY_COVER
    r, c = best_cell(table)
    return table.entries[r][c]


def trace_parents(table: GreedyTable, cell: tuple[int, int]) -> list[tuple[int, int]]:
    """Parent chain from a feasible cell down to row 0, one node per row."""
    r, c = cell
    entry = table.entries[r][c]
    if not entry.feasible:
        raise ValueError(f"cell {cell} is infeasible")
    chain = [(r, c)]
    while entry.parent is not None:
        r, c = entry.parent
        chain.append((r, c))
        entry = table.entries[r][c]
    if len(chain) != cell[0] + 1:
        raise AssertionError("parent chain does not span one node per row")
    return chain


def _reflect_square(s: UnitSquare, line_y: float) -> UnitSquare:
    return UnitSquare(s.x_left, 2.0 * line_y - s.y_top + 1.0, s.id)


def _reflect_point(p: Point, line_y: float) -> Point:
    return Point(p.x, 2.0 * line_y - p.y, p.id)


def _reflect_region(r: PlyRegion, line_y: float) -> PlyRegion:
    return PlyRegion(
        r.x_lo,
        r.x_hi,
        2.0 * line_y - r.y_hi,
        2.0 * line_y - r.y_lo,
        r.depth,
        r.clique,
        r.anchor,
    )


def build_line_table(
    line_y: float,
    squares,
    points,
    side: str = "below",
    engine: str = "auto",
) -> GreedyTable:
    """Validate a one-sided line instance and fill its table.

    side="above" is solved by reflecting points and squares through the
    line (the problem is mirror symmetric); the returned table then lives
    in reflected coordinates and has reflected=True.
    """
    if side not in ("below", "above"):
        raise ValueError(f"side must be 'below' or 'above', got {side!r}")
    squares = list(squares)
    points = list(points)
    for s in squares:
        if not square_meets_line(s, line_y):
            raise SquareMissesLine(s.id)
    for p in points:
        on_side = p.y <= line_y if side == "below" else p.y >= line_y
        if not on_side:
            raise ValidationError("point-on-side", f"point {p.id} not {side} the line")
        if not any(contains(s, p) for s in squares):
            raise UncoveredPoint(p.id)
    if side == "above":
        squares = [_reflect_square(s, line_y) for s in squares]
        points = [_reflect_point(p, line_y) for p in points]
    table = fill_table(
        points, squares, ClipRegion.below(line_y), GreedyCriteria("line"), engine
    )
    table.reflected = side == "above"
    return table


def solve_one_side(
    line_y: float,
    squares,
    points,
    side: str = "below",
    engine: str = "auto",
) -> CoverEntry:
    """Cover all points on one side of the stab line, minimizing ply.

    Returns the preferred entry of the last table row.  For side="above"
    the returned region is reflected back into original coordinates; the
    parent link refers to the internally built (reflected) table.
    """
    if not points:
        for s in squares:
            if not square_meets_line(s, line_y):
                raise SquareMissesLine(s.id)
        return EMPTY_COVER
    table = build_line_table(line_y, squares, points, side, engine)
    entry = best_entry(table)
    if table.reflected and entry.region is not None:
        entry = replace(entry, region=_reflect_region(entry.region, line_y))
    return entry
