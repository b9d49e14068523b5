"""Unit-height slab covering: solver, clique taxonomy, structural checks.

In a slab every candidate square touches the bottom line or the top line,
which constrains what a maximum clique of an irredundant solution can
look like.  Cliques are classified by anchoring (top, bottom, floating)
and by the left-to-right pattern of their top edges (one monotone run,
or exactly two runs separated by a single transition square); certain
combinations cannot occur without a redundant square, and
validate_structure reports any that do, together with caps on how many
clique squares may touch each boundary line in two-phase floating
cliques and the pairwise exclusive-point property.
"""

from dataclasses import dataclass

from .errors import (
    NotAClique,
    PointOutsideSlab,
    SquareMissesSlab,
    TooManyReversals,
    UncoveredPoint,
)
from .geometry import (
    ClipRegion,
    Point,
    UnitSquare,
    compute_ply,
    contains,
    square_meets_line,
)
from .greedy import (
    EMPTY_COVER,
    CoverEntry,
    GreedyCriteria,
    best_entry,
    fill_table,
)

__all__ = [
    "SlabContext",
    "CliqueType",
    "Violation",
    "ViolationReport",
    "FORBIDDEN_CLIQUES",
    "solve_slab",
    "build_slab_table",
    "classify_clique",
    "exclusive_points",
    "validate_structure",
]


@dataclass(frozen=True)
class SlabContext:
    """Two horizontal lines exactly one unit apart, bottom first."""

    y_low: float
    y_high: float

    def __post_init__(self):
        if self.y_high != self.y_low + 1.0:
            raise ValueError(
                f"slab must have unit height, got [{self.y_low}, {self.y_high}]"
            )

    def clip(self) -> ClipRegion:
        return ClipRegion.slab(self.y_low, self.y_high)


@dataclass(frozen=True)
class CliqueType:
    """anchor in {top, bottom, floating}; shape is a monotone run ("ASC",
    "DESC") or two runs ("DESC|ASC" etc.); transition_index is the
    1-based position of the square starting the second run."""

    anchor: str
    shape: str
    transition_index: int | None = None


# (anchor, shape) pairs that force a redundant square and therefore must
# not appear in pruned solver output.
FORBIDDEN_CLIQUES = frozenset(
    {
        ("top", "ASC|ASC"),
        ("top", "DESC|DESC"),
        ("top", "ASC|DESC"),
        ("bottom", "ASC|ASC"),
        ("bottom", "DESC|ASC"),
        ("bottom", "DESC|DESC"),
    }
)


def _validate_slab_instance(ctx: SlabContext, squares, points):
    for s in squares:
        if not (
            square_meets_line(s, ctx.y_low) or square_meets_line(s, ctx.y_high)
        ):
            raise SquareMissesSlab(s.id)
    for p in points:
        if not ctx.y_low <= p.y <= ctx.y_high:
            raise PointOutsideSlab(p.id)
        if not any(contains(s, p) for s in squares):
            raise UncoveredPoint(p.id)


def build_slab_table(ctx: SlabContext, squares, points):
    _validate_slab_instance(ctx, squares, points)
    return fill_table(points, squares, ctx.clip(), GreedyCriteria("slab"))


def solve_slab(ctx: SlabContext, squares, points) -> CoverEntry:
    """Greedy cover of in-slab points by boundary-touching squares.

    Same table scheme as the line solver but with the slab clip and the
    floating-preferred tie-break.
    """
    if not points:
        _validate_slab_instance(ctx, squares, [])
        return EMPTY_COVER
    return best_entry(build_slab_table(ctx, squares, points))


def _above(a: UnitSquare, b: UnitSquare) -> bool:
    # Ties in y_top broken by id so "above" is a strict total order.
    return (a.y_top, a.id) > (b.y_top, b.id)


def classify_clique(clique, ctx: SlabContext) -> CliqueType:
    """Classify a clique (squares with common intersection in the slab).

    Squares are ordered by x_left and the consecutive above/below
    relations of their top edges are grouped into maximal monotone runs.
    One run is a monotone shape.  Two runs are a two-phase shape whose
    second run starts at the transition square (DESC|ASC, ASC|DESC).
    Three runs whose middle run is a single relation between equal outer
    directions are the drop/raise shapes ASC|ASC and DESC|DESC, the
    transition square being the displaced one.  Anything else needs
    three or more monotone phases, which forces a redundant square, so
    it raises TooManyReversals; hitting that on pruned solver output
    signals a bug.
    """
    members = sorted(clique, key=lambda s: (s.x_left, s.id))
    if not members:
        raise NotAClique("empty clique")
    x_lo = max(s.x_left for s in members)
    x_hi = min(s.x_right for s in members)
    y_lo = max(max(s.y_bottom for s in members), ctx.y_low)
    y_hi = min(min(s.y_top for s in members), ctx.y_high)
    if x_lo > x_hi or y_lo > y_hi:
        raise NotAClique("no common intersection inside the slab")

    meets_low = any(square_meets_line(s, ctx.y_low) for s in members)
    meets_high = any(square_meets_line(s, ctx.y_high) for s in members)
    if meets_low and meets_high:
        anchor = "floating"
    elif meets_high:
        anchor = "top"
    else:
        anchor = "bottom"

    # Degenerate single-square cliques are treated as ascending runs.
    relations = [
        "ASC" if _above(members[i + 1], members[i]) else "DESC"
        for i in range(len(members) - 1)
    ]
    if not relations:
        return CliqueType(anchor, "ASC")
    runs: list[list] = []
    for rel in relations:
        if runs and runs[-1][0] == rel:
            runs[-1][1] += 1
        else:
            runs.append([rel, 1])
    if len(runs) == 1:
        return CliqueType(anchor, relations[0])
    if len(runs) == 2:
        shape = f"{runs[0][0]}|{runs[1][0]}"
        return CliqueType(anchor, shape, transition_index=runs[0][1] + 2)
    if len(runs) == 3 and runs[1][1] == 1 and runs[0][0] == runs[2][0]:
        shape = f"{runs[0][0]}|{runs[2][0]}"
        return CliqueType(anchor, shape, transition_index=runs[0][1] + 2)
    raise TooManyReversals(
        f"clique {sorted(s.id for s in members)} needs more than two monotone phases"
    )


def exclusive_points(cover, points, squares) -> dict[int, list[int]]:
    """Map each cover square to the points only it covers.

    Points covered by two or more cover squares appear in no list; a
    cover square with an empty list is redundant.
    """
    by_id = {s.id: s for s in squares}
    cover_ids = sorted(cover)
    excl: dict[int, list[int]] = {sid: [] for sid in cover_ids}
    for p in points:
        holders = [sid for sid in cover_ids if contains(by_id[sid], p)]
        if len(holders) == 1:
            excl[holders[0]].append(p.id)
    return excl


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    squares: tuple[int, ...] = ()
    points: tuple[int, ...] = ()


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "no violations"
        return "; ".join(f"{v.kind}: {v.message}" for v in self.violations)


def _split_phases(members, ctype: CliqueType):
    if ctype.transition_index is None:
        return members, []
    cut = ctype.transition_index - 1  # 1-based position to 0-based index
    return members[:cut], members[cut:]


def _floating_cap_violations(members, ctype: CliqueType, ctx: SlabContext):
    """Caps on boundary contacts in two-phase floating cliques."""
    ids = tuple(s.id for s in members)
    top = lambda s: square_meets_line(s, ctx.y_high)  # noqa: E731
    bottom = lambda s: square_meets_line(s, ctx.y_low)  # noqa: E731
    phase1, phase2 = _split_phases(members, ctype)
    out = []

    def cap(count, limit, what):
        if count > limit:
            out.append(
                Violation(
                    "FloatingCapExceeded",
                    f"{ctype.shape} clique has {count} {what} (limit {limit})",
                    squares=ids,
                )
            )

    if ctype.shape == "ASC|ASC":
        cap(sum(map(top, phase1)), 1, "top-line squares in phase 1")
        cap(sum(map(bottom, phase2)), 1, "bottom-line squares in phase 2")
    elif ctype.shape == "ASC|DESC":
        cap(sum(map(top, members)), 2, "top-line squares")
    elif ctype.shape == "DESC|ASC":
        cap(sum(map(bottom, members)), 2, "bottom-line squares")
    elif ctype.shape == "DESC|DESC":
        cap(sum(map(bottom, phase1)), 1, "bottom-line squares in phase 1")
        cap(sum(map(top, phase2)), 1, "top-line squares in phase 2")
    return out


def validate_structure(cover, ctx: SlabContext, points, squares) -> ViolationReport:
    """Check every maximum clique of a pruned cover against the slab
    structure claims.

    Violations are data, not errors: solver output after pruning is
    expected to produce an empty report, and any non-empty report on it
    is a regression.  Checks: no forbidden (anchor, shape) combination,
    boundary-contact caps for two-phase floating cliques, and the
    exclusive-pair property (no input square may contain every exclusive
    point of two consecutive clique squares unless the left one is the
    leftmost cover square).
    """
    cover = frozenset(cover)
    by_id = {s.id: s for s in squares}
    violations: list[Violation] = []
    if not cover:
        return ViolationReport(())
    members_all = [by_id[i] for i in sorted(cover)]
    ply, regions = compute_ply(members_all, ctx.clip())
    if ply < 2:
        return ViolationReport(())

    excl = exclusive_points(cover, points, squares)
    leftmost_id = min(cover, key=lambda sid: (by_id[sid].x_left, sid))
    point_by_id = {p.id: p for p in points}

    for region in regions:
        members = sorted(
            (by_id[i] for i in region.clique), key=lambda s: (s.x_left, s.id)
        )
        ids = tuple(s.id for s in members)
        try:
            ctype = classify_clique(members, ctx)
        except TooManyReversals as exc:
            violations.append(Violation("TooManyReversals", str(exc), squares=ids))
            continue
        if (ctype.anchor, ctype.shape) in FORBIDDEN_CLIQUES:
            violations.append(
                Violation(
                    "ForbiddenCliqueType",
                    f"{ctype.anchor}-anchored {ctype.shape} clique",
                    squares=ids,
                )
            )
        if ctype.anchor == "floating":
            violations.extend(_floating_cap_violations(members, ctype, ctx))

        for left, right in zip(members, members[1:]):
            if left.id == leftmost_id:
                continue
            # on a pruned cover both sides are nonempty by construction
            if not excl.get(left.id) or not excl.get(right.id):
                continue
            pool = excl[left.id] + excl[right.id]
            pts = [point_by_id[i] for i in pool]
            for s in squares:
                if all(contains(s, p) for p in pts):
                    violations.append(
                        Violation(
                            "ExclusivePairCovered",
                            f"square {s.id} contains every exclusive point of "
                            f"{left.id} and {right.id}",
                            squares=(s.id, left.id, right.id),
                            points=tuple(pool),
                        )
                    )
    return ViolationReport(tuple(violations))
