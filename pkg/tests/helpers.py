"""Independent oracles for the test suite.

Everything here recomputes geometry from raw square fields with plain
interval arithmetic; none of it shares the arrangement machinery of the
code under test.
"""

import random
from itertools import combinations

from plycover import Point, UnitSquare


def clip_bounds(clip):
    """(y_lo, y_hi) limits of a ClipRegion, +-inf when unbounded."""
    lo, hi = float("-inf"), float("inf")
    if clip.kind == "below":
        hi = clip.y_high
    elif clip.kind == "above":
        lo = clip.y_low
    elif clip.kind == "slab":
        lo, hi = clip.y_low, clip.y_high
    return lo, hi


def subset_depth_oracle(squares, clip) -> int:
    """Largest subset with a nonempty closed common intersection inside
    the clip, by exhaustive enumeration of all subsets."""
    best = 0
    sqs = list(squares)
    c_lo, c_hi = clip_bounds(clip)
    for r in range(1, len(sqs) + 1):
        for combo in combinations(sqs, r):
            x_lo = max(s.x_left for s in combo)
            x_hi = min(s.x_left + 1.0 for s in combo)
            y_lo = max(max(s.y_top - 1.0 for s in combo), c_lo)
            y_hi = min(min(s.y_top for s in combo), c_hi)
            if x_lo <= x_hi and y_lo <= y_hi:
                best = max(best, r)
    return best


def random_squares(rng: random.Random, m: int, grid: int = 0) -> list[UnitSquare]:
    """m random squares; grid > 0 snaps coordinates to multiples of
    1/grid, which produces many exact ties and degenerate touchings."""
    out = []
    for i in range(m):
        if grid:
            x = rng.randrange(0, 3 * grid) / grid
            y = rng.randrange(-grid, 2 * grid) / grid
        else:
            x = rng.uniform(0.0, 3.0)
            y = rng.uniform(-1.0, 2.0)
        out.append(UnitSquare(x, y, i))
    return out


def covered(point: Point, squares) -> bool:
    return any(
        s.x_left <= point.x <= s.x_left + 1.0
        and s.y_top - 1.0 <= point.y <= s.y_top
        for s in squares
    )
