import random

import pytest
from hypothesis import given, settings, strategies as st

from plycover import (
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

from helpers import random_squares, subset_depth_oracle


def test_contains_interior_point():
    assert contains(UnitSquare(0.0, 0.5), Point(0.5, -0.3))


def test_contains_closed_corner():
    assert contains(UnitSquare(0.0, 0.5), Point(1.0, 0.5))


def test_contains_left_of_square():
    assert not contains(UnitSquare(0.8, 0.4), Point(0.5, -0.3))


@pytest.mark.parametrize(
    "square, y, expected",
    [
        (UnitSquare(0.0, 0.5), 0.0, True),
        (UnitSquare(0.0, 1.8), 1.0, True),
        (UnitSquare(0.0, 0.5), 2.0, False),
    ],
)
def test_square_meets_line(square, y, expected):
    assert square_meets_line(square, y) is expected


def test_slab_clip_requires_unit_height():
    with pytest.raises(ValueError):
        ClipRegion.slab(0.0, 2.0)
    clip = ClipRegion.slab(0.3, 0.3 + 1.0)
    assert clip.contains_y(0.3) and clip.contains_y(1.3)


def test_compute_ply_empty_set():
    assert compute_ply([], ClipRegion.below(0.0)) == (0, [])


def test_compute_ply_single_clipped_square():
    ply, regions = compute_ply([UnitSquare(0.0, 0.5, 0)], ClipRegion.below(0.0))
    assert ply == 1
    assert len(regions) == 1
    assert regions[0].rect == (0.0, 1.0, -0.5, 0.0)
    assert regions[0].clique == frozenset({0})


def test_compute_ply_overlapping_pair_below_line():
    squares = [UnitSquare(0.0, 0.5, 0), UnitSquare(0.8, 0.4, 1)]
    ply, regions = compute_ply(squares, ClipRegion.below(0.0))
    assert ply == 2
    assert len(regions) == 1
    assert regions[0].rect == (0.8, 1.0, -0.5, 0.0)
    assert regions[0].clique == frozenset({0, 1})


def test_compute_ply_counts_tangent_sliver():
    # Square touching the clip line only along its top edge still counts.
    ply, regions = compute_ply([UnitSquare(0.0, 0.0, 0)], ClipRegion.below(0.0))
    assert ply == 1
    assert regions[0].rect == (0.0, 1.0, -1.0, 0.0)

    # Two squares sharing only a vertical edge form a depth-2 sliver.
    ply, regions = compute_ply([UnitSquare(0.0, 0.5, 0), UnitSquare(1.0, 0.5, 1)])
    assert ply == 2
    assert regions[0].width == 0.0


def test_compute_ply_nothing_in_clip():
    ply, regions = compute_ply([UnitSquare(0.0, 5.0, 0)], ClipRegion.below(0.0))
    assert ply == 0 and regions == []


def test_representative_singleton():
    region = PlyRegion(0, 1, 0, 1, 1, frozenset({0}))
    assert representative_region([region]) is region


def test_representative_rightmost_wins():
    a = PlyRegion(0.0, 1.0, 0.0, 1.0, 2, frozenset({0, 1}))
    b = PlyRegion(0.7, 1.5, 0.0, 1.0, 2, frozenset({1, 2}))
    assert representative_region([a, b]) is b
    assert representative_region([b, a]) is b


def test_representative_y_tiebreak_all_permutations():
    a = PlyRegion(0.0, 1.0, 0.0, 0.3, 2, frozenset({0, 1}))
    b = PlyRegion(0.2, 1.0, 0.1, 0.6, 2, frozenset({2, 3}))
    for order in ([a, b], [b, a]):
        assert representative_region(order) is b


def test_representative_empty_errors():
    with pytest.raises(ValueError):
        representative_region([])


def test_region_cliques_are_tight():
    rng = random.Random(7)
    for trial in range(150):
        squares = random_squares(rng, rng.randint(1, 6), grid=rng.choice([0, 4]))
        if len({s.x_left for s in squares}) != len(squares):
            continue
        clip = rng.choice(
            [CLIP_NONE, ClipRegion.below(0.5), ClipRegion.slab(0.0, 1.0)]
        )
        ply, regions = compute_ply(squares, clip)
        for region in regions:
            assert region.depth == ply == len(region.clique)
            members = [s for s in squares if s.id in region.clique]
            # every clique square contains the whole rect
            for s in members:
                assert s.x_left <= region.x_lo and s.x_right >= region.x_hi
                assert s.y_bottom <= region.y_lo and s.y_top >= region.y_hi
            # non-members stay out of the open interior
            if region.x_lo < region.x_hi and region.y_lo < region.y_hi:
                for s in squares:
                    if s.id in region.clique:
                        continue
                    overlaps = (
                        s.x_left < region.x_hi
                        and s.x_right > region.x_lo
                        and s.y_bottom < region.y_hi
                        and s.y_top > region.y_lo
                    )
                    assert not overlaps


def test_matches_subset_oracle_across_clips():
    rng = random.Random(11)
    clips = [
        CLIP_NONE,
        ClipRegion.below(0.0),
        ClipRegion.above(0.25),
        ClipRegion.slab(0.0, 1.0),
    ]
    for trial in range(250):
        squares = random_squares(rng, rng.randint(0, 6), grid=rng.choice([0, 0, 5]))
        clip = clips[trial % len(clips)]
        ply, _ = compute_ply(squares, clip)
        assert ply == subset_depth_oracle(squares, clip)


coords = st.integers(-8, 16).map(lambda v: v / 8.0)
square_lists = st.lists(
    st.tuples(coords, coords), min_size=0, max_size=6
).map(lambda ps: [UnitSquare(x, y, i) for i, (x, y) in enumerate(ps)])


@settings(max_examples=80, deadline=None)
@given(square_lists, st.randoms(use_true_random=False))
def test_permutation_invariance(squares, rnd):
    clip = ClipRegion.below(0.5)
    base = compute_ply(squares, clip)
    shuffled = list(squares)
    rnd.shuffle(shuffled)
    assert compute_ply(shuffled, clip) == base


@settings(max_examples=80, deadline=None)
@given(square_lists, st.tuples(coords, coords))
def test_adding_square_never_decreases_ply(squares, extra):
    clip = ClipRegion.slab(0.0, 1.0)
    before, _ = compute_ply(squares, clip)
    grown = squares + [UnitSquare(extra[0], extra[1], len(squares))]
    after, _ = compute_ply(grown, clip)
    assert after >= before
