import json

import pytest

from plycover import (
    GenParams,
    Instance,
    Point,
    Solution,
    UnitSquare,
    contains,
    gen_general_instance,
    gen_line_instance,
    gen_slab_instance,
    read_instance,
    read_solution,
    square_meets_line,
    validate_instance,
    write_instance,
    write_solution,
)
from plycover.errors import GenerationFailed, ParseError, ValidationError


class TestGenerators:
    def test_line_instance_valid_and_below(self):
        inst = gen_line_instance(GenParams(n=5, m=5), seed=42)
        validate_instance(inst)
        assert all(p.y < 0 for p in inst.points)
        assert all(square_meets_line(s, 0.0) for s in inst.squares)

    def test_zero_points_is_valid(self):
        inst = gen_line_instance(GenParams(n=0, m=1), seed=1)
        validate_instance(inst)
        assert inst.n == 0

    def test_same_seed_same_instance(self):
        a = gen_line_instance(GenParams(n=6, m=4), seed=9)
        b = gen_line_instance(GenParams(n=6, m=4), seed=9)
        assert a == b

    def test_two_sided_generation(self):
        inst = gen_line_instance(GenParams(n=12, m=6), seed=5, side="both")
        validate_instance(inst)
        assert any(p.y < 0 for p in inst.points)
        assert any(p.y > 0 for p in inst.points)

    def test_slab_alternates_anchor_lines(self):
        inst = gen_slab_instance(GenParams(n=2, m=2), seed=3)
        bottom, top = inst.squares
        assert square_meets_line(bottom, 0.0) and not square_meets_line(bottom, 1.0)
        assert square_meets_line(top, 1.0) and not square_meets_line(top, 0.0)
        assert all(0.0 <= p.y <= 1.0 for p in inst.points)

    def test_general_points_covered_by_construction(self):
        inst = gen_general_instance(GenParams(n=10, m=5, y_span=1.5), seed=8)
        for p in inst.points:
            assert any(contains(s, p) for s in inst.squares)

    def test_allow_degenerate_keeps_hard_invariants(self):
        inst = gen_slab_instance(
            GenParams(n=6, m=5, allow_degenerate=True), seed=11
        )
        validate_instance(inst)

    def test_generation_failure_when_margins_swallow_squares(self):
        # jitter close to 1/2 leaves no room below the line in any square
        with pytest.raises(GenerationFailed):
            gen_line_instance(GenParams(n=1, m=1, jitter=0.499), seed=0)


class TestInstanceIO:
    def test_round_trip_values(self, tmp_path, line_squares, line_points):
        inst = Instance(
            "chain", "line", tuple(line_points), tuple(line_squares), line_y=0.0
        )
        path = tmp_path / "chain.json"
        write_instance(inst, path)
        back = read_instance(path)
        assert back.points == inst.points
        assert back.squares == inst.squares
        assert back.line_y == inst.line_y
        assert back.sha256 is not None

    def test_rewrite_is_byte_identical(self, tmp_path):
        inst = gen_line_instance(GenParams(n=5, m=5), seed=42)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_instance(inst, p1)
        write_instance(read_instance(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_duplicate_x_left_rejected(self, tmp_path):
        doc = {
            "format": "plycover-instance/1",
            "name": "dup",
            "mode": "line",
            "line_y": 0.0,
            "points": [[0.5, -0.2]],
            "squares": [[0.0, 0.5], [0.0, 0.6]],
        }
        path = tmp_path / "dup.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError) as err:
            read_instance(path)
        assert err.value.invariant == "distinct-x-left"

    def test_uncovered_point_rejected(self, tmp_path):
        doc = {
            "format": "plycover-instance/1",
            "name": "bad",
            "mode": "line",
            "line_y": 0.0,
            "points": [[5.0, -0.2]],
            "squares": [[0.0, 0.5]],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError) as err:
            read_instance(path)
        assert err.value.invariant == "point-coverage"

    def test_garbage_is_a_parse_error(self, tmp_path):
        path = tmp_path / "garbage.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            read_instance(path)

    def test_wrong_format_tag(self, tmp_path):
        path = tmp_path / "tag.json"
        path.write_text(json.dumps({"format": "something-else"}))
        with pytest.raises(ParseError):
            read_instance(path)


class TestSolutionIO:
    def test_round_trip(self, tmp_path):
        sol = Solution(
            "chain",
            "abc123",
            "line1",
            (0, 1, 2),
            2,
            {"rect": [1.6, 1.8, -0.5, 0.0], "depth": 2, "clique": [1, 2],
             "anchor": "unanchored"},
            (("below", (0, 1, 2), 2),),
        )
        path = tmp_path / "chain.sol"
        write_solution(sol, path)
        back = read_solution(path)
        assert back == sol


def test_genparams_validation():
    with pytest.raises(ValueError):
        GenParams(n=-1, m=1)
    with pytest.raises(ValueError):
        GenParams(n=1, m=0)
    with pytest.raises(ValueError):
        GenParams(n=1, m=1, x_span=0.0)
    with pytest.raises(ValueError):
        GenParams(n=1, m=1, jitter=0.0)


def test_validate_instance_slab_invariants():
    sq = (UnitSquare(0.0, 0.6, 0),)
    bad_point = Instance("x", "slab", (Point(0.5, 1.6, 0),), sq, slab_y=(0.0, 1.0))
    with pytest.raises(ValidationError) as err:
        validate_instance(bad_point)
    assert err.value.invariant == "point-in-slab"

    bad_square = Instance(
        "y", "slab", (), (UnitSquare(0.0, 3.0, 0),), slab_y=(0.0, 1.0)
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(bad_square)
    assert err.value.invariant == "square-meets-slab"
