import pytest

from plycover import Point, UnitSquare


@pytest.fixture
def line_squares():
    # Three squares stabbed by y = 0; the middle one overlaps both others.
    return [
        UnitSquare(0.0, 0.5, 0),
        UnitSquare(0.8, 0.4, 1),
        UnitSquare(1.6, 0.5, 2),
    ]


@pytest.fixture
def line_points():
    # One point per square, each covered by exactly that square.
    return [
        Point(0.5, -0.3, 0),
        Point(1.2, -0.4, 1),
        Point(2.0, -0.3, 2),
    ]
