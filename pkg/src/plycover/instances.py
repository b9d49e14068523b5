"""Instance generation, validation and file IO.

Instances and solutions are single JSON documents with a format tag.
Coordinates are emitted with Python's shortest round-trip repr, so
read(write(x)) reproduces exactly the same floating point values and
rewriting a file we produced is byte identical.  Point and square ids
are their positions in the serialized lists, which keeps them dense.
"""

import hashlib
import json
import math
import random
from dataclasses import dataclass, field

from .errors import GenerationFailed, ParseError, ValidationError
from .geometry import Point, UnitSquare, contains, square_meets_line

__all__ = [
    "GenParams",
    "Instance",
    "Solution",
    "validate_instance",
    "gen_line_instance",
    "gen_slab_instance",
    "gen_general_instance",
    "write_instance",
    "read_instance",
    "write_solution",
    "read_solution",
    "INSTANCE_FORMAT",
    "SOLUTION_FORMAT",
]

INSTANCE_FORMAT = "plycover-instance/1"
SOLUTION_FORMAT = "plycover-solution/1"


@dataclass(frozen=True)
class GenParams:
    """Generator knobs.

    jitter is the margin kept between sampled points and square edges,
    which rules out boundary degeneracies by construction; x_span and
    y_span bound where square anchors are scattered.  allow_degenerate
    skips the boundary-avoidance margin and resampling (hard invariants
    such as distinct left edges are always enforced).
    """

    n: int
    m: int
    x_span: float = 4.0
    y_span: float = 2.0
    jitter: float = 1e-3
    retry_limit: int = 200
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise ValueError("need n >= 0 and m >= 1")
        if self.x_span <= 0 or self.y_span <= 0:
            raise ValueError("spans must be positive")
        if not 0 < self.jitter < 1:
            raise ValueError("jitter must lie in (0, 1)")


@dataclass(frozen=True)
class Instance:
    name: str
    mode: str  # "line" | "slab" | "general"
    points: tuple[Point, ...]
    squares: tuple[UnitSquare, ...]
    line_y: float | None = None
    slab_y: tuple[float, float] | None = None
    seed: int | None = None
    sha256: str | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.squares)


def validate_instance(inst: Instance) -> None:
    """Raise ValidationError naming the first violated invariant."""
    for p in inst.points:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise ValidationError("finite-coordinates", f"point {p.id}")
    for s in inst.squares:
        if not (math.isfinite(s.x_left) and math.isfinite(s.y_top)):
            raise ValidationError("finite-coordinates", f"square {s.id}")
    if len({s.x_left for s in inst.squares}) != len(inst.squares):
        raise ValidationError("distinct-x-left")
    if len({(p.x, p.y) for p in inst.points}) != len(inst.points):
        raise ValidationError("distinct-points")
    if inst.mode == "line":
        if inst.line_y is None:
            raise ValidationError("line-parameter-missing")
        for s in inst.squares:
            if not square_meets_line(s, inst.line_y):
                raise ValidationError("square-meets-line", f"square {s.id}")
    elif inst.mode == "slab":
        if inst.slab_y is None:
            raise ValidationError("slab-parameter-missing")
        lo, hi = inst.slab_y
        if hi != lo + 1.0:
            raise ValidationError("slab-unit-height")
        for s in inst.squares:
            if not (square_meets_line(s, lo) or square_meets_line(s, hi)):
                raise ValidationError("square-meets-slab", f"square {s.id}")
        for p in inst.points:
            if not lo <= p.y <= hi:
                raise ValidationError("point-in-slab", f"point {p.id}")
    elif inst.mode != "general":
        raise ValidationError("known-mode", inst.mode)
    for p in inst.points:
        if not any(contains(s, p) for s in inst.squares):
            raise ValidationError("point-coverage", f"point {p.id}")


# Squares are resampled wholesale when no point placement fits them,
# e.g. a lone square leaving only a sliver on the required side.
_SQUARE_ROUNDS = 8


def _sample_distinct_x(rng: random.Random, span: float, used: set[float], limit: int) -> float:
    for _ in range(limit):
        x = rng.uniform(0.0, span)
        if x not in used:
            used.add(x)
            return x
    raise GenerationFailed("could not sample a distinct square left edge")


def _generate_instance(rng, params: GenParams, sample_squares, y_window):
    last_err = None
    for _ in range(_SQUARE_ROUNDS):
        squares = sample_squares()
        try:
            return squares, _sample_points(rng, params, squares, y_window)
        except GenerationFailed as exc:
            last_err = exc
    raise last_err


def _on_any_boundary(x: float, y: float, squares) -> bool:
    for s in squares:
        if x == s.x_left or x == s.x_right or y == s.y_top or y == s.y_bottom:
            return True
    return False


def _sample_points(rng, params: GenParams, squares, y_window) -> list[Point]:
    """Place each point inside a random square, restricted per square by
    y_window(square) -> (lo, hi) or None to skip that square."""
    pad = 0.0 if params.allow_degenerate else params.jitter
    pts: list[Point] = []
    seen: set[tuple[float, float]] = set()
    for i in range(params.n):
        for _ in range(params.retry_limit):
            s = squares[rng.randrange(len(squares))]
            window = y_window(s)
            if window is None:
                continue
            y_lo, y_hi = window[0] + pad, window[1] - pad
            if y_lo >= y_hi:
                continue
            x = rng.uniform(s.x_left + pad, s.x_right - pad)
            y = rng.uniform(y_lo, y_hi)
            if (x, y) in seen:
                continue
            if not params.allow_degenerate and _on_any_boundary(x, y, squares):
                continue
            seen.add((x, y))
            pts.append(Point(x, y, i))
            break
        else:
            raise GenerationFailed(f"no admissible position for point {i}")
    return pts


def gen_line_instance(
    params: GenParams, seed: int | None, side: str = "below", name: str | None = None
) -> Instance:
    """Random instance stabbed by the line y = 0.

    Every square meets the line (y_top drawn in (0, 1)); each point is
    placed strictly inside a random square on the requested side
    ("below", "above" or "both").
    """
    if side not in ("below", "above", "both"):
        raise ValueError(f"side must be below/above/both, got {side!r}")
    rng = random.Random(seed)

    def sample_squares():
        used: set[float] = set()
        squares = []
        for k in range(params.m):
            x = _sample_distinct_x(rng, params.x_span, used, params.retry_limit)
            y_top = rng.uniform(0.0, 1.0)
            while not params.allow_degenerate and y_top in (0.0, 1.0):
                y_top = rng.uniform(0.0, 1.0)
            squares.append(UnitSquare(x, y_top, k))
        return squares

    def window(s: UnitSquare):
        if side == "below":
            return (s.y_bottom, 0.0)
        if side == "above":
            return (0.0, s.y_top)
        return (s.y_bottom, s.y_top)

    squares, points = _generate_instance(rng, params, sample_squares, window)
    inst = Instance(
        name or f"line-n{params.n}-m{params.m}-s{seed}",
        "line",
        tuple(points),
        tuple(squares),
        line_y=0.0,
        seed=seed,
    )
    validate_instance(inst)
    return inst


def gen_slab_instance(params: GenParams, seed: int | None, name: str | None = None) -> Instance:
    """Random instance in the unit slab [0, 1]; squares alternate between
    meeting the bottom line and the top line."""
    rng = random.Random(seed)

    def sample_squares():
        used: set[float] = set()
        squares = []
        for k in range(params.m):
            x = _sample_distinct_x(rng, params.x_span, used, params.retry_limit)
            lo, hi = (0.0, 1.0) if k % 2 == 0 else (1.0, 2.0)
            y_top = rng.uniform(lo, hi)
            while not params.allow_degenerate and y_top in (0.0, 1.0, 2.0):
                y_top = rng.uniform(lo, hi)
            squares.append(UnitSquare(x, y_top, k))
        return squares

    def window(s: UnitSquare):
        return (max(s.y_bottom, 0.0), min(s.y_top, 1.0))

    squares, points = _generate_instance(rng, params, sample_squares, window)
    inst = Instance(
        name or f"slab-n{params.n}-m{params.m}-s{seed}",
        "slab",
        tuple(points),
        tuple(squares),
        slab_y=(0.0, 1.0),
        seed=seed,
    )
    validate_instance(inst)
    return inst


def gen_general_instance(params: GenParams, seed: int | None, name: str | None = None) -> Instance:
    """Random free-plane instance: squares scattered over the window
    [0, x_span] x [0, y_span], points inside random squares."""
    rng = random.Random(seed)

    def sample_squares():
        used: set[float] = set()
        return [
            UnitSquare(
                _sample_distinct_x(rng, params.x_span, used, params.retry_limit),
                rng.uniform(0.0, params.y_span),
                k,
            )
            for k in range(params.m)
        ]

    def window(s: UnitSquare):
        return (s.y_bottom, s.y_top)

    squares, points = _generate_instance(rng, params, sample_squares, window)
    inst = Instance(
        name or f"general-n{params.n}-m{params.m}-s{seed}",
        "general",
        tuple(points),
        tuple(squares),
        seed=seed,
    )
    validate_instance(inst)
    return inst


def _instance_doc(inst: Instance) -> dict:
    doc: dict = {"format": INSTANCE_FORMAT, "name": inst.name, "mode": inst.mode}
    if inst.mode == "line":
        doc["line_y"] = inst.line_y
    elif inst.mode == "slab":
        doc["slab_y"] = list(inst.slab_y)
    if inst.seed is not None:
        doc["seed"] = inst.seed
    doc["points"] = [[p.x, p.y] for p in inst.points]
    doc["squares"] = [[s.x_left, s.y_top] for s in inst.squares]
    return doc


def write_instance(inst: Instance, path) -> str:
    """Write the instance file; returns the sha256 of the bytes written."""
    data = (json.dumps(_instance_doc(inst), indent=2) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest()


def read_instance(path) -> Instance:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(doc, dict) or doc.get("format") != INSTANCE_FORMAT:
        raise ParseError(1, f"expected format {INSTANCE_FORMAT}")
    try:
        mode = doc["mode"]
        points = tuple(
            Point(float(x), float(y), i) for i, (x, y) in enumerate(doc["points"])
        )
        squares = tuple(
            UnitSquare(float(x), float(y), i) for i, (x, y) in enumerate(doc["squares"])
        )
        line_y = float(doc["line_y"]) if mode == "line" else None
        slab_y = tuple(float(v) for v in doc["slab_y"]) if mode == "slab" else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(1, f"malformed field: {exc}") from exc
    inst = Instance(
        str(doc.get("name", "")),
        mode,
        points,
        squares,
        line_y=line_y,
        slab_y=slab_y,
        seed=doc.get("seed"),
        sha256=hashlib.sha256(data).hexdigest(),
    )
    validate_instance(inst)
    return inst


@dataclass(frozen=True)
class Solution:
    instance_name: str
    instance_sha256: str | None
    mode: str  # solver mode: line1 | line2 | slab | full
    square_ids: tuple[int, ...]
    ply: int
    witness: dict | None = None  # {"rect": [...], "depth": d, "clique": [...], "anchor": a}
    parts: tuple[tuple[str, tuple[int, ...], int], ...] = ()


def write_solution(sol: Solution, path) -> str:
    doc: dict = {
        "format": SOLUTION_FORMAT,
        "instance": sol.instance_name,
        "instance_sha256": sol.instance_sha256,
        "mode": sol.mode,
        "square_ids": list(sol.square_ids),
        "ply": sol.ply,
    }
    if sol.witness is not None:
        doc["witness"] = sol.witness
    if sol.parts:
        doc["parts"] = [
            {"key": key, "square_ids": list(ids), "ply": ply}
            for key, ids, ply in sol.parts
        ]
    data = (json.dumps(doc, indent=2) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest()


def read_solution(path) -> Solution:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(doc, dict) or doc.get("format") != SOLUTION_FORMAT:
        raise ParseError(1, f"expected format {SOLUTION_FORMAT}")
    try:
        parts = tuple(
            (str(p["key"]), tuple(int(i) for i in p["square_ids"]), int(p["ply"]))
            for p in doc.get("parts", [])
        )
        return Solution(
            str(doc["instance"]),
            doc.get("instance_sha256"),
            str(doc["mode"]),
            tuple(int(i) for i in doc["square_ids"]),
            int(doc["ply"]),
            doc.get("witness"),
            parts,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(1, f"malformed field: {exc}") from exc
