"""Exception types shared across the package.

Every error that crosses a module boundary carries the offending id or
invariant name so CLI layers can report it without string parsing.
"""


class PlyCoverError(Exception):
    """Base class for all package errors."""


class UncoveredPoint(PlyCoverError):
    def __init__(self, point_id: int):
        self.point_id = point_id
        super().__init__(f"point {point_id} lies in no candidate square")


class SquareMissesLine(PlyCoverError):
    def __init__(self, square_id: int):
        self.square_id = square_id
        super().__init__(f"square {square_id} does not intersect the stab line")


class SquareMissesSlab(PlyCoverError):
    def __init__(self, square_id: int):
        self.square_id = square_id
        super().__init__(f"square {square_id} meets neither slab boundary line")


class PointOutsideSlab(PlyCoverError):
    def __init__(self, point_id: int):
        self.point_id = point_id
        super().__init__(f"point {point_id} lies outside the slab")


class ModeMismatch(PlyCoverError):
    pass


class GenerationFailed(PlyCoverError):
    pass


class ParseError(PlyCoverError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"parse error at line {line}: {reason}")


class ValidationError(PlyCoverError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"invariant violated: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InfeasibleInput(PlyCoverError):
    pass


class CapExceeded(PlyCoverError):
    def __init__(self, m: int, cap: int):
        self.m = m
        self.cap = cap
        super().__init__(f"{m} squares exceed the oracle cap of {cap}")


class RowBoundViolation(PlyCoverError):
    pass


class NotAClique(PlyCoverError):
    pass


class TooManyReversals(PlyCoverError):
    pass
