"""Exception hierarchy shared by every module."""


class PowerGraphLabError(Exception):
    """Base class for all library errors."""


# group side

class GroupError(PowerGraphLabError, ValueError):
    pass


class NotLatinSquare(GroupError):
    def __init__(self, kind: str, index: int, detail: str = ""):
        self.kind = kind
        self.index = index
        msg = f"{kind} {index} is not a permutation of 0..n-1"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class NoIdentity(GroupError):
    pass


class NotAssociative(GroupError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        i, j, k = triple
        super().__init__(f"(g{i}*g{j})*g{k} != g{i}*(g{j}*g{k})")


class ParseError(GroupError):
    def __init__(self, message: str, line: int, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class BadParameter(GroupError):
    pass


class PNotPrime(GroupError):
    pass


class PDoesNotDivideOrder(GroupError):
    pass


class NotAPGroup(GroupError):
    pass


# graph side

class GraphError(PowerGraphLabError):
    pass


class VertexOutOfRange(GraphError, IndexError):
    pass


class EmptyGraph(GraphError, ValueError):
    pass


class TooLargeForExactIso(GraphError):
    pass


class SetsIntersect(GraphError, ValueError):
    pass


class InstanceTooLargeForExact(GraphError):
    """An exact solver refused the instance instead of returning a bound."""

    def __init__(self, message: str, stage: str = ""):
        self.stage = stage
        super().__init__(message)
