"""Exception types shared across the package."""


class MediangleError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MediangleError, ValueError):
    """Malformed input: bad graph, bad presentation, bad word, bad parameters."""


class UnreachableError(MediangleError):
    def __init__(self, x, y):
        super().__init__(f"vertices {x} and {y} lie in different components")
        self.x, self.y = x, y


class NotGatedError(MediangleError):
    def __init__(self, x, candidates=()):
        super().__init__(f"subgraph is not gated from vertex {x}")
        self.x = x
        self.candidates = tuple(candidates)


class MoveError(MediangleError):
    """A rewriting move was requested at a position where it does not apply."""


class NotTransverseError(MediangleError):
    pass


class AngleMismatchError(MediangleError):
    """Two convex cycles crossed by the same pair of hyperplanes give different angles."""


class BudgetExceededError(MediangleError):
    """An exploration ran over its node budget; the result is inconclusive."""


class CapExceededError(MediangleError):
    """A finite enumeration (group elements, ball vertices) ran over its cap."""


class IncompleteBallError(MediangleError):
    pass


class PreconditionError(MediangleError):
    pass


class VerificationError(MediangleError):
    """An internal cross-check failed; indicates a bug or an input outside the theory."""
