"""Exception hierarchy shared across the package."""


class RandomPlayerError(Exception):
    """Base class for every domain error raised by this package."""


class InvalidBoard(RandomPlayerError, ValueError):
    pass


class AlreadyClaimed(RandomPlayerError, ValueError):
    pass


class NotAnEdge(RandomPlayerError, ValueError):
    pass


class StrategyMismatch(RandomPlayerError, ValueError):
    pass


class SizeCapExceeded(RandomPlayerError):
    """An exact checker was asked to run above its size cap."""


class CheckerBudgetExceeded(SizeCapExceeded):
    pass


class PreconditionViolated(RandomPlayerError, ValueError):
    pass


class MilestoneUnlogged(RandomPlayerError):
    pass


class VerificationFailure(RandomPlayerError):
    """A claimed Maker win did not survive the independent oracle."""

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript


class EmptyGrid(RandomPlayerError, ValueError):
    pass
