"""Exception hierarchy shared across the package."""


class PwrError(Exception):
    """Base class for every error raised by pwrideal."""


class NotSolvable(PwrError):
    pass


class NotSquarefree(PwrError):
    pass


class DLessThan2(PwrError):
    pass


class NotAnIdeal(PwrError):
    pass


class DegenerateBasis(PwrError):
    pass


class InvalidPair(PwrError):
    """A (d1, d2) split violating coprimality, squarefreeness or the WR window."""


class InvalidWitness(PwrError):
    pass


class FactorizationIncomplete(PwrError):
    pass


class PeriodBudgetExceeded(PwrError):
    pass


class BudgetExhausted(PwrError):
    pass


class BadL(PwrError):
    pass


class NonPositive(PwrError):
    pass


class SinkFailure(PwrError):
    pass


class InvariantViolation(PwrError):
    """An emitted object failed its own re-verification."""
