"""Exception hierarchy shared by every module in the package."""


class TopeError(Exception):
    """Base class for all errors raised by :mod:`tope_committees`."""


class MalformedLine(TopeError, ValueError):
    pass


class DuplicateTope(TopeError, ValueError):
    pass


class SymmetryViolation(TopeError, ValueError):
    pass


class ValidationFailure(TopeError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(str(v) for v in self.violations) or "invalid oriented matroid"
        super().__init__(msg)


class ElementOutOfRange(TopeError, IndexError):
    pass


class IndexOutOfRange(TopeError, IndexError):
    pass


class NotACommittee(TopeError, ValueError):
    pass


class NotConvex(TopeError, ValueError):
    pass


class EmptyMember(TopeError, ValueError):
    pass


class DoesNotCover(TopeError, ValueError):
    pass


class ConstraintViolation(TopeError, ValueError):
    pass


class HypothesisFailed(TopeError, ValueError):
    pass


class OutOfRangeK(TopeError, ValueError):
    pass


class DimensionTooLarge(TopeError, ValueError):
    pass


class RetryBudgetExceeded(TopeError, RuntimeError):
    pass


class CapExceeded(TopeError, RuntimeError):
    """A configured enumeration budget would be exceeded.

    The message names the budget; nothing is ever silently truncated.
    """

    def __init__(self, budget, limit, needed=None):
        self.budget = budget
        self.limit = limit
        self.needed = needed
        extra = f" (needs {needed})" if needed is not None else ""
        super().__init__(f"budget '{budget}' exceeded: limit {limit}{extra}")
