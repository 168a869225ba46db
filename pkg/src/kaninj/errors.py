"""Exception hierarchy shared by every module."""


class KanError(Exception):
    """Base class for all errors raised by kaninj."""


class DuplicateElement(KanError):
    pass


class CycleDetected(KanError):
    pass


class UnknownElement(KanError):
    pass


class NotMonotone(KanError):
    pass


class NotParallel(KanError):
    pass


class DomainMismatch(KanError):
    pass


class BaseMismatch(KanError):
    pass


class ReflectionError(KanError):
    pass


class BudgetExceeded(ReflectionError):
    """The reflection chain did not stabilise within the stage budget.

    The partial trace is kept on ``self.trace`` for inspection.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class StageTooLarge(BudgetExceeded):
    pass


class NotConverged(ReflectionError):
    pass


class TargetNotInjective(ReflectionError):
    pass


class InvariantViolation(KanError):
    """An internal consistency check of a construction failed."""


class ParseError(KanError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class ValidationError(KanError):
    pass


class UnknownCommand(KanError):
    pass
