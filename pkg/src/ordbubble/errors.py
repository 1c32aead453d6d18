"""Exception types shared across the toolkit.

Every domain error derives from :class:`OrderError`.  Errors that carry a
counterexample expose it as ``.witness`` (a tuple of element labels) so
callers and reports can show exactly which elements violate a precondition.
"""

from __future__ import annotations


class OrderError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OrderError):
    """A value fails its construction or precondition checks."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(witness)


class EmptyCarrier(ValidationError):
    pass


class UnknownLabel(ValidationError):
    pass


class CarrierMismatch(ValidationError):
    pass


class NotAnEquivalence(ValidationError):
    pass


class NotAnIndifference(ValidationError):
    pass


class NotSaturated(ValidationError):
    pass


class NotAPreorder(ValidationError):
    pass


class NotAPartialOrder(ValidationError):
    pass


class NotNegativelyTransitive(ValidationError):
    pass


class NotConstantOnClasses(ValidationError):
    pass


class NotIncreasing(ValidationError):
    pass


class AlreadyComparable(ValidationError):
    pass


class PairInvalid(ValidationError):
    """A (equivalence, strict) pair violates one of its preconditions."""

    def __init__(self, reason: str, witness: tuple = ()):
        super().__init__(reason, witness)
        self.reason = reason


class InvalidSystem(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class NotOpen(ValidationError):
    pass


class ParseError(OrderError):
    """An input file cannot be parsed; ``position`` locates the problem."""

    def __init__(self, message: str, position: str = ""):
        super().__init__(f"{message} ({position})" if position else message)
        self.position = position


class InvariantViolation(OrderError):
    """A verified theorem-level postcondition failed.

    This is never raised on valid inputs unless the library itself is
    corrupted; the CLI maps it to a dedicated exit code.
    """

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"invariant violated: {check}" + (f": {detail}" if detail else ""))
        self.check = check
