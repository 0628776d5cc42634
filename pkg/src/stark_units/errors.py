"""Exception hierarchy.

Errors split into two families.  :class:`UsageError` covers bad input
(unparsable expressions, invalid indices, unsupported fields).
:class:`VerificationError` covers a computed identity that failed to
hold; since every identity checked here is a theorem, one of these
means a bug in the implementation, not a bad input.
"""

from __future__ import annotations


class StarkUnitsError(Exception):
    """Base class for all package errors."""


class UsageError(StarkUnitsError):
    pass


class InvalidField(UsageError):
    pass


class InvalidVariable(UsageError):
    pass


class InvalidInput(UsageError):
    pass


class ParseError(UsageError):
    pass


class PreconditionError(UsageError):
    pass


class PrecisionLoss(UsageError):
    """The precision bookkeeping cannot certify the requested target."""


class DivisionByZero(StarkUnitsError, ZeroDivisionError):
    pass


class VerificationError(StarkUnitsError):
    pass


class IntegralityViolation(VerificationError):
    pass


class NonzeroTail(VerificationError):
    pass


class DegreeViolation(VerificationError):
    pass


class NonLinearInput(VerificationError):
    pass


class MismatchError(VerificationError):
    pass
