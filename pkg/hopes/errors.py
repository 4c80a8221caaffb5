"""Exceptions raised by the hopes package.

Every class also derives from the builtin it refines, so ``except ValueError``
keeps working for callers that do not know about this module.
"""


class HopesError(Exception):
    """Base class for all errors raised by hopes."""


class InvalidArgument(HopesError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedInput(HopesError, ValueError):
    """The input is well formed but the requested operation cannot use it."""


class ResourceLimit(HopesError, RuntimeError):
    """A brute-force search would exceed its budget."""


class Infeasible(HopesError, RuntimeError):
    """No candidate satisfies the search predicates."""


class VerificationFailure(HopesError, AssertionError):
    """A computed object disagrees with an independent check."""

    def __init__(self, message, face=None, dot=None):
        super().__init__(message)
        self.face = face
        self.dot = dot
