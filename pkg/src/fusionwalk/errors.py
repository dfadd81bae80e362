"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class FusionWalkError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidInputError(FusionWalkError, ValueError):
    """A weight, family/rank pair or parameter violates a precondition."""

    exit_code = 2


class BoundExceededError(FusionWalkError, ValueError):
    """A representation or tensor power is larger than the configured bound."""

    exit_code = 3


class ConsistencyError(FusionWalkError, RuntimeError):
    """An internal identity failed (e.g. a non-integral recovered coefficient).

    This signals a bug, never a user error.
    """

    exit_code = 4
