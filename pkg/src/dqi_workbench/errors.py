"""Exception hierarchy shared by the workbench modules."""
from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every error raised by dqi_workbench."""


class DomainError(WorkbenchError, ValueError):
    """A mathematical precondition failed (inverse of zero, rank out of range, ...)."""


class CapabilityError(WorkbenchError, RuntimeError):
    """The request is outside the range the exhaustive routines support."""


class InvariantViolation(WorkbenchError, AssertionError):
    """A machine invariant (register capacity, degree bookkeeping) broke."""


class DecodeFailure(WorkbenchError):
    """The decoder produced a malformed locator, e.g. a repeated root."""
