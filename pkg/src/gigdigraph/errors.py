"""Exception hierarchy shared by every module.

The CLI maps each class onto an exit code, so raise the most specific one.
"""


class GigError(Exception):
    """Base class for all package errors."""


class InputError(GigError, ValueError):
    """Malformed coordinates, paths, labelings or arguments."""


class DomainError(GigError, ValueError):
    """A closed form was asked for outside the grid sizes it is stated for."""


class ResourceCapError(GigError, RuntimeError):
    """An enumeration would exceed a configured cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap
