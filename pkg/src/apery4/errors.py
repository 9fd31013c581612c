"""Exception hierarchy shared by every module of the package."""


class Apery4Error(Exception):
    """Base class for all package errors."""


class ResourceLimitError(Apery4Error):
    """A request exceeds a configured resource ceiling (e.g. digits)."""


class DomainError(Apery4Error, ValueError):
    """An argument lies outside the domain of the requested function."""

    def __init__(self, function, argument, reason=""):
        self.function = function
        self.argument = argument
        msg = f"{function}: argument {argument} outside domain"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class NonConvergenceError(Apery4Error):
    """A numerical procedure failed to reach its tolerance.

    ``estimates`` holds the last estimates produced before giving up, so
    callers can report how far off the procedure was.
    """

    def __init__(self, message, estimates=()):
        self.estimates = tuple(estimates)
        super().__init__(message)


class IntegrandError(Apery4Error):
    """The integrand raised while being evaluated at ``abscissa``."""

    def __init__(self, abscissa, cause):
        self.abscissa = abscissa
        self.cause = cause
        super().__init__(f"integrand failed at x = {abscissa}: {cause!r}")


class PrecisionExhaustedError(Apery4Error):
    """Integer-relation search ran out of working precision."""


class UnknownIdError(Apery4Error, KeyError):
    """An identity or series id is not present in the catalog."""

    def __str__(self):
        return f"unknown id: {self.args[0]!r}"
