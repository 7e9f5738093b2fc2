"""Exception hierarchy shared by the library and the CLI exit-code map."""


class MultisegError(Exception):
    """Base class for all library errors."""


class UsageError(MultisegError):
    """Malformed input or misuse of an API (CLI exit code 1)."""


class DomainError(MultisegError):
    """Input outside an operation's mathematical domain (CLI exit code 2)."""


class ResourceBoundError(MultisegError):
    """A configured size bound was exceeded (CLI exit code 3)."""


class InvariantViolation(MultisegError):
    """A structural invariant backed by a theorem failed (CLI exit code 4).

    Raising this means the computation found what looks like a genuine
    counterexample; the CLI dumps a reproduction file instead of hiding it.
    """

    def __init__(self, message: str, repro: dict | None = None):
        super().__init__(message)
        self.repro = repro or {}
