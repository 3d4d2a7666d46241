"""Exception hierarchy shared by all alignsum modules."""


class AlignsumError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AlignsumError):
    """A file could not be parsed as the expected format."""


class ValidationError(AlignsumError):
    """Parsed data or a constructed value violates a model invariant."""


class ConflictError(AlignsumError):
    """An optimistic-concurrency write lost against a newer revision."""


class NotFoundError(AlignsumError):
    """A requested meeting or resource does not exist."""
