"""Exception hierarchy shared by every module."""


class OgffError(Exception):
    """Base class for all library errors."""


class InvalidArgument(OgffError, ValueError):
    pass


class DomainError(OgffError, ValueError):
    pass


class CapacityError(OgffError, OverflowError):
    pass


class UnsupportedParameters(OgffError, ValueError):
    """Parameters are valid mathematically but no built-in generator covers them."""


class NotADesign(OgffError, ValueError):
    """Point replication is not constant, so the blocks do not form a 1-design."""


class ConstructionDefect(OgffError, RuntimeError):
    """A generator produced an object that fails its own verification."""


class VerificationFailed(OgffError, ValueError):
    def __init__(self, message, max_deviation=None):
        super().__init__(message)
        self.max_deviation = max_deviation


class ParseError(OgffError, ValueError):
    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
