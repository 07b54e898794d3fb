"""Exception hierarchy shared by every otforge module."""


class OTForgeError(Exception):
    pass


class DomainError(OTForgeError, ValueError):
    """An input violates an operation's precondition."""


class CertificateError(OTForgeError):
    """A certificate could not be produced or failed re-verification."""


class UndeterminedError(OTForgeError):
    """A sign or rank could not be decided within the precision budget."""


class SearchExhausted(OTForgeError):
    """A bounded search finished without finding enough candidates."""
