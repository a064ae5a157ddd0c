"""Exception types raised across the package."""


class SizeBiasedError(Exception):
    """Base class for all package errors."""


class DomainError(SizeBiasedError, ValueError):
    """An argument lies outside the domain of the operation (e.g. a non-positive size)."""


class IndexOutOfRange(SizeBiasedError, IndexError):
    pass


class UnsupportedFamily(SizeBiasedError, ValueError):
    pass


class FamilyNotDivergent(SizeBiasedError, ValueError):
    pass


class IncompleteMetadata(SizeBiasedError, ValueError):
    pass


class InvalidCode(SizeBiasedError, ValueError):
    pass


class StateSpaceTooLarge(SizeBiasedError, ValueError):
    pass


class ConfigError(SizeBiasedError, ValueError):
    pass
