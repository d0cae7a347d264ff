"""Exception types shared across the package."""


class GfcpcError(Exception):
    """Base class for all package errors."""


class ShapeError(GfcpcError):
    """Operands disagree on alphabet size or dimension."""


class InputError(GfcpcError):
    """Malformed or inconsistent user input (files, message lists, groupings)."""


class CapacityError(GfcpcError):
    """Requested enumeration exceeds the supported desk scale."""


class DomainError(GfcpcError):
    """Operation invoked outside its domain of validity (e.g. binary-only bounds)."""
