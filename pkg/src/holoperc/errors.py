class HoloPercError(Exception):
    """Base class for errors raised by holoperc."""


class InvalidInputError(HoloPercError, ValueError):
    pass


class CapacityError(HoloPercError):
    """A configured size budget was exceeded."""


class ConsistencyError(HoloPercError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
