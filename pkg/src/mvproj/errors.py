"""Errors raised by the mvproj core."""


class MvprojError(Exception):
    """Base class for all mvproj errors."""


class InputError(MvprojError):
    """Malformed or out-of-contract input data."""


class BuildError(MvprojError):
    """A generator construction could not be completed (violated
    preconditions or no admissible parameters within search bounds)."""


class InternalCheckError(MvprojError):
    """A self-check that must hold by construction failed; indicates a bug,
    not bad input."""
