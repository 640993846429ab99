"""Exception hierarchy shared by every module."""
from typing import Optional


class ZalmError(Exception):
    """Base class for all toolkit errors; the CLI maps it to exit code 3."""


class InvalidParameterError(ZalmError, ValueError):
    """A parameter violates one of its invariants."""

    def __init__(self, name: str, message: str):
        self.name = name
        self.message = message
        super().__init__(f"{name}: {message}")


class FitDegenerateError(ZalmError):
    """A time bin carries too little intensity for a phase fit."""


class ResolutionError(ZalmError):
    """A sampled grid is too coarse for the feature it must resolve."""


class DecompositionError(ZalmError):
    """A matrix decomposition failed or returned non-finite values."""


class ConfigError(ZalmError, ValueError):
    """A run configuration could not be parsed; the CLI maps it to exit code 2."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)
