from __future__ import annotations


class MatroidLabError(Exception):
    """Base class for all errors raised by the library."""


class InputError(MatroidLabError, ValueError):
    """Malformed or inconsistent input (bad labels, violated preconditions)."""


class CapExceeded(MatroidLabError):
    """An exhaustive operation was asked to run on an instance above its size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InternalError(MatroidLabError, RuntimeError):
    """A guaranteed object was not found; indicates a bug in the kernel."""


class Indeterminate(MatroidLabError):
    """A bounded search could not decide the question."""
