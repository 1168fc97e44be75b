"""Finite matroids from circuits, 2-sum tree-decompositions and infinite rays of matroids."""

from .core import FiniteMatroid, dual, minor, validate_circuits
from .errors import CapExceeded, InputError, InternalError, MatroidLabError

__all__ = [
    "CapExceeded",
    "FiniteMatroid",
    "InputError",
    "InternalError",
    "MatroidLabError",
    "dual",
    "minor",
    "validate_circuits",
]
