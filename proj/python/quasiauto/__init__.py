"""Quasi-automatic semigroups: load a structure manifest and query it."""

from ._core import (
    AlphabetMismatch,
    InvalidStructure,
    ParseError,
    PreconditionError,
    QaError,
    ResourceLimit,
    Structure,
    load,
)

__all__ = [
    "AlphabetMismatch",
    "InvalidStructure",
    "ParseError",
    "PreconditionError",
    "QaError",
    "ResourceLimit",
    "Structure",
    "load",
]
