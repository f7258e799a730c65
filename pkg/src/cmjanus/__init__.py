"""Contingency matrices, Janus sheaves, Cousin complexes and bialgebra coherence, in exact arithmetic."""

from .monoid import MonoidSpec
from .contmatrix import ContMatrix
from .grocat import GroArrow, TruncatedCategory
from .exactla import ChainComplex, ChainMap, Mat
from .janus import JanusData
from .bialg import GradedBialgebra

__all__ = [
    "MonoidSpec",
    "ContMatrix",
    "GroArrow",
    "TruncatedCategory",
    "ChainComplex",
    "ChainMap",
    "Mat",
    "JanusData",
    "GradedBialgebra",
]

__version__ = "0.1.0"
