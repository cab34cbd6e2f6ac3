"""Entanglement dynamics of two qubit-oscillator pairs with extra couplings."""

from .errors import (
    ConfigError,
    DimensionMismatchError,
    HqsError,
    InvalidTruncationError,
    NumericalError,
    StructureError,
)
from .hilbert import HilbertSpec
from .model import SystemParams
from .states import InitialStateSpec, OscillatorSpec, QubitPairSpec

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionMismatchError",
    "HilbertSpec",
    "HqsError",
    "InitialStateSpec",
    "InvalidTruncationError",
    "NumericalError",
    "OscillatorSpec",
    "QubitPairSpec",
    "StructureError",
    "SystemParams",
]
