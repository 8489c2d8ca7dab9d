"""Spectral solver for the anisotropic quantum Rabi model.

Regular spectrum from G-function zeros, exceptional spectrum (level
crossings and lifted poles) from closed conditions, with a built-in
truncated-Fock exact-diagonalization oracle for verification.
"""

from .kernels import BACKEND
from .params import (
    DEGENERATE,
    NONDEGENERATE,
    REGULAR,
    DerivedParams,
    ModelParams,
    Parity,
    SpectralPoint,
    derive_params,
    energy_x_map,
)

__all__ = [
    "BACKEND",
    "DEGENERATE",
    "NONDEGENERATE",
    "REGULAR",
    "DerivedParams",
    "ModelParams",
    "Parity",
    "SpectralPoint",
    "derive_params",
    "energy_x_map",
]

__version__ = "0.1.0"
