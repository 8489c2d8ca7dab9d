"""Model parameters and derived quantities for the anisotropic Rabi model.

Conventions: the mode frequency is fixed to 1 and all energies are in
units of it.  ``g`` is the rotating-wave coupling, ``r`` the ratio of
counter-rotating to rotating coupling, so the two couplings are
(g, r*g).  Everything downstream consumes the derived quantities

    beta        = g * sqrt(r)
    lambda_pm   = g^2 (1 +- r^2) / 2
    pole_gap    = lambda_plus - beta^2 = g^2 (1 - r)^2 / 2

and the spectral parameter x = E + lambda_plus, whose nonnegative
integer values are the pole lines of the G-functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Literal


class Parity(IntEnum):
    """Eigenvalue of exp(i*pi*N) with N = a^dag a + sigma_+ sigma_-."""

    EVEN = 1
    ODD = -1

    def flipped(self) -> "Parity":
        return Parity(-self.value)


# Classification labels for spectral points, as emitted in CSV output.
REGULAR = "regular"
DEGENERATE = "degenerate-exceptional"
NONDEGENERATE = "nondegenerate-exceptional"

Classification = Literal[
    "regular", "degenerate-exceptional", "nondegenerate-exceptional"
]

#: Below this anisotropy the displaced-basis expansion degenerates and the
#: Jaynes-Cummings / ED paths take over.
R_MIN_GFUNCTION = 1e-3

#: Below this coupling the model is treated as exactly decoupled.
G_DECOUPLED = 1e-6


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings: qubit splitting, RW coupling, anisotropy ratio."""

    delta: float
    g: float
    r: float

    def __post_init__(self) -> None:
        for name in ("delta", "g", "r"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.g < 0:
            raise ValueError(f"g must be nonnegative, got {self.g}")
        if self.r < 0:
            raise ValueError(f"r must be nonnegative, got {self.r}")

    def with_g(self, g: float) -> "ModelParams":
        return ModelParams(self.delta, g, self.r)


@dataclass(frozen=True)
class DerivedParams:
    beta: float
    lambda_plus: float
    lambda_minus: float
    pole_gap: float


def derive_params(p: ModelParams) -> DerivedParams:
    """Compute displacement and coupling invariants from the raw parameters.

    ``pole_gap`` is formed as g^2 (1-r)^2 / 2 rather than as the difference
    lambda_plus - beta^2, which would cancel catastrophically near r = 1.
    """
    g2 = p.g * p.g
    return DerivedParams(
        beta=p.g * math.sqrt(p.r),
        lambda_plus=g2 * (1.0 + p.r * p.r) / 2.0,
        lambda_minus=g2 * (1.0 - p.r * p.r) / 2.0,
        pole_gap=g2 * (1.0 - p.r) ** 2 / 2.0,
    )


def energy_x_map(
    dp: DerivedParams, value: float, direction: Literal["to_x", "to_energy"]
) -> float:
    """Convert between energy E and spectral parameter x = E + lambda_plus."""
    if direction == "to_x":
        return value + dp.lambda_plus
    if direction == "to_energy":
        return value - dp.lambda_plus
    raise ValueError(f"direction must be 'to_x' or 'to_energy', got {direction!r}")


@dataclass(frozen=True)
class SpectralPoint:
    """One (g, E) record of the assembled spectrum.

    ``parity`` is None for degenerate-exceptional points, where the
    eigenstates have no fixed parity.  ``x`` and ``energy`` always satisfy
    energy + lambda_plus = x up to round-off.
    """

    g: float
    x: float
    energy: float
    parity: Parity | None
    level_index: int
    classification: Classification
    converged: bool = True
