"""
Magnetic Surface Lab - Magnetic Flow Models

Field/energy parameters of a constant-field magnetic flow and phase states
on an energy shell, represented by reduced frames.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from config.settings import Settings
from core.errors import DomainError
from core.models.sl2 import ElementClass, GroupElement


@dataclass(frozen=True)
class MagneticParams:
    """Magnetic field strength B > 0, energy E >= 0 and surface genus."""

    B: float
    E: float
    genus: int = 2

    def __post_init__(self):
        """Reject parameters outside the physical range."""
        if not (self.B > 0.0) or not math.isfinite(self.B):
            raise DomainError(f"field strength must be positive, got B={self.B}", "MagneticParams")
        if not (self.E >= 0.0) or not math.isfinite(self.E):
            raise DomainError(f"energy must be non-negative, got E={self.E}", "MagneticParams")
        if self.genus < 2:
            raise DomainError(f"genus must be at least 2, got {self.genus}", "MagneticParams")

    @property
    def critical_energy(self) -> float:
        """E_c = B^2 / 2."""
        return 0.5 * self.B * self.B

    @property
    def discriminant(self) -> float:
        """B^2 - 2E, four times the generator determinant."""
        return self.B * self.B - 2.0 * self.E

    @property
    def regime(self) -> ElementClass:
        """Elliptic below E_c, parabolic at E_c, hyperbolic above."""
        return ElementClass.from_determinant(0.25 * self.discriminant)

    @property
    def period_scale(self) -> float:
        """T_E = |B^2 - 2E|^(-1/2); undefined at the critical energy."""
        if self.regime is ElementClass.PARABOLIC:
            raise DomainError("T_E is undefined at the critical energy", "period_scale")
        return 1.0 / math.sqrt(abs(self.discriminant))

    @property
    def quantized(self) -> bool:
        """True when 2B(genus - 1) is an integer."""
        flux = 2.0 * self.B * (self.genus - 1)
        return abs(flux - round(flux)) <= Settings.TOLERANCES["quantization"]

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'B': self.B, 'E': self.E, 'genus': self.genus}

    @classmethod
    def from_dict(cls, data: dict) -> 'MagneticParams':
        """Create from dictionary."""
        return cls(B=data['B'], E=data['E'], genus=data.get('genus', 2))


@dataclass(frozen=True)
class PhaseState:
    """Point of the energy shell: a reduced frame with momentum along its direction."""

    frame: GroupElement
    params: MagneticParams

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'frame': self.frame.to_dict(), 'params': self.params.to_dict()}


class GrowthFit(NamedTuple):
    """Fitted exponential rate and polynomial degree of adjoint growth."""

    rate: float
    poly_degree: float
    n_points: int

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return self._asdict()


class ConjugacyResult(NamedTuple):
    """Outcome of checking exp(tY) against its normal form."""

    element_class: ElementClass
    scale: float
    residual: float

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'element_class': str(self.element_class), 'scale': self.scale, 'residual': self.residual}
