"""
Magnetic Surface Lab - Observable Model

Smooth test observables on the frame bundle of the surface: a radial bump
around a reduced center, optionally modulated by cos(q·fiber angle).
"""

import math
from dataclasses import dataclass
from typing import Optional

from config.settings import Settings
from core.errors import DomainError
from core.models.sl2 import HalfPlanePoint, I_POINT


@dataclass(frozen=True)
class Observable:
    """Bump observable of radius r0 centered at a reduced point."""

    center: HalfPlanePoint = I_POINT
    r0: float = 1.0
    fiber_mode: int = 0
    constant: Optional[float] = None

    def __post_init__(self):
        """Validate radius, fiber mode and center."""
        object.__setattr__(self, 'center', HalfPlanePoint(*self.center).validate("Observable"))
        max_radius = Settings.OBSERVABLE_CONFIG["max_radius"]
        if not (0.0 < self.r0 <= max_radius):
            raise DomainError(f"r0 must lie in (0, {max_radius}], got {self.r0}", "Observable")
        if self.fiber_mode < 0:
            raise DomainError(f"fiber mode must be non-negative, got {self.fiber_mode}", "Observable")
        if self.constant is not None and not math.isfinite(self.constant):
            raise DomainError(f"constant must be finite, got {self.constant}", "Observable")

    @classmethod
    def constant_observable(cls, value: float) -> 'Observable':
        """The observable equal to `value` everywhere."""
        return cls(constant=float(value))

    @property
    def is_constant(self) -> bool:
        """True for constant observables."""
        return self.constant is not None

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        data = {
            'center_re': self.center.re,
            'center_im': self.center.im,
            'r0': self.r0,
            'fiber_mode': self.fiber_mode,
        }
        if self.constant is not None:
            data['constant'] = self.constant
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'Observable':
        """Create from dictionary."""
        return cls(
            center=HalfPlanePoint(data.get('center_re', 0.0), data.get('center_im', 1.0)),
            r0=data.get('r0', 1.0),
            fiber_mode=int(data.get('fiber_mode', 0)),
            constant=data.get('constant'),
        )
