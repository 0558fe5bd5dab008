"""
Magnetic Surface Lab - Landau Level Models

Exact Landau levels of the magnetic Laplacian at tensor power k and the
finite diagonal model of the averaged operator with spectrum m_j / k.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from core.errors import DomainError
from utils.number_format import format_rational, to_fraction


@dataclass(frozen=True)
class LandauLevel:
    """Eigenvalue lambda_{k,m} = kB(m + 1/2) - m(m + 1)/2 with 0 <= m < N_k."""

    k: int
    m: int
    B: Fraction
    value: Fraction
    n_levels: int

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            'k': self.k,
            'm': self.m,
            'B': format_rational(self.B),
            'lambda': format_rational(self.value),
            'lambda_float': float(self.value),
            'N_k': self.n_levels,
        }


@dataclass(frozen=True)
class WeinsteinModel:
    """Diagonal model k^-1 · sum m_j Pi_j with caller-supplied multiplicities.

    Levels must be non-negative integers unless strict is False, which
    admits arbitrary rationals for negative-control diagnostics.
    """

    k: int
    levels: Tuple[Fraction, ...]
    multiplicities: Optional[Tuple[int, ...]] = None
    strict: bool = True

    def __post_init__(self):
        """Normalize and validate the levels."""
        if self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}", "WeinsteinModel")
        levels = tuple(to_fraction(level) for level in self.levels)
        if not levels:
            raise DomainError("the model needs at least one level", "WeinsteinModel")
        if self.strict and any(level.denominator != 1 or level < 0 for level in levels):
            raise DomainError("levels must be non-negative integers", "WeinsteinModel")
        multiplicities = self.multiplicities or (1,) * len(levels)
        if len(multiplicities) != len(levels) or any(mult < 1 for mult in multiplicities):
            raise DomainError("one positive multiplicity per level is required", "WeinsteinModel")
        object.__setattr__(self, 'levels', levels)
        object.__setattr__(self, 'multiplicities', tuple(int(mult) for mult in multiplicities))

    @classmethod
    def diagnostic(cls, k: int, levels, multiplicities=None) -> 'WeinsteinModel':
        """Model that accepts non-integer levels (spectrum outside k^-1 Z)."""
        return cls(k=k, levels=tuple(levels), multiplicities=multiplicities, strict=False)

    @property
    def dimension(self) -> int:
        """Size of the diagonal matrix."""
        return sum(self.multiplicities)

    def diagonal_levels(self) -> List[Fraction]:
        """Level m_j repeated by its multiplicity, in order."""
        out: List[Fraction] = []
        for level, mult in zip(self.levels, self.multiplicities):
            out.extend([level] * mult)
        return out

    def spectrum(self) -> List[Fraction]:
        """Eigenvalues m_j / k of A, one per diagonal entry."""
        return [level / self.k for level in self.diagonal_levels()]

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            'k': self.k,
            'levels': [format_rational(level) for level in self.levels],
            'multiplicities': list(self.multiplicities),
        }
