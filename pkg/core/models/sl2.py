"""
Magnetic Surface Lab - sl(2,R) and PSL(2,R) Value Types

Traceless 2x2 generators, unit-determinant frames modulo sign, the
elliptic/parabolic/hyperbolic trichotomy and upper half-plane points.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np

from config.settings import Settings
from core.errors import DomainError


class HalfPlanePoint(NamedTuple):
    """Point of the upper half-plane stored as a (re, im) pair."""

    re: float
    im: float

    def validate(self, operation: str = "") -> 'HalfPlanePoint':
        """Reject points off the open upper half-plane.

        Args:
            operation: Operation name for the error message

        Returns:
            HalfPlanePoint: The point itself
        """
        if not (self.im > 0.0) or not math.isfinite(self.re):
            raise DomainError(f"point {tuple(self)} is not in the upper half-plane", operation)
        return self

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'re': self.re, 'im': self.im}


I_POINT = HalfPlanePoint(0.0, 1.0)


class ElementClass(Enum):
    """Conjugacy type of a one-parameter subgroup."""

    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    IDENTITY = "identity"

    def __str__(self) -> str:
        """Return the tag."""
        return self.value

    @classmethod
    def from_determinant(cls, det: float, threshold: float = None) -> 'ElementClass':
        """Classify a nonzero generator by the sign of its determinant.

        Args:
            det: Determinant of the generator
            threshold: |det| below this counts as zero

        Returns:
            ElementClass: Elliptic for det > 0, hyperbolic for det < 0
        """
        if threshold is None:
            threshold = Settings.TOLERANCES["parabolic"]
        if abs(det) < threshold:
            return cls.PARABOLIC
        return cls.ELLIPTIC if det > 0 else cls.HYPERBOLIC

    def energy_regime(self) -> str:
        """Name of the energy regime this class corresponds to for magnetic flows."""
        return {
            ElementClass.ELLIPTIC: "low-energy",
            ElementClass.PARABOLIC: "critical",
            ElementClass.HYPERBOLIC: "high-energy",
            ElementClass.IDENTITY: "degenerate",
        }[self]


@dataclass(frozen=True)
class AlgebraElement:
    """Traceless matrix [[a11, a12], [a21, -a11]] in sl(2,R)."""

    a11: float
    a12: float
    a21: float

    @property
    def a22(self) -> float:
        """The (2,2) entry, fixed by tracelessness."""
        return -self.a11

    def det(self) -> float:
        """Exact 2x2 determinant -a11^2 - a12*a21."""
        return -self.a11 * self.a11 - self.a12 * self.a21

    def is_zero(self) -> bool:
        """Check for the zero element."""
        return self.a11 == 0.0 and self.a12 == 0.0 and self.a21 == 0.0

    def as_array(self) -> np.ndarray:
        """Return the 2x2 matrix as a numpy array."""
        return np.array([[self.a11, self.a12], [self.a21, -self.a11]], dtype=float)

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> 'AlgebraElement':
        """Build from a 2x2 array, dropping any trace part.

        Args:
            matrix: 2x2 array

        Returns:
            AlgebraElement: Traceless projection of the matrix
        """
        half_trace = 0.5 * (matrix[0, 0] + matrix[1, 1])
        return cls(float(matrix[0, 0] - half_trace), float(matrix[0, 1]), float(matrix[1, 0]))

    def __add__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return AlgebraElement(self.a11 + other.a11, self.a12 + other.a12, self.a21 + other.a21)

    def __sub__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return AlgebraElement(self.a11 - other.a11, self.a12 - other.a12, self.a21 - other.a21)

    def __neg__(self) -> 'AlgebraElement':
        return AlgebraElement(-self.a11, -self.a12, -self.a21)

    def __mul__(self, scalar: float) -> 'AlgebraElement':
        return AlgebraElement(scalar * self.a11, scalar * self.a12, scalar * self.a21)

    __rmul__ = __mul__

    def max_abs_diff(self, other: 'AlgebraElement') -> float:
        """Entrywise sup-distance to another element."""
        return max(abs(self.a11 - other.a11), abs(self.a12 - other.a12), abs(self.a21 - other.a21))

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'a11': self.a11, 'a12': self.a12, 'a21': self.a21}


# Geodesic, rotation and horocyclic generators
X = AlgebraElement(0.5, 0.0, 0.0)
V = AlgebraElement(0.0, 0.5, -0.5)
U_PLUS = AlgebraElement(0.0, 1.0, 0.0)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Unit-determinant 2x2 matrix, compared modulo sign."""

    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self):
        """Renormalize determinant drift by the scalar 1/sqrt(det)."""
        det = self.m11 * self.m22 - self.m12 * self.m21
        if not det > 0.0:
            raise DomainError(f"determinant {det} is not positive", "GroupElement")
        if abs(det - 1.0) > Settings.TOLERANCES["det_drift"]:
            scale = 1.0 / math.sqrt(det)
            object.__setattr__(self, 'm11', self.m11 * scale)
            object.__setattr__(self, 'm12', self.m12 * scale)
            object.__setattr__(self, 'm21', self.m21 * scale)
            object.__setattr__(self, 'm22', self.m22 * scale)

    @classmethod
    def identity(cls) -> 'GroupElement':
        """The identity element."""
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> 'GroupElement':
        """Build from a 2x2 array."""
        return cls(float(matrix[0, 0]), float(matrix[0, 1]), float(matrix[1, 0]), float(matrix[1, 1]))

    def as_array(self) -> np.ndarray:
        """Return the 2x2 matrix as a numpy array."""
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=float)

    def entries(self) -> Tuple[float, float, float, float]:
        """Entries in row-major order."""
        return (self.m11, self.m12, self.m21, self.m22)

    def det(self) -> float:
        """Determinant (1 up to rounding)."""
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> float:
        """Trace of this representative (sign depends on the representative)."""
        return self.m11 + self.m22

    def __matmul__(self, other: 'GroupElement') -> 'GroupElement':
        return GroupElement(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self) -> 'GroupElement':
        """Inverse (the adjugate, since det = 1)."""
        return GroupElement(self.m22, -self.m12, -self.m21, self.m11)

    def canonical(self) -> Tuple[float, float, float, float]:
        """Sign representative: first of (m11, m12, m21) above threshold made positive."""
        threshold = Settings.TOLERANCES["sign_canonical"]
        for entry in (self.m11, self.m12, self.m21):
            if abs(entry) > threshold:
                if entry < 0.0:
                    return (-self.m11, -self.m12, -self.m21, -self.m22)
                break
        return self.entries()

    def projective_distance(self, other: 'GroupElement') -> float:
        """Entrywise sup-distance in PSL (minimum over the two signs)."""
        plus = max(abs(a - b) for a, b in zip(self.entries(), other.entries()))
        minus = max(abs(a + b) for a, b in zip(self.entries(), other.entries()))
        return min(plus, minus)

    def projectively_equal(self, other: 'GroupElement', tol: float = None) -> bool:
        """Compare as elements of PSL(2,R)."""
        if tol is None:
            tol = Settings.TOLERANCES["projective_equal"]
        return self.projective_distance(other) <= tol

    def is_identity(self, tol: float = None) -> bool:
        """True when this is +-I in PSL."""
        return self.projectively_equal(GroupElement.identity(), tol)

    def _key(self) -> Tuple[float, ...]:
        return tuple(round(entry, 9) + 0.0 for entry in self.canonical())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {'m11': self.m11, 'm12': self.m12, 'm21': self.m21, 'm22': self.m22}

    @classmethod
    def from_dict(cls, data: dict) -> 'GroupElement':
        """Create from dictionary."""
        return cls(data['m11'], data['m12'], data['m21'], data['m22'])
