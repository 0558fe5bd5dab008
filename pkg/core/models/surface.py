"""
Magnetic Surface Lab - Surface Group Models

The genus-2 surface group as eight side-pairing generators and its
Dirichlet fundamental domain about i.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from core.models.sl2 import GroupElement, HalfPlanePoint, I_POINT


@dataclass(frozen=True)
class SurfaceGroup:
    """Cocompact Fuchsian group given by generators g_0..g_7, g_{k+4} = g_k^-1."""

    generators: Tuple[GroupElement, ...]
    genus: int = 2
    translation_length: float = 0.0

    def generator(self, k: int) -> GroupElement:
        """Generator g_k with the index taken mod 8."""
        return self.generators[k % len(self.generators)]

    def inverse_index(self, k: int) -> int:
        """Index of g_k^-1 among the generators."""
        return (k + len(self.generators) // 2) % len(self.generators)

    def generator_array(self) -> np.ndarray:
        """Generators stacked as an (8, 2, 2) array."""
        return np.stack([g.as_array() for g in self.generators])

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            'genus': self.genus,
            'translation_length': self.translation_length,
            'generators': [g.to_dict() for g in self.generators],
        }


@dataclass(frozen=True)
class FundamentalDomain:
    """Dirichlet domain about i: points closer to i than to every g_k·i."""

    neighbor_images: Tuple[HalfPlanePoint, ...]
    vertex_radius: float
    center: HalfPlanePoint = I_POINT
    _neighbor_re: np.ndarray = field(init=False, repr=False, compare=False)
    _neighbor_im: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Cache neighbor coordinates for the batch kernels."""
        object.__setattr__(self, '_neighbor_re', np.array([p.re for p in self.neighbor_images]))
        object.__setattr__(self, '_neighbor_im', np.array([p.im for p in self.neighbor_images]))

    @property
    def neighbor_re(self) -> np.ndarray:
        """Real parts of the neighbor images g_k·i."""
        return self._neighbor_re

    @property
    def neighbor_im(self) -> np.ndarray:
        """Imaginary parts of the neighbor images g_k·i."""
        return self._neighbor_im
