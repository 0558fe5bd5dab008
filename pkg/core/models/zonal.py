"""
Magnetic Surface Lab - Zonal Torus Models

The invariant torus swept by the closed sub-critical orbits through one
base point, and radial histograms of its projection to the surface.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from core.errors import DomainError
from core.models.magnetic import MagneticParams
from core.models.sl2 import GroupElement


@dataclass(frozen=True)
class ZonalTorus:
    """Orbits anchor·R(theta)·exp(tY) for theta in [0, 2 pi) and t in [0, t*)."""

    params: MagneticParams
    period: float
    anchor: GroupElement = field(default_factory=GroupElement.identity)

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            'params': self.params.to_dict(),
            'period': self.period,
            'anchor': self.anchor.to_dict(),
        }


@dataclass
class RadialHistogram:
    """Counts of the distance from the anchor base point over fixed bins."""

    edges: np.ndarray
    counts: np.ndarray
    n: int
    seed: Optional[int] = None

    def __post_init__(self):
        """Check shapes."""
        self.edges = np.asarray(self.edges, dtype=float)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.edges.ndim != 1 or self.counts.shape != (self.edges.size - 1,):
            raise DomainError("histogram needs one more edge than bins", "RadialHistogram")
        if self.n < 1:
            raise DomainError(f"histogram needs samples, got n={self.n}", "RadialHistogram")

    @property
    def widths(self) -> np.ndarray:
        """Bin widths."""
        return np.diff(self.edges)

    @property
    def midpoints(self) -> np.ndarray:
        """Bin centers r_mid."""
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def pdf(self) -> np.ndarray:
        """Empirical density counts / (n · width)."""
        return self.counts / (self.n * self.widths)

    def mass(self) -> float:
        """Total probability mass (1 when every sample fell in a bin)."""
        return float(np.sum(self.counts)) / self.n

    def to_frame(self) -> pd.DataFrame:
        """Histogram as (r_mid, pdf, count) rows."""
        return pd.DataFrame({'r_mid': self.midpoints, 'pdf': self.pdf, 'count': self.counts})

    @classmethod
    def from_pdf(cls, edges: np.ndarray, pdf: np.ndarray, n: int = 1_000_000) -> 'RadialHistogram':
        """Histogram whose counts realize a given density (for constructed inputs)."""
        edges = np.asarray(edges, dtype=float)
        counts = np.rint(np.asarray(pdf, dtype=float) * n * np.diff(edges)).astype(np.int64)
        return cls(edges=edges, counts=counts, n=n)


class BlowupFit(NamedTuple):
    """Fit of the area density to c · r^-q near the anchor."""

    q: float
    c: float
    window: float
    n_bins: int
    n: int
    seed: Optional[int]

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return self._asdict()
