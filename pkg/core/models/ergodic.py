"""
Magnetic Surface Lab - Equidistribution Models

Tables of sup-errors of Birkhoff averages over time horizons and the
power-law decay fits read off them.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, NamedTuple, Tuple

import numpy as np
import pandas as pd

from core.errors import DomainError


@dataclass(frozen=True)
class DecayTable:
    """Horizons T_j with the sup over sampled states of |Birkhoff - Liouville|."""

    horizons: Tuple[float, ...]
    sup_errors: Tuple[float, ...]
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        """Check lengths, ordering and signs."""
        object.__setattr__(self, 'horizons', tuple(float(t) for t in self.horizons))
        object.__setattr__(self, 'sup_errors', tuple(float(e) for e in self.sup_errors))
        if len(self.horizons) != len(self.sup_errors):
            raise DomainError(f"{len(self.horizons)} horizons but {len(self.sup_errors)} errors",
                              "DecayTable")
        if any(b <= a for a, b in zip(self.horizons, self.horizons[1:])):
            raise DomainError("horizons must be strictly increasing", "DecayTable")
        if any(e < 0.0 for e in self.sup_errors):
            raise DomainError("sup errors must be non-negative", "DecayTable")

    def __len__(self) -> int:
        return len(self.horizons)

    def to_frame(self) -> pd.DataFrame:
        """Table as a DataFrame with columns (T, sup_error)."""
        return pd.DataFrame({'T': np.array(self.horizons), 'sup_error': np.array(self.sup_errors)})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, metadata: Dict[str, Any] = None) -> 'DecayTable':
        """Create from a DataFrame with columns (T, sup_error).

        Rows are sorted by horizon first.
        """
        missing = {'T', 'sup_error'} - set(frame.columns)
        if missing:
            raise DomainError(f"decay table is missing columns {sorted(missing)}", "DecayTable")
        ordered = frame.sort_values('T')
        return cls(horizons=tuple(ordered['T']), sup_errors=tuple(ordered['sup_error']),
                   metadata=dict(metadata or {}))

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            'horizons': list(self.horizons),
            'sup_errors': list(self.sup_errors),
            'metadata': dict(self.metadata),
        }


class ThetaFit(NamedTuple):
    """Decay exponent theta with e_j ~ C·T_j^-theta and the fit quality."""

    theta: float
    r_squared: float
    intercept: float
    n_rows: int

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return self._asdict()
