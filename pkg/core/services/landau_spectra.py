"""
Magnetic Surface Lab - Landau Level Arithmetic

Level formulas are evaluated in exact rational arithmetic so the algebraic
identities are checked as identities. The symbol functions beta and a are
ordinary floats.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd

from core.errors import DomainError
from core.models.landau import LandauLevel, WeinsteinModel
from utils.number_format import Number, format_rational, to_fraction
from utils.seeding import ordered_map

logger = logging.getLogger(__name__)


def quantization_check(B: Number, genus: int = 2) -> bool:
    """True iff 2B(genus - 1) is an integer (exact for rational input).

    Args:
        B: Field strength
        genus: Surface genus (>= 2)

    Returns:
        bool: Quantization condition
    """
    if genus < 2:
        raise DomainError(f"genus must be at least 2, got {genus}", "quantization_check")
    return (2 * to_fraction(B) * (genus - 1)).denominator == 1


def _quantized_field(B: Number, genus: int, operation: str) -> Fraction:
    B = to_fraction(B)
    if B <= 0:
        raise DomainError(f"field strength must be positive, got {B}", operation)
    if not quantization_check(B, genus):
        raise DomainError(f"2B(g-1) = {2 * B * (genus - 1)} is not an integer", operation)
    return B


def level_count(k: int, B: Number) -> int:
    """N_k = floor(kB), the number of explicit levels."""
    return math.floor(k * to_fraction(B))


def _check_index(k: int, m: int, B: Fraction, operation: str) -> int:
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}", operation)
    n_levels = math.floor(k * B)
    if not 0 <= m < n_levels:
        raise DomainError(f"m={m} outside 0 <= m < N_k={n_levels}", operation)
    return n_levels


def _lambda(k: int, m: int, B: Fraction) -> Fraction:
    return k * B * (m + Fraction(1, 2)) - Fraction(m * (m + 1), 2)


def eigenvalue(k: int, m: int, B: Number, genus: int = 2) -> Fraction:
    """Exact Landau level lambda_{k,m} = kB(m + 1/2) - m(m + 1)/2.

    Args:
        k: Tensor power (>= 1)
        m: Level index, 0 <= m < floor(kB)
        B: Quantized field strength
        genus: Surface genus

    Returns:
        Fraction: The eigenvalue
    """
    B = _quantized_field(B, genus, "eigenvalue")
    _check_index(k, m, B, "eigenvalue")
    return _lambda(k, m, B)


def landau_level(k: int, m: int, B: Number, genus: int = 2) -> LandauLevel:
    """eigenvalue wrapped with its indices."""
    B = _quantized_field(B, genus, "eigenvalue")
    n_levels = _check_index(k, m, B, "eigenvalue")
    return LandauLevel(k=k, m=m, B=B, value=_lambda(k, m, B), n_levels=n_levels)


def top_level(k: int, B: Number, genus: int = 2) -> Fraction:
    """Exact lambda_{k,N_k-1} / k^2."""
    B = _quantized_field(B, genus, "top_level")
    n_levels = math.floor(k * B)
    if k < 1 or n_levels < 1:
        raise DomainError(f"no levels for k={k}, B={B}", "top_level")
    return _lambda(k, n_levels - 1, B) / (k * k)


def scaled_top_level(k: int, B: Number, genus: int = 2) -> float:
    """lambda_{k,N_k-1} / k^2, within B/k of the critical energy B^2/2."""
    return float(top_level(k, B, genus))


def beta(s: float, B: float) -> float:
    """beta(s) = Bs - s^2/2 on 0 <= s <= B."""
    if not 0.0 <= s <= B:
        raise DomainError(f"s={s} outside [0, B={B}]", "beta")
    return B * s - 0.5 * s * s


def symbol_a(p: float, B: float) -> float:
    """Inverse of beta on [0, E_c]: B - sqrt(B^2 - 2p).

    Evaluated as 2p / (B + sqrt(B^2 - 2p)) to avoid cancellation near p = 0.
    """
    critical = 0.5 * B * B
    if not 0.0 <= p <= critical:
        raise DomainError(f"p={p} outside [0, E_c={critical}]", "symbol_a")
    return 2.0 * p / (B + math.sqrt(max(0.0, B * B - 2.0 * p)))


def weinstein_identity_residual(k: int, m: int, B: Number, genus: int = 2) -> Fraction:
    """Exact residual of k^-2 lambda_{k,m} = B(a + 1/(2k)) - a(a + 1/k)/2 with a = m/k.

    Returns:
        Fraction: Zero for every valid (k, m, B)
    """
    B = _quantized_field(B, genus, "weinstein_identity_residual")
    _check_index(k, m, B, "weinstein_identity_residual")
    alpha = Fraction(m, k)
    inverse_k = Fraction(1, k)
    rhs = B * (alpha + inverse_k / 2) - alpha * (alpha + inverse_k) / 2
    return _lambda(k, m, B) / (k * k) - rhs


def _sweep_block(task: Tuple[str, int, int, int]) -> Dict[str, int]:
    B_text, genus, k_start, k_stop = task
    B = to_fraction(B_text)
    checked = nonzero = violations = 0
    for k in range(k_start, k_stop):
        previous = None
        for m in range(math.floor(k * B)):
            value = _lambda(k, m, B)
            alpha = Fraction(m, k)
            rhs = B * (alpha + Fraction(1, 2 * k)) - alpha * (alpha + Fraction(1, k)) / 2
            if value / (k * k) - rhs != 0:
                nonzero += 1
            if previous is not None and value - previous != k * B - m:
                violations += 1
            previous = value
            checked += 1
    return {'checked': checked, 'nonzero_residuals': nonzero, 'monotonicity_violations': violations}


def identity_sweep(k_max: int, B_values: Iterable[Number], genus: int = 2, shards: int = 1) -> dict:
    """Check the level identity and the level increments kB - m for all k <= k_max.

    Args:
        k_max: Largest tensor power
        B_values: Quantized field strengths
        genus: Surface genus
        shards: Worker processes

    Returns:
        dict: Per-field counts and an overall all_zero flag
    """
    if k_max < 1:
        raise DomainError(f"k_max must be positive, got {k_max}", "identity_sweep")
    fields = [_quantized_field(B, genus, "identity_sweep") for B in B_values]
    if not fields:
        raise DomainError("at least one field strength is required", "identity_sweep")

    block = max(1, k_max // 8)
    per_field = []
    for B in fields:
        tasks = [(format_rational(B), genus, start, min(start + block, k_max + 1))
                 for start in range(1, k_max + 1, block)]
        totals = {'checked': 0, 'nonzero_residuals': 0, 'monotonicity_violations': 0}
        for counts in ordered_map(_sweep_block, tasks, shards):
            for key in totals:
                totals[key] += counts[key]
        per_field.append({'B': format_rational(B), **totals})
        logger.info(f"Identity sweep B={B}: {totals['checked']} levels, "
                    f"{totals['nonzero_residuals']} nonzero residuals")

    return {
        'k_max': k_max,
        'genus': genus,
        'fields': per_field,
        'levels_checked': sum(entry['checked'] for entry in per_field),
        'all_zero': all(entry['nonzero_residuals'] == 0 and entry['monotonicity_violations'] == 0
                        for entry in per_field),
    }


def levels_table(k: int, B: Number, genus: int = 2) -> pd.DataFrame:
    """All explicit levels at power k as (k, m, numerator, denominator, lambda_float)."""
    B = _quantized_field(B, genus, "levels_table")
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}", "levels_table")
    rows = []
    for m in range(math.floor(k * B)):
        value = _lambda(k, m, B)
        rows.append({'k': k, 'm': m, 'numerator': value.numerator,
                     'denominator': value.denominator, 'lambda_float': float(value)})
    return pd.DataFrame(rows, columns=['k', 'm', 'numerator', 'denominator', 'lambda_float'])


def nearest_level(k: int, B: Number, E: Number, genus: int = 2) -> int:
    """Index m with k^-2 lambda_{k,m} closest to E (ties go to the lower m).

    Args:
        k: Tensor power
        B: Quantized field strength
        E: Target energy in [0, E_c]

    Returns:
        int: Level index
    """
    B = _quantized_field(B, genus, "nearest_level")
    E = to_fraction(E)
    if not 0 <= E <= B * B / 2:
        raise DomainError(f"E={E} outside [0, E_c={B * B / 2}]", "nearest_level")
    n_levels = math.floor(k * B)
    if k < 1 or n_levels < 1:
        raise DomainError(f"no levels for k={k}, B={B}", "nearest_level")
    return min(range(n_levels), key=lambda m: (abs(_lambda(k, m, B) / (k * k) - E), m))


# =============================================================================
# DIAGONAL MODEL
# =============================================================================

def _phases(model: WeinsteinModel, m: int, nodes: int) -> np.ndarray:
    # phase index j·(m_l - m) mod M for each node j and diagonal entry l
    levels = model.diagonal_levels()
    j = np.arange(nodes)
    if all(level.denominator == 1 for level in levels):
        shifts = np.array([int(level) - m for level in levels], dtype=np.int64)
        return 2.0 * math.pi * ((j[:, None] * shifts[None, :]) % nodes) / nodes
    shifts = np.array([float(level - m) for level in levels])
    return 2.0 * math.pi * np.mod(j[:, None] * shifts[None, :], nodes) / nodes


def projector(model: WeinsteinModel, m: int) -> np.ndarray:
    """Discrete Fourier projector onto the level m of the model.

    Averages e^{-i m t_j} e^{i t_j k A} over t_j = 2 pi j / M with
    M = max(levels, m) + 2 nodes, which is exact by orthogonality of roots
    of unity.

    Args:
        model: Diagonal model
        m: Level (>= 0)

    Returns:
        np.ndarray: Complex diagonal matrix (0/1 on the diagonal)
    """
    if m < 0:
        raise DomainError(f"level must be non-negative, got {m}", "projector")
    nodes = int(math.floor(max(max(model.levels), m))) + 2
    phases = _phases(model, m, nodes)
    diagonal = np.exp(1j * phases).mean(axis=0)
    return np.diag(diagonal)


def projector_check(model: WeinsteinModel) -> dict:
    """Idempotence, orthogonality and completeness errors of the model's projectors."""
    present = sorted({int(level) for level in model.levels})
    projectors = {m: projector(model, m) for m in present}
    identity = np.eye(model.dimension)
    idempotence = max(float(np.max(np.abs(P @ P - P))) for P in projectors.values())
    orthogonality = 0.0
    for a in present:
        for b in present:
            if a < b:
                orthogonality = max(orthogonality, float(np.max(np.abs(projectors[a] @ projectors[b]))))
    completeness = float(np.max(np.abs(sum(projectors.values()) - identity)))
    indicator = 0.0
    for m, P in projectors.items():
        expected = np.diag([1.0 if level == m else 0.0 for level in model.diagonal_levels()])
        indicator = max(indicator, float(np.max(np.abs(P - expected))))
    return {
        'model': model.to_dict(),
        'levels_checked': present,
        'indicator_error': indicator,
        'idempotence_error': idempotence,
        'orthogonality_error': orthogonality,
        'completeness_error': completeness,
        'circle_periodicity': circle_periodicity(model),
    }


def circle_periodicity(model: WeinsteinModel) -> float:
    """Max entrywise deviation of exp(2 pi i k A) from the identity.

    Phases are reduced exactly: only the fractional part of each k·(m_j/k)
    enters, so integer spectra give exactly zero.
    """
    fractional = [level - math.floor(level) for level in model.diagonal_levels()]
    return max(abs(complex(math.cos(2.0 * math.pi * float(f)), math.sin(2.0 * math.pi * float(f))) - 1.0)
               for f in fractional)


def spectrum_summary(model: WeinsteinModel) -> List[str]:
    """Eigenvalues of A as "num/den" strings."""
    return [format_rational(value) for value in model.spectrum()]
