"""
Magnetic Surface Lab - Observable Evaluation

Observables are evaluated on reduced frames: the base part depends on the
quotient distance to the center, the fiber part on the angle between the
frame direction and the upward vertical at the reduced base point,
phi = -2·atan2(m21, m22). Reducing first makes every value depend on the
orbit of the frame only.
"""

import logging
import math
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy import integrate

from config.settings import Settings
from core.errors import DomainError
from core.models.magnetic import PhaseState
from core.models.observable import Observable
from core.models.sl2 import HalfPlanePoint
from core.services.fuchsian_surface import BolzaSurface, default_surface, haar_chunk
from core.services.sl2_core import (
    batch_base_points, batch_distance, batch_fiber_angles, batch_rotations,
)
from utils.seeding import chunk_plan, ordered_map

logger = logging.getLogger(__name__)


class LiouvilleEstimate(NamedTuple):
    """Monte-Carlo Liouville average with its standard error."""

    mean: float
    stderr: float
    n: int

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return self._asdict()


def bump_profile(r: float, r0: float) -> float:
    """Smooth bump exp(1 - 1/(1 - (r/r0)^2)) on [0, r0), zero beyond.

    Args:
        r: Distance (>= 0)
        r0: Support radius (> 0)

    Returns:
        float: Value in [0, 1], equal to 1 at r = 0
    """
    if not r0 > 0.0:
        raise DomainError(f"bump radius must be positive, got {r0}", "bump_profile")
    if r >= r0:
        return 0.0
    ratio = r / r0
    return math.exp(1.0 - 1.0 / (1.0 - ratio * ratio))


def bump_array(r: np.ndarray, r0: float) -> np.ndarray:
    """Vectorized bump_profile."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < r0
    ratio = r[inside] / r0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ratio * ratio))
    return out


@lru_cache(maxsize=64)
def _center_images(center: HalfPlanePoint, r0: float) -> Tuple[np.ndarray, np.ndarray]:
    # images of the center close enough to the domain to matter within r0
    surface = default_surface()
    if not surface.in_domain(center):
        raise DomainError(f"observable center {tuple(center)} is not reduced", "evaluate")
    images = surface.orbit_images(center, r0)
    return np.array([w.re for w in images]), np.array([w.im for w in images])


def evaluate_frames(obs: Observable, frames: np.ndarray,
                    surface: Optional[BolzaSurface] = None) -> np.ndarray:
    """Evaluate an observable on an (n, 2, 2) stack of frames.

    Args:
        obs: Observable
        frames: Frames (reduced here before evaluation)
        surface: Surface used for reduction

    Returns:
        np.ndarray: Values in [-1, 1] (or the constant)
    """
    if obs.is_constant:
        return np.full(len(frames), obs.constant)
    surface = surface or default_surface()
    reduced = surface.reduce_frames(frames)
    re, im = batch_base_points(reduced)
    image_re, image_im = _center_images(obs.center, obs.r0)
    distances = batch_distance(re[:, None], im[:, None], image_re[None, :], image_im[None, :]).min(axis=1)
    values = bump_array(distances, obs.r0)
    if obs.fiber_mode:
        values = values * np.cos(obs.fiber_mode * batch_fiber_angles(reduced))
    return values


def evaluate(obs: Observable, state: PhaseState, surface: Optional[BolzaSurface] = None) -> float:
    """Value of an observable at a phase state."""
    return float(evaluate_frames(obs, state.frame.as_array()[None, :, :], surface)[0])


def _liouville_chunk(task: Tuple[dict, int, int, int]) -> Tuple[int, float, float]:
    # (count, mean, sum of squared deviations) of one Haar chunk
    obs_data, seed, chunk_index, count = task
    frames, _ = haar_chunk((seed, chunk_index, count))
    values = evaluate_frames(Observable.from_dict(obs_data), frames)
    mean = float(np.mean(values))
    return count, mean, float(np.sum((values - mean) ** 2))


def liouville_average(obs: Observable, n: int, seed: int, shards: int = 1) -> LiouvilleEstimate:
    """Monte-Carlo Liouville average over n Haar frames.

    Chunk statistics are merged in chunk order, so the estimate does not
    depend on the shard count.

    Args:
        obs: Observable
        n: Sample count (>= 100)
        seed: 64-bit seed
        shards: Worker processes

    Returns:
        LiouvilleEstimate: Mean and standard error of the mean
    """
    minimum = Settings.OBSERVABLE_CONFIG["min_liouville_samples"]
    if n < minimum:
        raise DomainError(f"need at least {minimum} samples, got {n}", "liouville_average")

    tasks = [(obs.to_dict(), seed, index, count) for index, count in chunk_plan(n)]
    total, mean, m2 = 0, 0.0, 0.0
    for count, chunk_mean, chunk_m2 in ordered_map(_liouville_chunk, tasks, shards):
        merged = total + count
        delta = chunk_mean - mean
        mean += delta * count / merged
        m2 += chunk_m2 + delta * delta * total * count / merged
        total = merged

    stderr = math.sqrt(m2 / (total - 1)) / math.sqrt(total)
    logger.info(f"Liouville average over {n} samples: {mean:.8f} +- {stderr:.2e}")
    return LiouvilleEstimate(mean=mean, stderr=stderr, n=n)


def liouville_quadrature(obs: Observable, genus: int = 2) -> float:
    """Exact Liouville average of an observable.

    Base-only bumps integrate to (1/area)·int_0^r0 bump(r)·2 pi sinh r dr,
    valid while the bump ball embeds in the surface.

    Args:
        obs: Observable
        genus: Surface genus (area 4 pi (g - 1))

    Returns:
        float: Space average
    """
    if obs.is_constant:
        return obs.constant
    if obs.fiber_mode >= 1:
        return 0.0
    value, _ = integrate.quad(lambda r: bump_profile(r, obs.r0) * 2.0 * math.pi * math.sinh(r),
                              0.0, obs.r0, epsabs=1e-14, epsrel=1e-12, limit=200)
    return value / (4.0 * math.pi * (genus - 1))


def fiber_average(obs: Observable, state: PhaseState, n_angles: int = 64) -> float:
    """Mean of the observable over equally spaced rotations of a frame's fiber."""
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles
    return float(np.mean(evaluate_frames(obs, state.frame.as_array() @ batch_rotations(angles))))


def observable_summary(obs: Observable) -> dict:
    """Observable fields plus its exact average."""
    summary = obs.to_dict()
    summary['liouville_reference'] = liouville_quadrature(obs)
    return summary
