"""
Magnetic Surface Lab - Bolza Surface Service

The genus-2 Bolza surface as the quotient of the upper half-plane by the
regular-octagon group. Provides Dirichlet reduction of points and frames,
distances on the quotient and seeded Haar sampling of the frame bundle.
"""

import itertools
import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import Settings
from core.errors import DomainError, ReductionError
from core.models.sl2 import GroupElement, HalfPlanePoint, I_POINT, V, X
from core.models.surface import FundamentalDomain, SurfaceGroup
from core.services.sl2_core import (
    base_point, batch_base_points, batch_distance, batch_renormalize, batch_rotations,
    exp_algebra, frames_to_array, array_to_frames, hyp_distance, mobius,
)
from utils.seeding import chunk_plan, chunk_rng, concat, ordered_map

logger = logging.getLogger(__name__)


def translation_length() -> float:
    """Side-pairing translation length 2·arccosh(1 + sqrt 2)."""
    return 2.0 * math.acosh(Settings.SURFACE_CONFIG["half_translation_cosh"])


def vertex_radius() -> float:
    """Distance from i to the octagon vertices, arccosh(3 + 2 sqrt 2)."""
    return math.acosh(Settings.SURFACE_CONFIG["vertex_radius_cosh"])


@lru_cache(maxsize=1)
def bolza_group() -> SurfaceGroup:
    """Build the Bolza group g_k = R(k pi/4) · A(l0) · R(-k pi/4), k = 0..7.

    Returns:
        SurfaceGroup: Eight generators with g_{k+4} = g_k^-1
    """
    length = translation_length()
    translation = exp_algebra(X, length)
    generators = tuple(
        exp_algebra(V, k * math.pi / 4.0) @ translation @ exp_algebra(V, -k * math.pi / 4.0)
        for k in range(8)
    )
    return SurfaceGroup(generators=generators, genus=Settings.SURFACE_CONFIG["genus"],
                        translation_length=length)


@lru_cache(maxsize=1)
def default_surface() -> 'BolzaSurface':
    """Shared surface instance (immutable, safe to reuse across calls)."""
    return BolzaSurface()


def _translation_stack(radii: np.ndarray) -> np.ndarray:
    # exp(r X) = diag(e^{r/2}, e^{-r/2})
    out = np.zeros(radii.shape + (2, 2))
    out[..., 0, 0] = np.exp(0.5 * radii)
    out[..., 1, 1] = np.exp(-0.5 * radii)
    return out


def haar_chunk(task: Tuple[int, int, int]) -> Tuple[np.ndarray, int]:
    """Rejection-sample one chunk of Haar frames.

    Args:
        task: (seed, chunk_index, count)

    Returns:
        Tuple[np.ndarray, int]: (count, 2, 2) frames and candidates consumed
    """
    seed, chunk_index, count = task
    surface = default_surface()
    rng = chunk_rng(seed, chunk_index)
    cosh_rv = Settings.SURFACE_CONFIG["vertex_radius_cosh"]
    batch = max(16, count * Settings.MONTE_CARLO_CONFIG["rejection_batch_factor"])

    accepted: List[np.ndarray] = []
    n_accepted = 0
    attempts = 0
    while n_accepted < count:
        u = rng.random(batch)
        psi = rng.random(batch) * (2.0 * math.pi)
        theta = rng.random(batch) * (2.0 * math.pi)
        radii = np.arccosh(1.0 + u * (cosh_rv - 1.0))
        frames = batch_rotations(psi) @ _translation_stack(radii) @ batch_rotations(theta)
        inside = surface.batch_in_domain(*batch_base_points(frames))

        hits = np.flatnonzero(inside)
        needed = count - n_accepted
        if hits.size >= needed:
            hits = hits[:needed]
            attempts += int(hits[-1]) + 1
        else:
            attempts += batch
        accepted.append(frames[hits])
        n_accepted += hits.size

    return concat(accepted, (0, 2, 2)), attempts


class BolzaSurface:
    """Dirichlet domain operations for the Bolza surface."""

    def __init__(self, group: Optional[SurfaceGroup] = None):
        """Initialize the surface.

        Args:
            group: Surface group (defaults to the Bolza group)
        """
        self.logger = logging.getLogger(__name__)
        self.group = group or bolza_group()
        self.domain = FundamentalDomain(
            neighbor_images=tuple(mobius(g, I_POINT) for g in self.group.generators),
            vertex_radius=vertex_radius(),
        )
        self._generators = self.group.generator_array()
        self._inverse_generators = self._generators[[self.group.inverse_index(k) for k in range(8)]]
        self._word_balls: Dict[int, Tuple[GroupElement, ...]] = {}

    @property
    def translation_length(self) -> float:
        """Translation length of every generator."""
        return self.group.translation_length

    # =========================================================================
    # DOMAIN MEMBERSHIP
    # =========================================================================

    def _neighbor_distances(self, z: HalfPlanePoint) -> List[float]:
        return [hyp_distance(z, w) for w in self.domain.neighbor_images]

    def in_domain(self, z: HalfPlanePoint) -> bool:
        """Check whether z is at least as close to i as to every g_k·i.

        Args:
            z: Point with Im z > 0

        Returns:
            bool: True for interior and boundary points
        """
        z = HalfPlanePoint(*z).validate("in_domain")
        slack = Settings.TOLERANCES["domain_slack"]
        d0 = hyp_distance(z, I_POINT)
        return all(d0 <= dk + slack for dk in self._neighbor_distances(z))

    def batch_in_domain(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Vectorized in_domain over point arrays."""
        slack = Settings.TOLERANCES["domain_slack"]
        d0 = batch_distance(re, im, 0.0, 1.0)
        dk = batch_distance(re[:, None], im[:, None],
                            self.domain.neighbor_re[None, :], self.domain.neighbor_im[None, :])
        return np.all(d0[:, None] <= dk + slack, axis=1)

    def vertices(self) -> List[HalfPlanePoint]:
        """Octagon vertices at distance r_v from i in directions (k + 1/2) pi/4."""
        radial = exp_algebra(X, self.domain.vertex_radius)
        return [mobius(exp_algebra(V, (k + 0.5) * math.pi / 4.0) @ radial, I_POINT) for k in range(8)]

    # =========================================================================
    # REDUCTION
    # =========================================================================

    def _descent_step(self, z: HalfPlanePoint) -> Optional[int]:
        # index of the generator that moves z strictly closer to i, if any
        distances = self._neighbor_distances(z)
        k = int(np.argmin(distances))
        if distances[k] < hyp_distance(z, I_POINT) - Settings.TOLERANCES["domain_slack"]:
            return self.group.inverse_index(k)
        return None

    def reduce(self, z: HalfPlanePoint) -> Tuple[HalfPlanePoint, GroupElement]:
        """Greedy Dirichlet reduction of a point.

        Args:
            z: Point with Im z > 0

        Returns:
            Tuple[HalfPlanePoint, GroupElement]: (gamma·z in the domain, gamma)
        """
        z = HalfPlanePoint(*z).validate("reduce")
        gamma = GroupElement.identity()
        for _ in range(Settings.SURFACE_CONFIG["reduction_cap"]):
            k = self._descent_step(z)
            if k is None:
                return z, gamma
            g = self.group.generator(k)
            z = mobius(g, z)
            gamma = g @ gamma
        raise ReductionError(f"no fixed point after {Settings.SURFACE_CONFIG['reduction_cap']} steps", "reduce")

    def reduce_frame(self, g: GroupElement) -> Tuple[GroupElement, GroupElement]:
        """Move a frame into the domain by left multiplication.

        Args:
            g: Frame

        Returns:
            Tuple[GroupElement, GroupElement]: (gamma·g with base in the domain, gamma)
        """
        gamma = GroupElement.identity()
        for _ in range(Settings.SURFACE_CONFIG["reduction_cap"]):
            k = self._descent_step(base_point(g))
            if k is None:
                return g, gamma
            step = self.group.generator(k)
            g = step @ g
            gamma = step @ gamma
        raise ReductionError(f"no fixed point after {Settings.SURFACE_CONFIG['reduction_cap']} steps",
                             "reduce_frame")

    def reduce_frames(self, frames: np.ndarray) -> np.ndarray:
        """Vectorized reduce_frame over an (n, 2, 2) stack.

        Args:
            frames: Frames to reduce (not modified)

        Returns:
            np.ndarray: Reduced frames in the same order
        """
        frames = np.array(frames, dtype=float)
        slack = Settings.TOLERANCES["domain_slack"]
        active = np.arange(len(frames))
        for _ in range(Settings.SURFACE_CONFIG["reduction_cap"]):
            if active.size == 0:
                return frames
            re, im = batch_base_points(frames[active])
            d0 = batch_distance(re, im, 0.0, 1.0)
            dk = batch_distance(re[:, None], im[:, None],
                                self.domain.neighbor_re[None, :], self.domain.neighbor_im[None, :])
            k = np.argmin(dk, axis=1)
            moving = dk[np.arange(k.size), k] < d0 - slack
            active, k = active[moving], k[moving]
            frames[active] = batch_renormalize(self._inverse_generators[k] @ frames[active])
        raise ReductionError(f"{active.size} frames not reduced after "
                             f"{Settings.SURFACE_CONFIG['reduction_cap']} steps", "reduce_frames")

    # =========================================================================
    # QUOTIENT METRIC
    # =========================================================================

    def word_ball(self, radius: int) -> Tuple[GroupElement, ...]:
        """Distinct group elements of word length at most `radius`.

        Args:
            radius: Word length bound (>= 0)

        Returns:
            Tuple[GroupElement, ...]: Elements in breadth-first order, identity first
        """
        if radius < 0:
            raise DomainError(f"word radius must be non-negative, got {radius}", "word_ball")
        if radius not in self._word_balls:
            seen = {GroupElement.identity()}
            ball = [GroupElement.identity()]
            frontier = list(ball)
            for _ in range(radius):
                next_frontier = []
                for word in frontier:
                    for g in self.group.generators:
                        candidate = word @ g
                        if candidate not in seen:
                            seen.add(candidate)
                            next_frontier.append(candidate)
                ball.extend(next_frontier)
                frontier = next_frontier
            self._word_balls[radius] = tuple(ball)
            self.logger.debug(f"Word ball of radius {radius}: {len(ball)} elements")
        return self._word_balls[radius]

    def quotient_distance(self, x: HalfPlanePoint, y: HalfPlanePoint, word_radius: int = None) -> float:
        """Distance on the surface between the projections of x and y.

        Args:
            x: First point (reduced)
            y: Second point (reduced)
            word_radius: Word length searched (default 2)

        Returns:
            float: min over |gamma| <= R of d(x, gamma·y)
        """
        if word_radius is None:
            word_radius = Settings.SURFACE_CONFIG["default_word_radius"]
        if word_radius < 1:
            raise DomainError(f"word radius must be at least 1, got {word_radius}", "quotient_distance")
        x = HalfPlanePoint(*x).validate("quotient_distance")
        y = HalfPlanePoint(*y).validate("quotient_distance")
        return min(hyp_distance(x, mobius(gamma, y)) for gamma in self.word_ball(word_radius))

    def orbit_images(self, center: HalfPlanePoint, reach: float, word_radius: int = None) -> List[HalfPlanePoint]:
        """Images gamma·center that can lie within `reach` of the domain.

        Args:
            center: Point whose orbit is listed
            reach: Distance beyond the vertex radius still of interest
            word_radius: Word length searched (default 2)

        Returns:
            List[HalfPlanePoint]: Images with d(i, gamma·center) <= r_v + reach
        """
        if word_radius is None:
            word_radius = Settings.SURFACE_CONFIG["default_word_radius"]
        bound = self.domain.vertex_radius + reach
        images = [mobius(gamma, center) for gamma in self.word_ball(word_radius)]
        return [w for w in images if hyp_distance(I_POINT, w) <= bound]

    # =========================================================================
    # HAAR SAMPLING
    # =========================================================================

    def _sample(self, n: int, seed: int, shards: int) -> Tuple[np.ndarray, int]:
        if n < 0:
            raise DomainError(f"sample count must be non-negative, got {n}", "haar_sample")
        tasks = [(seed, index, count) for index, count in chunk_plan(n)]
        results = ordered_map(haar_chunk, tasks, shards)
        frames = concat([chunk for chunk, _ in results], (0, 2, 2))
        attempts = sum(tries for _, tries in results)
        self.logger.debug(f"Haar sample: n={n} seed={seed} chunks={len(tasks)} attempts={attempts}")
        return frames, attempts

    def haar_sample_array(self, n: int, seed: int, shards: int = 1) -> np.ndarray:
        """Haar-distributed frames over the domain as an (n, 2, 2) array."""
        return self._sample(n, seed, shards)[0]

    def haar_sample(self, n: int, seed: int, shards: int = 1) -> List[GroupElement]:
        """Haar-distributed frames with base points in the domain.

        Args:
            n: Number of frames (>= 0)
            seed: 64-bit seed
            shards: Worker processes; the output does not depend on it

        Returns:
            List[GroupElement]: Frames in sample-index order
        """
        return array_to_frames(self.haar_sample_array(n, seed, shards))

    def area_estimate(self, n: int, seed: int, shards: int = 1) -> Dict[str, float]:
        """Estimate the surface area from the rejection acceptance ratio.

        Args:
            n: Accepted samples to draw (>= 1)
            seed: 64-bit seed
            shards: Worker processes

        Returns:
            Dict[str, float]: ratio, area, attempts and the expected values
        """
        if n < 1:
            raise DomainError(f"area estimate needs at least one sample, got {n}", "area_estimate")
        _, attempts = self._sample(n, seed, shards)
        disk_area = 2.0 * math.pi * (Settings.SURFACE_CONFIG["vertex_radius_cosh"] - 1.0)
        ratio = n / attempts
        expected_area = 4.0 * math.pi * (self.group.genus - 1)
        result = {
            'n': n,
            'attempts': attempts,
            'acceptance_ratio': ratio,
            'expected_ratio': expected_area / disk_area,
            'area': ratio * disk_area,
            'expected_area': expected_area,
        }
        result['relative_error'] = abs(result['area'] - expected_area) / expected_area
        self.logger.info(f"Area estimate {result['area']:.6f} vs {expected_area:.6f} "
                         f"({attempts} candidates)")
        return result

    # =========================================================================
    # DIAGNOSTICS
    # =========================================================================

    def relator_search(self) -> Optional[List[int]]:
        """Search words x0 x1 x2 x3 x0^-1 x1^-1 x2^-1 x3^-1 equal to the identity.

        Only words with four distinct letters up to inversion are tried.

        Returns:
            Optional[List[int]]: Generator indices of the first relator found
        """
        for letters in itertools.product(range(8), repeat=4):
            if len({k % 4 for k in letters}) < 4:
                continue
            word = list(letters) + [self.group.inverse_index(k) for k in letters]
            product = GroupElement.identity()
            for k in word:
                product = product @ self.group.generator(k)
            if product.is_identity():
                self.logger.info(f"Relator found: {word}")
                return word
        self.logger.warning("No alternating relator found among generator orderings")
        return None

    def frames_to_points(self, frames: Sequence[GroupElement]) -> List[HalfPlanePoint]:
        """Base points of a list of frames."""
        re, im = batch_base_points(frames_to_array(frames))
        return [HalfPlanePoint(float(a), float(b)) for a, b in zip(re, im)]
