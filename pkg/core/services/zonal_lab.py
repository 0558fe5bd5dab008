"""
Magnetic Surface Lab - Zonal Torus Experiments

Moments of the normalized Lebesgue measure on the zonal torus and the
radial density of its projection, including the 1/d blow-up at the anchor.
Densities are computed on the universal cover; moments reduce to the
surface.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from config.settings import Settings
from core.errors import DomainError, FitError
from core.models.magnetic import MagneticParams
from core.models.observable import Observable
from core.models.sl2 import ElementClass, GroupElement, I_POINT, V
from core.models.zonal import BlowupFit, RadialHistogram, ZonalTorus
from core.services.fuchsian_surface import default_surface
from core.services.magnetic_flow import generator, orbit_radius, primitive_period
from core.services.observables import evaluate_frames
from core.services.sl2_core import (
    base_point, batch_base_points, batch_distance, batch_rotations, exp_algebra, hyp_distance,
)
from utils.seeding import chunk_plan, chunk_rng, ordered_map

logger = logging.getLogger(__name__)


def zonal_torus(params: MagneticParams, anchor: Optional[GroupElement] = None) -> ZonalTorus:
    """Zonal torus through the base point i.

    Args:
        params: Sub-critical parameters
        anchor: Frame based at i (defaults to the identity)

    Returns:
        ZonalTorus: Torus with its primitive period
    """
    if params.regime is not ElementClass.ELLIPTIC:
        raise DomainError(f"zonal tori need E < E_c, got E={params.E}, E_c={params.critical_energy}",
                          "zonal_torus")
    anchor = anchor or GroupElement.identity()
    if hyp_distance(base_point(anchor), I_POINT) > Settings.TOLERANCES["det_bound"]:
        raise DomainError("the anchor frame must be based at i", "zonal_torus")
    return ZonalTorus(params=params, period=primitive_period(params), anchor=anchor)


def torus_point(tor: ZonalTorus, theta: float, t: float, quotient: bool = False) -> GroupElement:
    """Frame anchor·exp(theta V)·exp(tY).

    Args:
        tor: Zonal torus
        theta: Fiber angle
        t: Time along the orbit
        quotient: Reduce the frame to the fundamental domain

    Returns:
        GroupElement: Torus frame
    """
    frame = tor.anchor @ exp_algebra(V, theta) @ exp_algebra(generator(tor.params), t)
    if quotient:
        frame, _ = default_surface().reduce_frame(frame)
    return frame


def _elliptic_stack(Y, times: np.ndarray) -> np.ndarray:
    # exp(tY) = cos(wt) I + sin(wt)/w Y for det Y = w^2 > 0
    omega = math.sqrt(Y.det())
    c = np.cos(omega * times)
    s = np.sin(omega * times) / omega
    out = np.empty(times.shape + (2, 2))
    out[..., 0, 0] = c + s * Y.a11
    out[..., 0, 1] = s * Y.a12
    out[..., 1, 0] = s * Y.a21
    out[..., 1, 1] = c - s * Y.a11
    return out


def torus_frames(tor: ZonalTorus, theta: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Batched torus_point (universal cover) over matching angle/time arrays."""
    Y = generator(tor.params)
    return tor.anchor.as_array() @ batch_rotations(np.asarray(theta, dtype=float)) @ \
        _elliptic_stack(Y, np.asarray(t, dtype=float))


def _check_grid(grid: int, name: str) -> None:
    minimum = Settings.ZONAL_CONFIG["min_grid"]
    if grid < minimum:
        raise DomainError(f"{name} must be at least {minimum}, got {grid}", "defect_moment")


def defect_moment(tor: ZonalTorus, obs: Observable, grid_theta: int, grid_t: int,
                  time_shift: float = 0.0) -> float:
    """Integral of obs against d(theta) dt / (2 pi t*) by the product midpoint rule.

    Args:
        tor: Zonal torus
        obs: Observable (evaluated on reduced frames)
        grid_theta: Angle nodes (>= 32)
        grid_t: Time nodes (>= 32)
        time_shift: Shift s of all times, for checking flow invariance

    Returns:
        float: Moment of the normalized torus measure
    """
    _check_grid(grid_theta, "grid_theta")
    _check_grid(grid_t, "grid_t")
    if obs.is_constant:
        return obs.constant
    theta = 2.0 * math.pi * (np.arange(grid_theta) + 0.5) / grid_theta
    t = tor.period * (np.arange(grid_t) + 0.5) / grid_t + time_shift
    theta_grid, t_grid = np.meshgrid(theta, t, indexing='ij')
    frames = torus_frames(tor, theta_grid.ravel(), t_grid.ravel())
    return float(np.mean(evaluate_frames(obs, frames)))


def _density_chunk(task: Tuple[dict, int, int, int, np.ndarray]) -> np.ndarray:
    params_data, seed, chunk_index, count, edges = task
    params = MagneticParams.from_dict(params_data)
    tor = ZonalTorus(params=params, period=primitive_period(params))
    rng = chunk_rng(seed, chunk_index)
    theta = rng.random(count) * (2.0 * math.pi)
    t = rng.random(count) * tor.period
    re, im = batch_base_points(torus_frames(tor, theta, t))
    r = batch_distance(re, im, 0.0, 1.0)
    counts, _ = np.histogram(r, bins=edges)
    return counts


def _density_edges(params: MagneticParams, bins: Optional[int]) -> np.ndarray:
    # bins cover the maximal excursion 2R with a little headroom
    reach = 2.0 * orbit_radius(params) * (1.0 + 1e-9) + 1e-12
    if bins is None:
        width = Settings.ZONAL_CONFIG["bin_width"]
        bins = max(1, math.ceil(reach / width))
        return width * np.arange(bins + 1)
    if bins < 1:
        raise DomainError(f"bins must be positive, got {bins}", "radial_density")
    return np.linspace(0.0, reach, bins + 1)


def radial_density(tor: ZonalTorus, n: int, seed: int, bins: Optional[int] = None,
                   shards: int = 1) -> RadialHistogram:
    """Histogram of d(i, base of a uniform torus point) on the universal cover.

    Args:
        tor: Zonal torus (identity anchor assumed for the distance origin)
        n: Samples (>= 10^5)
        seed: 64-bit seed
        bins: Bin count (default: width 0.005 up to the maximal excursion)
        shards: Worker processes

    Returns:
        RadialHistogram: Counts over [0, 2R]
    """
    minimum = Settings.ZONAL_CONFIG["min_samples"]
    if n < minimum:
        raise DomainError(f"need at least {minimum} samples, got {n}", "radial_density")
    if not tor.params.E > 0.0:
        raise DomainError("the torus projects to a point at E = 0", "radial_density")
    edges = _density_edges(tor.params, bins)
    tasks = [(tor.params.to_dict(), seed, index, count, edges) for index, count in chunk_plan(n)]
    counts = np.zeros(edges.size - 1, dtype=np.int64)
    for chunk_counts in ordered_map(_density_chunk, tasks, shards):
        counts += chunk_counts
    logger.info(f"Radial density: n={n}, {edges.size - 1} bins up to r={edges[-1]:.6f}")
    return RadialHistogram(edges=edges, counts=counts, n=n, seed=seed)


def pdf_at_zero(hist: RadialHistogram, window: float = None) -> float:
    """Intercept at r = 0 of a linear fit of the pdf over bins with r_mid < window."""
    if window is None:
        window = Settings.ZONAL_CONFIG["pdf_zero_window"]
    selected = hist.midpoints < window
    if np.count_nonzero(selected) < 2:
        raise FitError(f"fewer than two bins below r={window}", "pdf_at_zero")
    regression = stats.linregress(hist.midpoints[selected], hist.pdf[selected])
    return float(regression.intercept)


def expected_pdf_at_zero(params: MagneticParams) -> float:
    """2 / (sqrt(2E) · t*): both crossings of the anchor at speed sqrt(2E)."""
    if not params.E > 0.0:
        raise DomainError("no crossing speed at E = 0", "expected_pdf_at_zero")
    return 2.0 / (math.sqrt(2.0 * params.E) * primitive_period(params))


def blowup_fit(hist: RadialHistogram, window: float = None) -> BlowupFit:
    """Fit the area density pdf(r) / (2 pi sinh r) to c · r^-q on (0, window].

    Args:
        hist: Radial histogram
        window: Largest bin center used (default 0.1)

    Returns:
        BlowupFit: Exponent q and constant c
    """
    if window is None:
        window = Settings.ZONAL_CONFIG["fit_window"]
    r = hist.midpoints
    selected = (r <= window) & (hist.counts > 0)
    n_bins = int(np.count_nonzero(selected))
    if n_bins < Settings.ZONAL_CONFIG["min_fit_bins"]:
        raise FitError(f"only {n_bins} non-empty bins in (0, {window}]", "blowup_fit")
    area_density = hist.pdf[selected] / (2.0 * math.pi * np.sinh(r[selected]))
    regression = stats.linregress(np.log(r[selected]), np.log(area_density))
    fit = BlowupFit(q=-float(regression.slope), c=float(math.exp(regression.intercept)),
                    window=window, n_bins=n_bins, n=hist.n, seed=hist.seed)
    logger.info(f"Blow-up fit: q={fit.q:.4f} c={fit.c:.6f} over {n_bins} bins")
    return fit


def normalization_report(tor: ZonalTorus, fit: BlowupFit) -> dict:
    """Fitted constant next to the two candidate normalizations of the 1/d law.

    Returns:
        dict: fitted c, 1/(4 pi T_E E), 2/(sqrt(2E) t* 2 pi) and the ratios
    """
    params = tor.params
    period_form = 1.0 / (4.0 * math.pi * params.period_scale * params.E)
    speed_form = 2.0 / (math.sqrt(2.0 * params.E) * tor.period * 2.0 * math.pi)
    return {
        'c_fit': fit.c,
        'c_period_form': period_form,
        'c_speed_form': speed_form,
        'ratio_fit_to_period_form': fit.c / period_form,
        'ratio_fit_to_speed_form': fit.c / speed_form,
        'ratio_speed_to_period_form': speed_form / period_form,
    }
