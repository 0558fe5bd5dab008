"""
Magnetic Surface Lab - Magnetic Flow Service

The constant-field magnetic flow on an energy shell is right translation
by exp(tY) with Y = sqrt(2E)·X - B·V. Long times are reached by composing
exact steps of length at most one, reducing the frame after each step.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import stats

from config.settings import Settings
from core.errors import DomainError, FitError
from core.models.magnetic import ConjugacyResult, GrowthFit, MagneticParams, PhaseState
from core.models.sl2 import AlgebraElement, ElementClass, GroupElement, HalfPlanePoint, V, X
from core.services.fuchsian_surface import BolzaSurface, default_surface
from core.services.sl2_core import (
    batch_renormalize, exp_algebra, exp_matrix, fixed_point, log_adjoint_norm, mobius, normal_form,
)

logger = logging.getLogger(__name__)


def generator(params: MagneticParams) -> AlgebraElement:
    """Generator sqrt(2E)·X - B·V of the magnetic flow.

    Args:
        params: Field and energy

    Returns:
        AlgebraElement: [[sqrt(2E)/2, -B/2], [B/2, -sqrt(2E)/2]]
    """
    if not params.quantized:
        logger.warning(f"2B(g-1) = {2.0 * params.B * (params.genus - 1)} is not an integer; "
                       "the classical flow is still defined")
    return math.sqrt(2.0 * params.E) * X - params.B * V


def classify(params: MagneticParams) -> ElementClass:
    """Conjugacy type of the flow: elliptic, parabolic or hyperbolic."""
    return ElementClass.from_determinant(generator(params).det())


def make_state(frame: GroupElement, params: MagneticParams,
               surface: Optional[BolzaSurface] = None) -> PhaseState:
    """Phase state for a frame, reduced into the fundamental domain."""
    surface = surface or default_surface()
    reduced, _ = surface.reduce_frame(frame)
    return PhaseState(frame=reduced, params=params)


def _step_count(t: float) -> int:
    return max(1, math.ceil(abs(t) / Settings.FLOW_CONFIG["max_step"]))


def flow_by(frame: GroupElement, Y: AlgebraElement, t: float,
            surface: Optional[BolzaSurface] = None) -> GroupElement:
    """Reduced frame·exp(tY), composed from steps of length at most one.

    Args:
        frame: Starting frame
        Y: Generator
        t: Time (any sign)
        surface: Surface used for reduction

    Returns:
        GroupElement: Flowed frame with base point in the domain
    """
    surface = surface or default_surface()
    if t == 0.0:
        return surface.reduce_frame(frame)[0]
    n_steps = _step_count(t)
    step = exp_algebra(Y, t / n_steps)
    for _ in range(n_steps):
        frame, _ = surface.reduce_frame(frame @ step)
    return frame


def flow(state: PhaseState, t: float, surface: Optional[BolzaSurface] = None) -> PhaseState:
    """Magnetic flow of a phase state for time t.

    Args:
        state: Reduced phase state
        t: Time

    Returns:
        PhaseState: State at time t, reduced
    """
    if t == 0.0:
        return state
    return PhaseState(frame=flow_by(state.frame, generator(state.params), t, surface), params=state.params)


def flow_frames(frames: np.ndarray, Y: AlgebraElement, t: float,
                surface: Optional[BolzaSurface] = None) -> np.ndarray:
    """Batched flow_by over an (n, 2, 2) stack of frames."""
    surface = surface or default_surface()
    frames = surface.reduce_frames(frames)
    if t == 0.0:
        return frames
    n_steps = _step_count(t)
    step = exp_matrix(Y, t / n_steps)
    for _ in range(n_steps):
        frames = surface.reduce_frames(batch_renormalize(frames @ step))
    return frames


def fiber_rotation(state: PhaseState, theta: float) -> PhaseState:
    """Rotate the frame direction by theta in its fiber.

    The base point is unchanged, so the reduced frame stays reduced.
    """
    return PhaseState(frame=state.frame @ exp_algebra(V, theta), params=state.params)


def primitive_period(params: MagneticParams) -> float:
    """Smallest t* > 0 with exp(t*·Y) = +-I, equal to 2·pi·T_E.

    Args:
        params: Elliptic (sub-critical) parameters

    Returns:
        float: pi / sqrt(det Y)
    """
    Y = generator(params)
    d = Y.det()
    if ElementClass.from_determinant(d) is not ElementClass.ELLIPTIC:
        raise DomainError(f"no closed orbits at E={params.E} >= E_c={params.critical_energy}",
                          "primitive_period")
    return math.pi / math.sqrt(d)


def lyapunov_rate(params: MagneticParams) -> float:
    """sqrt(2·(E - E_c)) above the critical energy, zero otherwise."""
    return math.sqrt(max(0.0, 2.0 * (params.E - params.critical_energy)))


def _tail_log_norms(Y: AlgebraElement, times: np.ndarray, window: Optional[float] = None) -> np.ndarray:
    # With a window, each sample is the midpoint mean over [t, t + window)
    if window is None:
        return np.array([log_adjoint_norm(Y, float(t)) for t in times])
    n = Settings.FLOW_CONFIG["growth_period_samples"]
    offsets = (np.arange(n) + 0.5) * (window / n)
    return np.array([np.mean([log_adjoint_norm(Y, float(t + s)) for s in offsets]) for t in times])


def derivative_growth_fit(params: MagneticParams, t_max: float, n_points: int = None) -> GrowthFit:
    """Exponential rate and polynomial degree of log||Ad exp(tY)|| on the grid tail.

    Samples lie on a geometric grid over [1, t_max] and only the last part
    of the grid is fitted. Off the critical energy the rate is the slope
    against t and the degree is the slope of the remainder against log t.
    Elliptic log-norms are periodic with period t*, so each sample is first
    averaged over one period. At the critical energy t and log t are fitted
    jointly.

    Args:
        params: Field and energy
        t_max: Largest time (>= 10)
        n_points: Grid size

    Returns:
        GrowthFit: Exponential rate and polynomial degree
    """
    if n_points is None:
        n_points = Settings.FLOW_CONFIG["growth_default_points"]
    if not t_max >= 10.0:
        raise DomainError(f"t_max must be at least 10, got {t_max}", "derivative_growth_fit")
    if n_points < 1:
        raise FitError(f"grid needs at least one point, got {n_points}", "derivative_growth_fit")

    Y = generator(params)
    grid = np.geomspace(1.0, t_max, n_points)
    tail = grid[int(math.floor(n_points * (1.0 - Settings.FLOW_CONFIG["growth_tail_fraction"]))):]
    if tail.size < Settings.FLOW_CONFIG["growth_min_points"]:
        raise FitError(f"only {tail.size} tail points, need {Settings.FLOW_CONFIG['growth_min_points']}",
                       "derivative_growth_fit")

    d = Y.det()
    regime = ElementClass.from_determinant(d)
    log_t = np.log(tail)
    if regime is ElementClass.PARABOLIC:
        log_norms = _tail_log_norms(Y, tail)
        design = np.column_stack([np.ones_like(tail), tail, log_t])
        coefficients, *_ = np.linalg.lstsq(design, log_norms, rcond=None)
        rate, degree = float(coefficients[1]), float(coefficients[2])
    else:
        window = math.pi / math.sqrt(d) if regime is ElementClass.ELLIPTIC else None
        log_norms = _tail_log_norms(Y, tail, window)
        rate = float(stats.linregress(tail, log_norms).slope)
        degree = float(stats.linregress(log_t, log_norms - rate * tail).slope)

    fit = GrowthFit(rate=rate, poly_degree=degree, n_points=int(tail.size))
    logger.info(f"Growth fit for B={params.B} E={params.E}: rate={fit.rate:.6f} degree={fit.poly_degree:.4f}")
    return fit


def conjugacy_check(params: MagneticParams) -> ConjugacyResult:
    """Compare exp(tY) with the flow of its normal form on a fixed time grid.

    The residual is the largest entrywise gap between C·exp(tY)·C^-1 and
    exp(t·s·N), plus | |s| - 1/T_E | away from the critical energy.

    Args:
        params: Field and energy (Y must be nonzero)

    Returns:
        ConjugacyResult: Class, scale s and residual
    """
    Y = generator(params)
    form = normal_form(Y)
    C = form.conjugator.as_array()
    C_inv = form.conjugator.inverse().as_array()
    normal = form.normal_element()

    t_max = Settings.FLOW_CONFIG["conjugacy_t_max"]
    residual = 0.0
    for t in np.linspace(-t_max, t_max, Settings.FLOW_CONFIG["conjugacy_points"]):
        gap = C @ exp_matrix(Y, float(t)) @ C_inv - exp_matrix(normal, float(t))
        residual = max(residual, float(np.max(np.abs(gap))))
    if form.element_class is not ElementClass.PARABOLIC:
        residual += abs(abs(form.scale) - 1.0 / params.period_scale)

    logger.debug(f"Conjugacy {form.element_class} s={form.scale:.12g} residual={residual:.3e}")
    return ConjugacyResult(element_class=form.element_class, scale=form.scale, residual=residual)


def orbit_radius(params: MagneticParams) -> float:
    """Hyperbolic radius R of the closed base orbits, tanh R = sqrt(2E)/B.

    Args:
        params: Elliptic parameters

    Returns:
        float: Circle radius; the maximal excursion from the start is 2R
    """
    if params.regime is not ElementClass.ELLIPTIC:
        raise DomainError("only sub-critical orbits are circles", "orbit_radius")
    return math.atanh(math.sqrt(2.0 * params.E) / params.B)


def orbit_center(state: PhaseState) -> HalfPlanePoint:
    """Center of the circle traced by the base point of an elliptic orbit."""
    Y = generator(state.params)
    return mobius(state.frame, fixed_point(Y))
