"""
Magnetic Surface Lab - Birkhoff Averages and Equidistribution Scans

Time averages of observables along one-parameter flows on the frame bundle,
sup-error tables over a seeded sample of initial states and power-law fits
of their decay.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from config.settings import Settings
from core.errors import DomainError, ExactConvergence, FitError
from core.models.ergodic import DecayTable, ThetaFit
from core.models.observable import Observable
from core.models.sl2 import AlgebraElement, GroupElement
from core.services.fuchsian_surface import default_surface
from core.services.observables import evaluate_frames, liouville_quadrature
from core.services.sl2_core import batch_renormalize, exp_matrix, frames_to_array
from utils.seeding import ordered_map

logger = logging.getLogger(__name__)

# midpoint frames buffered before one batched evaluation
_BLOCK_STEPS = 512


def _validate_step(dt: float, operation: str) -> None:
    max_dt = Settings.ERGODIC_CONFIG["max_dt"]
    if not (0.0 < dt <= max_dt):
        raise DomainError(f"dt must lie in (0, {max_dt}], got {dt}", operation)


def _as_frames(states) -> np.ndarray:
    if isinstance(states, np.ndarray):
        return np.array(states, dtype=float).reshape(-1, 2, 2)
    return frames_to_array([getattr(s, 'frame', s) for s in states])


def birkhoff_frames(obs: Observable, frames: np.ndarray, Y: AlgebraElement,
                    horizons: Sequence[float], dt: float) -> np.ndarray:
    """Midpoint Birkhoff averages of many orbits at several horizons in one pass.

    Horizon T_j is read out after round(T_j / dt) steps, so horizons are
    taken as multiples of dt.

    Args:
        obs: Observable
        frames: (n, 2, 2) initial frames
        Y: Flow generator
        horizons: Increasing horizons
        dt: Step (0 < dt <= 0.1)

    Returns:
        np.ndarray: (n, len(horizons)) averages
    """
    _validate_step(dt, "birkhoff")
    horizons = [float(t) for t in horizons]
    if any(t < dt for t in horizons):
        raise DomainError(f"horizons must be at least dt={dt}", "birkhoff")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise DomainError("horizons must be strictly increasing", "birkhoff")

    surface = default_surface()
    current = surface.reduce_frames(_as_frames(frames))
    n_states = current.shape[0]
    if obs.is_constant:
        return np.full((n_states, len(horizons)), obs.constant)
    step = exp_matrix(Y, dt)
    half_step = exp_matrix(Y, 0.5 * dt)
    checkpoints = [max(1, int(round(t / dt))) for t in horizons]

    averages = np.zeros((n_states, len(horizons)))
    running = np.zeros(n_states)
    done = 0
    for column, target in enumerate(checkpoints):
        while done < target:
            block = min(_BLOCK_STEPS, target - done)
            midpoints = np.empty((block, n_states, 2, 2))
            for j in range(block):
                midpoints[j] = current @ half_step
                current = surface.reduce_frames(batch_renormalize(current @ step))
            values = evaluate_frames(obs, midpoints.reshape(-1, 2, 2), surface)
            running += values.reshape(block, n_states).sum(axis=0)
            done += block
        averages[:, column] = running / target
    return averages


def birkhoff(obs: Observable, state, Y: AlgebraElement, T: float, dt: float = None) -> float:
    """Composite midpoint approximation of (1/T)·int_0^T obs(frame·exp(tY)) dt.

    The step is shrunk to T / ceil(T / dt) so the rule covers [0, T] exactly.

    Args:
        obs: Observable
        state: PhaseState or GroupElement
        Y: Flow generator
        T: Horizon (>= dt)
        dt: Nominal step (0 < dt <= 0.1)

    Returns:
        float: Time average
    """
    if dt is None:
        dt = Settings.ERGODIC_CONFIG["default_dt"]
    _validate_step(dt, "birkhoff")
    if not T >= dt:
        raise DomainError(f"horizon T={T} is shorter than dt={dt}", "birkhoff")
    n_steps = max(1, math.ceil(T / dt - 1e-9))
    frame = getattr(state, 'frame', state)
    if obs.is_constant:
        return obs.constant
    return float(birkhoff_frames(obs, frame.as_array()[None, :, :], Y, [T], T / n_steps)[0, 0])


def _scan_task(task: Tuple[dict, np.ndarray, Tuple[float, float, float], List[float], float]) -> np.ndarray:
    obs_data, frames, y_entries, horizons, dt = task
    return birkhoff_frames(Observable.from_dict(obs_data), frames, AlgebraElement(*y_entries), horizons, dt)


def scan_states(n: int = None, seed: int = 0) -> List[GroupElement]:
    """Seeded Haar sample of initial states standing in for the sup over the shell."""
    if n is None:
        n = Settings.ERGODIC_CONFIG["scan_states"]
    return default_surface().haar_sample(n, seed)


def equidistribution_scan(obs: Observable, states, Y: AlgebraElement, horizons: Sequence[float],
                          dt: float = None, reference: Optional[float] = None,
                          shards: int = 1) -> DecayTable:
    """Sup over states of |Birkhoff average - Liouville average| per horizon.

    Args:
        obs: Observable
        states: Initial states (PhaseStates, GroupElements or an (n, 2, 2) array)
        Y: Flow generator
        horizons: Horizons in any order
        dt: Step
        reference: Space average (defaults to the exact quadrature value)
        shards: Worker processes; states are split between them

    Returns:
        DecayTable: Sorted horizons with their sup errors
    """
    if dt is None:
        dt = Settings.ERGODIC_CONFIG["default_dt"]
    frames = _as_frames(states)
    min_states = Settings.ERGODIC_CONFIG["min_scan_states"]
    min_horizons = Settings.ERGODIC_CONFIG["min_horizons"]
    if frames.shape[0] < min_states:
        raise DomainError(f"need at least {min_states} states, got {frames.shape[0]}", "equidistribution_scan")
    horizons = sorted(set(float(t) for t in horizons))
    if len(horizons) < min_horizons:
        raise DomainError(f"need at least {min_horizons} distinct horizons, got {len(horizons)}",
                          "equidistribution_scan")
    if reference is None:
        reference = liouville_quadrature(obs)

    logger.info(f"Equidistribution scan: {frames.shape[0]} states, horizons {horizons}, dt={dt}")
    y_entries = (Y.a11, Y.a12, Y.a21)
    groups = [g for g in np.array_split(frames, min(shards, frames.shape[0])) if len(g)]
    tasks = [(obs.to_dict(), group, y_entries, horizons, dt) for group in groups]
    averages = np.concatenate(ordered_map(_scan_task, tasks, shards), axis=0)

    sup_errors = np.max(np.abs(averages - reference), axis=0)
    metadata = {
        'observable': obs.to_dict(),
        'generator': Y.to_dict(),
        'n_states': int(frames.shape[0]),
        'dt': dt,
        'reference': reference,
    }
    return DecayTable(horizons=tuple(horizons), sup_errors=tuple(sup_errors), metadata=metadata)


def decay_fit(table: DecayTable) -> ThetaFit:
    """Least-squares fit of log e_j against log T_j over horizons T >= 10.

    Args:
        table: Decay table

    Returns:
        ThetaFit: theta = -slope and the coefficient of determination
    """
    min_horizon = Settings.ERGODIC_CONFIG["min_fit_horizon"]
    rows = [(t, e) for t, e in zip(table.horizons, table.sup_errors) if t >= min_horizon]
    if len(rows) < Settings.ERGODIC_CONFIG["min_horizons"]:
        raise FitError(f"only {len(rows)} horizons at T >= {min_horizon}", "decay_fit")
    if any(e <= 0.0 for _, e in rows):
        raise ExactConvergence("decay table contains zero errors", table=table)

    log_t = np.log([t for t, _ in rows])
    log_e = np.log([e for _, e in rows])
    regression = stats.linregress(log_t, log_e)
    if np.ptp(log_e) == 0.0:
        r_squared = 1.0
    else:
        r_squared = float(min(1.0, max(0.0, regression.rvalue ** 2)))
    fit = ThetaFit(theta=-float(regression.slope), r_squared=r_squared,
                   intercept=float(regression.intercept), n_rows=len(rows))
    logger.info(f"Decay fit over {len(rows)} horizons: theta={fit.theta:.4f} r2={fit.r_squared:.4f}")
    return fit
