"""
Magnetic Surface Lab - Experiment Runner

Dispatches a validated RunConfig to exactly one experiment and writes its
report. JSON reports are wrapped in an envelope carrying the tool version,
the echoed configuration, the seed and the wall time; CSV reports carry the
bare table.
"""

import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pandas as pd

from cli.run_config import RunConfig
from config.settings import Settings
from core.errors import DomainError, ExactConvergence, FitError
from core.models.ergodic import DecayTable
from core.models.landau import WeinsteinModel
from core.models.magnetic import MagneticParams
from core.models.observable import Observable
from core.models.sl2 import ElementClass, U_PLUS, X
from core.services import ergodic_lab, landau_spectra, magnetic_flow, zonal_lab
from core.services.fuchsian_surface import BolzaSurface, default_surface
from core.services.observables import observable_summary
from core.services.sl2_core import base_point, batch_base_points
from reports.base_writer import ReportError
from reports.writer_factory import get_writer_factory
from utils.seeding import validate_seed
from utils.validation import RunConfigValidator

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_VALIDATION_ERROR = 2


class ExperimentRunner:
    """Runs one subcommand per call and maps failures to exit codes."""

    def __init__(self, surface: BolzaSurface = None):
        """Initialize the runner.

        Args:
            surface: Surface to work on (the Bolza surface by default)
        """
        self.logger = logging.getLogger(__name__)
        self.surface = surface or default_surface()
        self.validator = RunConfigValidator()
        self._handlers: Dict[str, Callable[[RunConfig], Any]] = {
            "classify": self.classify,
            "flow": self.flow,
            "period": self.period,
            "lyapunov": self.lyapunov,
            "conjugacy": self.conjugacy,
            "ergodic-scan": self.ergodic_scan,
            "decay-fit": self.decay_fit,
            "spectra": self.spectra,
            "identity-sweep": self.identity_sweep,
            "projector-check": self.projector_check,
            "zonal-moment": self.zonal_moment,
            "zonal-density": self.zonal_density,
            "haar-sample": self.haar_sample,
            "area-check": self.area_check,
        }

    def run(self, config: RunConfig) -> int:
        """Validate, dispatch and write the report.

        Args:
            config: Parsed run configuration

        Returns:
            int: 0 on success, 2 on invalid input, 1 on any other failure
        """
        validation = self.validator.validate(config)
        if not validation:
            for message in validation.errors:
                self.logger.error(message)
            return EXIT_VALIDATION_ERROR

        self.logger.info(f"Running {config.subcommand} (seed {config.seed}, shards {config.shards})")
        started = time.perf_counter()
        try:
            validate_seed(config.seed)
            result = self._handlers[config.subcommand](config)
        except (DomainError, FitError) as e:
            self.logger.error(f"{config.subcommand} rejected its input: {e}")
            return EXIT_VALIDATION_ERROR
        except Exception as e:
            self.logger.exception(f"{config.subcommand} failed: {e}")
            return EXIT_RUNTIME_ERROR
        wall_time_ms = 0 if config.freeze_clock else int(round(1000.0 * (time.perf_counter() - started)))

        try:
            writer = get_writer_factory().get_writer(config.format)
            payload = result if config.format == "csv" else self.envelope(config, result, wall_time_ms)
            writer.write(payload, config.output_path)
        except (ReportError, OSError) as e:
            self.logger.error(f"Could not write report: {e}")
            return EXIT_RUNTIME_ERROR

        self.logger.info(f"{config.subcommand} finished in {wall_time_ms} ms")
        return EXIT_OK

    @staticmethod
    def envelope(config: RunConfig, result: Any, wall_time_ms: int) -> dict:
        """JSON report envelope around a result."""
        return {
            'tool_version': Settings.APP_VERSION,
            'subcommand': config.subcommand,
            'config_echo': config.to_echo(),
            'seed': config.seed,
            'wall_time_ms': wall_time_ms,
            'result': result,
        }

    # =========================================================================
    # HELPERS
    # =========================================================================

    @staticmethod
    def _params(config: RunConfig) -> MagneticParams:
        return MagneticParams(B=float(config.B), E=float(config.E), genus=config.genus)

    @staticmethod
    def _observable(config: RunConfig) -> Observable:
        return Observable(r0=config.r0, fiber_mode=config.fiber_mode)

    # =========================================================================
    # MAGNETIC FLOW
    # =========================================================================

    def classify(self, config: RunConfig) -> dict:
        """Regime, critical energy, period scale and generator determinant."""
        params = self._params(config)
        element_class = magnetic_flow.classify(params)
        result = {
            'regime': str(element_class),
            'energy_regime': element_class.energy_regime(),
            'E_c': params.critical_energy,
        }
        if element_class is not ElementClass.PARABOLIC:
            result['T_E'] = params.period_scale
        result['det'] = 0.25 * params.discriminant
        result['quantized'] = params.quantized
        return result

    def flow(self, config: RunConfig) -> dict:
        """Flow a seeded Haar state for time t on the quotient."""
        params = self._params(config)
        start = magnetic_flow.make_state(self.surface.haar_sample(1, config.seed)[0], params, self.surface)
        end = magnetic_flow.flow(start, config.t, self.surface)
        return {
            'regime': str(params.regime),
            't': config.t,
            'start': start.frame,
            'end': end.frame,
            'start_point': base_point(start.frame),
            'end_point': base_point(end.frame),
        }

    def period(self, config: RunConfig) -> dict:
        """Primitive period and orbit geometry of closed orbits."""
        params = self._params(config)
        t_star = magnetic_flow.primitive_period(params)
        radius = magnetic_flow.orbit_radius(params)
        return {
            't_star': t_star,
            'T_E': params.period_scale,
            'orbit_radius': radius,
            'max_excursion': 2.0 * radius,
        }

    def lyapunov(self, config: RunConfig) -> dict:
        """Exact rate next to the fitted growth of the adjoint norm."""
        params = self._params(config)
        return {
            'regime': str(params.regime),
            'rate_exact': magnetic_flow.lyapunov_rate(params),
            'fit': magnetic_flow.derivative_growth_fit(params, config.t_max, config.n_points),
            't_max': config.t_max,
        }

    def conjugacy(self, config: RunConfig) -> dict:
        """Normal-form conjugacy residual."""
        params = self._params(config)
        result = magnetic_flow.conjugacy_check(params).to_dict()
        if params.regime is not ElementClass.PARABOLIC:
            result['inverse_T_E'] = 1.0 / params.period_scale
        return result

    # =========================================================================
    # ERGODIC
    # =========================================================================

    def ergodic_scan(self, config: RunConfig):
        """Sup-error table of Birkhoff averages, with its decay fit when defined."""
        obs = self._observable(config)
        if config.flow == "horocycle":
            Y = U_PLUS
        elif config.flow == "geodesic":
            Y = X
        else:
            Y = magnetic_flow.generator(self._params(config))
        states = ergodic_lab.scan_states(config.states, config.seed)
        table = ergodic_lab.equidistribution_scan(obs, states, Y, config.horizons, config.dt,
                                                  shards=config.shards)
        if config.format == "csv":
            return table.to_frame()

        errors = table.sup_errors
        result = {
            'flow': config.flow,
            'observable': observable_summary(obs),
            'table': table,
            'strictly_decreasing': all(b < a for a, b in zip(errors, errors[1:])),
        }
        try:
            result['fit'] = ergodic_lab.decay_fit(table)
        except (FitError, ExactConvergence) as e:
            self.logger.warning(f"No decay fit for this scan: {e}")
            result['fit'] = None
        return result

    def decay_fit(self, config: RunConfig) -> dict:
        """Fit theta to a scan CSV written by ergodic-scan."""
        path = Path(config.input_path)
        if not path.is_file():
            raise DomainError(f"no scan table at {path}", "decay_fit")
        table = DecayTable.from_frame(pd.read_csv(path), metadata={'source': str(path)})
        try:
            fit = ergodic_lab.decay_fit(table)
        except ExactConvergence:
            return {'exact_convergence': True, 'n_rows': len(table)}
        return {'exact_convergence': False, **fit.to_dict()}

    # =========================================================================
    # LANDAU LEVELS
    # =========================================================================

    def spectra(self, config: RunConfig):
        """One level when --m is given, the whole ladder otherwise."""
        if config.format == "csv":
            return landau_spectra.levels_table(config.k, config.B, config.genus)
        if config.m is not None:
            level = landau_spectra.landau_level(config.k, config.m, config.B, config.genus)
            result = level.to_dict()
            result['scaled'] = float(level.value / (config.k * config.k))
            return result

        n_levels = landau_spectra.level_count(config.k, config.B)
        result = {
            'k': config.k,
            'B': config.B,
            'N_k': n_levels,
            'E_c': float(config.B * config.B / 2),
            'top_level': landau_spectra.top_level(config.k, config.B, config.genus),
            'scaled_top_level': landau_spectra.scaled_top_level(config.k, config.B, config.genus),
        }
        if config.E is not None:
            result['nearest_m'] = landau_spectra.nearest_level(config.k, config.B, config.E, config.genus)
        return result

    def identity_sweep(self, config: RunConfig) -> dict:
        """Exact residual and monotonicity sweep."""
        return landau_spectra.identity_sweep(config.k_max, config.B_values, config.genus, config.shards)

    def projector_check(self, config: RunConfig) -> dict:
        """Projector identities of a diagonal model."""
        model = WeinsteinModel(k=config.k, levels=tuple(config.levels),
                               multiplicities=tuple(config.multiplicities) or None)
        result = landau_spectra.projector_check(model)
        result['spectrum'] = landau_spectra.spectrum_summary(model)
        return result

    # =========================================================================
    # ZONAL TORUS
    # =========================================================================

    def zonal_moment(self, config: RunConfig) -> dict:
        """Moments of the torus measure for the bump and for the constant 1."""
        tor = zonal_lab.zonal_torus(self._params(config))
        obs = self._observable(config)
        return {
            'torus': tor,
            'observable': obs,
            'moment': zonal_lab.defect_moment(tor, obs, config.grid_theta, config.grid_t),
            'constant_moment': zonal_lab.defect_moment(tor, Observable.constant_observable(1.0),
                                                       config.grid_theta, config.grid_t),
        }

    def zonal_density(self, config: RunConfig):
        """Radial density of the torus projection and its fits near the anchor."""
        params = self._params(config)
        tor = zonal_lab.zonal_torus(params)
        hist = zonal_lab.radial_density(tor, config.n_samples, config.seed, config.bins, config.shards)
        if config.format == "csv":
            return hist.to_frame()
        fit = zonal_lab.blowup_fit(hist)
        return {
            'n': hist.n,
            'bins': int(hist.counts.size),
            'mass': hist.mass(),
            'pdf_at_zero': zonal_lab.pdf_at_zero(hist),
            'expected_pdf_at_zero': zonal_lab.expected_pdf_at_zero(params),
            'blowup_fit': fit,
            'normalization': zonal_lab.normalization_report(tor, fit),
        }

    # =========================================================================
    # SURFACE
    # =========================================================================

    def haar_sample(self, config: RunConfig):
        """Seeded Haar frames with their base points."""
        frames = self.surface.haar_sample_array(config.n_samples, config.seed, config.shards)
        re, im = batch_base_points(frames) if len(frames) else (np.empty(0), np.empty(0))
        table = pd.DataFrame({
            'm11': frames[:, 0, 0], 'm12': frames[:, 0, 1],
            'm21': frames[:, 1, 0], 'm22': frames[:, 1, 1],
            're': re, 'im': im,
        })
        if config.format == "csv":
            return table
        return {'n': len(table), 'frames': table}

    def area_check(self, config: RunConfig) -> dict:
        """Acceptance-ratio area estimate and the relator diagnostic."""
        result = self.surface.area_estimate(config.n_samples, config.seed, config.shards)
        result['generator_traces'] = [abs(g.trace()) for g in self.surface.group.generators]
        result['relator'] = self.surface.relator_search()
        return result
