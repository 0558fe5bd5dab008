"""
Magnetic Surface Lab - Application Settings

Centralized configuration for the laboratory: numerical tolerances,
experiment defaults, Monte-Carlo chunking, logging and validation rules.
"""

import math
from pathlib import Path


class Settings:
    """Application configuration constants and settings."""

    # =============================================================================
    # APPLICATION METADATA
    # =============================================================================

    APP_NAME = "Magnetic Surface Lab"
    APP_VERSION = "1.0.0"

    # =============================================================================
    # PATHS AND DIRECTORIES
    # =============================================================================

    PROJECT_ROOT = Path(__file__).parent.parent
    LOGS_DIR = PROJECT_ROOT / "logs"

    # =============================================================================
    # NUMERICAL TOLERANCES
    # =============================================================================

    TOLERANCES = {
        # Renormalize a group element by 1/sqrt(det) beyond this drift
        "det_drift": 1e-14,
        # Hard bound on |det - 1| after any group operation
        "det_bound": 1e-12,
        # |det Y| below this is routed to the nilpotent branch I + tY
        "parabolic": 1e-14,
        # First entry above this magnitude fixes the projective sign
        "sign_canonical": 1e-9,
        # Slack in the Dirichlet-domain distance comparison
        "domain_slack": 1e-12,
        # Default entrywise tolerance for projective equality
        "projective_equal": 1e-9,
        # Quantization condition 2B(g-1) in Z for float inputs
        "quantization": 1e-12,
    }

    # =============================================================================
    # SURFACE CONFIGURATION
    # =============================================================================

    SURFACE_CONFIG = {
        "genus": 2,
        "reduction_cap": 10_000,
        "default_word_radius": 2,
        # cosh(l0 / 2) = cot(pi / 8) = 1 + sqrt(2)
        "half_translation_cosh": 1.0 + math.sqrt(2.0),
        # cosh(r_v) = cot(pi / 8)^2 = 3 + 2 sqrt(2)
        "vertex_radius_cosh": 3.0 + 2.0 * math.sqrt(2.0),
    }

    # =============================================================================
    # EXPERIMENT DEFAULTS
    # =============================================================================

    FLOW_CONFIG = {
        # Long flows are composed from steps no longer than this
        "max_step": 1.0,
        # Last fraction of the log grid used by the growth fit
        "growth_tail_fraction": 0.5,
        "growth_min_points": 4,
        "growth_default_points": 200,
        # Midpoint samples per period when averaging elliptic log-norms
        "growth_period_samples": 64,
        # Conjugacy residual is measured on this symmetric time grid
        "conjugacy_t_max": 5.0,
        "conjugacy_points": 41,
    }

    OBSERVABLE_CONFIG = {
        # Below the injectivity radius l0 / 2 ~ 1.5286 so metric balls embed
        "max_radius": 1.4,
        "min_liouville_samples": 100,
    }

    ERGODIC_CONFIG = {
        "default_dt": 0.01,
        "max_dt": 0.1,
        "scan_states": 20,
        "min_scan_states": 10,
        "min_horizons": 4,
        "min_fit_horizon": 10.0,
    }

    ZONAL_CONFIG = {
        "bin_width": 0.005,
        "fit_window": 0.1,
        "min_fit_bins": 8,
        "min_grid": 32,
        "min_samples": 100_000,
        "pdf_zero_window": 0.05,
    }

    MONTE_CARLO_CONFIG = {
        # Unit of work for seeded streams; shards receive whole chunks
        "chunk_size": 65_536,
        # Candidate oversampling for rejection sampling inside a chunk
        "rejection_batch_factor": 3,
    }

    # =============================================================================
    # REPORT CONFIGURATION
    # =============================================================================

    REPORT_CONFIG = {
        # Both writers print floats with 17 significant digits
        "float_format": "%.17g",
        "encoding": "utf-8",
        "line_terminator": "\n",
        # Flags that change how a run executes but not what it computes
        "echo_excluded": ["shards", "output_path", "freeze_clock", "log_level", "log_file"],
    }

    # =============================================================================
    # LOGGING CONFIGURATION
    # =============================================================================

    LOGGING_CONFIG = {
        "level": "WARNING",
        "format": "%(asctime)s %(levelname)-8s %(name)s %(funcName)s:%(lineno)d: %(message)s",
        "file": LOGS_DIR / "magnetic_lab.log",
        "max_bytes": 10 * 1024 * 1024,  # 10MB
        "backup_count": 5,
        "console_output": True,
        "file_output": False
    }

    # =============================================================================
    # VALIDATION RULES
    # =============================================================================

    VALIDATION_RULES = {
        "B": {
            "min_value": 0.0,
            "exclusive_min": True,
        },
        "E": {
            "min_value": 0.0,
        },
        "k": {
            "min_value": 1,
        },
        "m": {
            "min_value": 0,
        },
        "genus": {
            "min_value": 2,
        },
        "n_samples": {
            "min_value": 0,
        },
        "r0": {
            "min_value": 0.0,
            "exclusive_min": True,
            "max_value": OBSERVABLE_CONFIG["max_radius"],
        },
        "dt": {
            "min_value": 0.0,
            "exclusive_min": True,
            "max_value": ERGODIC_CONFIG["max_dt"],
        },
        "shards": {
            "min_value": 1,
        },
        "t_max": {
            "min_value": 10.0,
        },
        "grid": {
            "min_value": ZONAL_CONFIG["min_grid"],
        },
    }

    # =============================================================================
    # SUBCOMMANDS
    # =============================================================================

    # Flags each subcommand needs and the report formats it can emit
    SUBCOMMANDS = {
        "classify": {"required": ["B", "E"], "formats": ["json"]},
        "flow": {"required": ["B", "E", "t"], "formats": ["json"]},
        "period": {"required": ["B", "E"], "formats": ["json"]},
        "lyapunov": {"required": ["B", "E"], "formats": ["json"]},
        "conjugacy": {"required": ["B", "E"], "formats": ["json"]},
        "ergodic-scan": {"required": ["horizons"], "formats": ["json", "csv"]},
        "decay-fit": {"required": ["input_path"], "formats": ["json"]},
        "spectra": {"required": ["B", "k"], "formats": ["json", "csv"]},
        "identity-sweep": {"required": ["k_max", "B_values"], "formats": ["json"]},
        "projector-check": {"required": ["k", "levels"], "formats": ["json"]},
        "zonal-moment": {"required": ["B", "E"], "formats": ["json"]},
        "zonal-density": {"required": ["B", "E", "n_samples"], "formats": ["json", "csv"]},
        "haar-sample": {"required": ["n_samples"], "formats": ["json", "csv"]},
        "area-check": {"required": ["n_samples"], "formats": ["json"]},
    }

    CLI_DEFAULTS = {
        "seed": 0,
        "horizons": [10.0, 100.0, 1000.0, 10000.0],
        "r0": 1.2,
        "fiber_mode": 0,
        "flow": "horocycle",
        "t_max": 1000.0,
        "grid": 64,
        "B_values": ["1/2", "1", "3/2", "2"],
    }
