"""
Magnetic Surface Lab - Utilities Package

Logging, atomic file output, validation, number formatting and seeded
work splitting.
"""

from .logger import setup_logging, LogContext
from .file_utils import FileUtils
from .validation import ValidationResult, RunConfigValidator, check_range, validate_run_config
from .number_format import NumberFormatter, to_fraction, parse_rational, format_rational, format_float
from .seeding import validate_seed, chunk_rng, chunk_plan, ordered_map, concat

__all__ = [
    'setup_logging', 'LogContext',
    'FileUtils',
    'ValidationResult', 'RunConfigValidator', 'check_range', 'validate_run_config',
    'NumberFormatter', 'to_fraction', 'parse_rational', 'format_rational', 'format_float',
    'validate_seed', 'chunk_rng', 'chunk_plan', 'ordered_map', 'concat',
]
