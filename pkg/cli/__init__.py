"""
Magnetic Surface Lab - Command-Line Package

Flag parsing into RunConfig and the experiment runner.
"""

from .run_config import RunConfig, build_parser, parse_args
from .runner import ExperimentRunner, EXIT_OK, EXIT_RUNTIME_ERROR, EXIT_VALIDATION_ERROR

__all__ = [
    'RunConfig', 'build_parser', 'parse_args',
    'ExperimentRunner', 'EXIT_OK', 'EXIT_RUNTIME_ERROR', 'EXIT_VALIDATION_ERROR',
]
