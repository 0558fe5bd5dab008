"""
Magnetic Surface Lab - Run Configuration Validation

Checks a parsed run configuration against the subcommand table and the
numeric rules in Settings before anything is dispatched.
"""

import logging
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Any, List, Optional

from config.settings import Settings


@dataclass
class ValidationResult:
    """Collected problems of one validation pass; truthy when there are none."""

    errors: List[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def add_error(self, message: str) -> None:
        self.errors.append(message)

    def merge(self, other: 'ValidationResult') -> 'ValidationResult':
        """New result holding the errors of both."""
        return ValidationResult(self.errors + other.errors)

    def __bool__(self) -> bool:
        return self.is_valid

    def __str__(self) -> str:
        return "Valid" if self.is_valid else f"Invalid: {'; '.join(self.errors)}"


def check_range(name: str, value: Any, rule_name: Optional[str] = None) -> ValidationResult:
    """Check one numeric value against Settings.VALIDATION_RULES.

    Args:
        name: Flag name used in messages
        value: Value to check (None passes)
        rule_name: Rule key when it differs from the flag name

    Returns:
        ValidationResult: Range check result
    """
    result = ValidationResult()
    if value is None:
        return result
    rule = Settings.VALIDATION_RULES.get(rule_name or name)
    if rule is None:
        return result
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(float(value)):
        result.add_error(f"--{name} must be a finite number, got {value!r}")
        return result

    minimum = rule.get("min_value")
    if minimum is not None:
        if rule.get("exclusive_min", False) and not value > minimum:
            result.add_error(f"--{name} must be greater than {minimum}, got {value}")
        elif value < minimum:
            result.add_error(f"--{name} must be at least {minimum}, got {value}")
    maximum = rule.get("max_value")
    if maximum is not None and value > maximum:
        result.add_error(f"--{name} must be at most {maximum}, got {value}")
    return result


class RunConfigValidator:
    """Validates run configurations before dispatch."""

    # config attribute -> rule key
    _RANGE_FIELDS = {
        "B": "B",
        "E": "E",
        "k": "k",
        "m": "m",
        "genus": "genus",
        "n_samples": "n_samples",
        "r0": "r0",
        "dt": "dt",
        "shards": "shards",
        "t_max": "t_max",
        "grid_theta": "grid",
        "grid_t": "grid",
        "k_max": "k",
        "states": "n_samples",
    }

    def __init__(self):
        """Initialize run configuration validator."""
        self.logger = logging.getLogger(__name__)

    def validate(self, config) -> ValidationResult:
        """Validate a RunConfig.

        Args:
            config: Parsed run configuration

        Returns:
            ValidationResult: All problems found
        """
        result = ValidationResult()
        spec = Settings.SUBCOMMANDS.get(config.subcommand)
        if spec is None:
            result.add_error(f"unknown subcommand '{config.subcommand}'")
            return result

        required = list(spec["required"])
        if getattr(config, "flow", None) == "magnetic":
            required += ["B", "E"]
        for name in required:
            if getattr(config, name, None) in (None, [], ()):
                result.add_error(f"{config.subcommand} requires --{name.replace('_', '-')}")
        if config.format not in spec["formats"]:
            result.add_error(f"{config.subcommand} writes {', '.join(spec['formats'])}, not {config.format}")

        for name, rule in self._RANGE_FIELDS.items():
            value = getattr(config, name, None)
            # rationals are checked as floats
            if value is not None and not isinstance(value, (int, float)):
                value = float(value)
            result = result.merge(check_range(name.replace('_', '-'), value, rule))

        result = result.merge(self._validate_lists(config))
        if result.is_valid:
            self.logger.debug(f"Run configuration for {config.subcommand} is valid")
        else:
            self.logger.debug(f"Run configuration rejected: {result}")
        return result

    def _validate_lists(self, config) -> ValidationResult:
        result = ValidationResult()
        if config.horizons and any(not (t > 0 and math.isfinite(t)) for t in config.horizons):
            result.add_error("--horizons must all be positive")
        if config.B_values and any(b <= 0 for b in config.B_values):
            result.add_error("--B-values must all be positive")
        if config.levels and config.multiplicities and len(config.levels) != len(config.multiplicities):
            result.add_error("--multiplicities needs one entry per level")
        if config.multiplicities and any(mult < 1 for mult in config.multiplicities):
            result.add_error("--multiplicities must be positive")
        if config.seed is not None and not 0 <= config.seed < 2 ** 64:
            result.add_error(f"--seed must lie in [0, 2^64), got {config.seed}")
        return result


def validate_run_config(config) -> ValidationResult:
    """Convenience wrapper around RunConfigValidator."""
    return RunConfigValidator().validate(config)
