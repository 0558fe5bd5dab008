"""
Magnetic Surface Lab - Number Formatting

Exact rationals parsed from flags and written to reports as "num/den" strings,
and report floats at 17 significant digits.
"""

import math
from decimal import Decimal
from fractions import Fraction
from typing import Union

from config.settings import Settings
from core.errors import DomainError

Number = Union[int, float, Fraction, Decimal, str]


class NumberFormatter:
    """Formats exact rationals and floats for reports."""

    @staticmethod
    def format_rational(value: Fraction) -> str:
        """Exact rational as "num/den" (integers keep the "/1")."""
        value = Fraction(value)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def format_float(value: float) -> str:
        """Finite float at the report precision, always readable back as a float.

        1.0 -> "1.0", 0.1 -> "0.10000000000000001".
        """
        if not math.isfinite(value):
            raise DomainError(f"cannot format non-finite float {value}", "format_float")
        text = Settings.REPORT_CONFIG["float_format"] % value
        if "." not in text and "e" not in text:
            text += ".0"
        return text


def to_fraction(value: Number) -> Fraction:
    """Exact rational from an int, Fraction, Decimal or text.

    Text accepts "p/q", integers and decimal literals ("1.5" -> 3/2).
    Floats are converted through their shortest decimal repr, so 0.7 -> 7/10.

    Args:
        value: Number or text

    Returns:
        Fraction: Exact value
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a number: {value!r}", "to_fraction")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"not a finite number: {value!r}", "to_fraction")
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot parse rational {value!r}: {e}", "to_fraction") from e


def parse_rational(text: str) -> Fraction:
    """Inverse of NumberFormatter.format_rational."""
    return to_fraction(text)


def format_rational(value: Fraction) -> str:
    """Module-level shortcut for NumberFormatter.format_rational."""
    return NumberFormatter.format_rational(value)


def format_float(value: float) -> str:
    """Module-level shortcut for NumberFormatter.format_float."""
    return NumberFormatter.format_float(value)
