"""
Magnetic Surface Lab - JSON Report Writer

Reports are UTF-8 JSON with keys in insertion order. Floats carry 17
significant digits like the CSV tables, rationals are "num/den" strings
and non-finite floats become null.
"""

import dataclasses
import json
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from reports.base_writer import BaseReportWriter, ReportError
from utils.number_format import format_float, format_rational


def to_serializable(value: Any) -> Any:
    """Convert report values to plain JSON types.

    Args:
        value: Nested dicts, lists, numpy values, Fractions, Enums or
            objects with a to_dict() method

    Returns:
        Any: Structure of dict, list, str, int, float, bool and None
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {'re': to_serializable(value.real), 'im': to_serializable(value.imag)}
    if isinstance(value, np.ndarray):
        return [to_serializable(item) for item in value.tolist()]
    if isinstance(value, pd.DataFrame):
        return [to_serializable(row) for row in value.to_dict(orient='records')]
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, 'to_dict'):
        return to_serializable(value.to_dict())
    if dataclasses.is_dataclass(value):
        return to_serializable(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(key): to_serializable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [to_serializable(item) for item in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


class _ReportEncoder(json.JSONEncoder):
    """Standard encoder except that floats go through format_float."""

    def iterencode(self, o: Any, _one_shot: bool = False):
        if self.ensure_ascii:
            string_encoder = json.encoder.encode_basestring_ascii
        else:
            string_encoder = json.encoder.encode_basestring
        return json.encoder._make_iterencode(
            {} if self.check_circular else None, self.default, string_encoder, self.indent, format_float,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot)(o, 0)


class JSONReportWriter(BaseReportWriter):
    """Writes report envelopes as indented JSON."""

    @property
    def format_name(self) -> str:
        return "json"

    @property
    def file_extension(self) -> str:
        return ".json"

    def render(self, payload: Any) -> str:
        """Encode a payload as JSON with a trailing newline."""
        try:
            data = to_serializable(payload)
        except TypeError as e:
            raise ReportError(str(e), self.format_name) from e
        return json.dumps(data, cls=_ReportEncoder, indent=2, ensure_ascii=False) + "\n"
