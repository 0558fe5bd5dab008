"""
Magnetic Surface Lab - CSV Report Writer

Tables are written by pandas with a header row, comma separators, LF line
endings and floats at 17 significant digits.
"""

from typing import Any

import pandas as pd

from config.settings import Settings
from reports.base_writer import BaseReportWriter, ReportError


class CSVReportWriter(BaseReportWriter):
    """Writes DataFrame payloads as CSV."""

    @property
    def format_name(self) -> str:
        return "csv"

    @property
    def file_extension(self) -> str:
        return ".csv"

    def render(self, payload: Any) -> str:
        """Encode a DataFrame (or something convertible to one) as CSV text."""
        if not isinstance(payload, pd.DataFrame):
            try:
                payload = pd.DataFrame(payload)
            except (ValueError, TypeError) as e:
                raise ReportError(f"payload is not tabular: {e}", self.format_name) from e
        config = Settings.REPORT_CONFIG
        return payload.to_csv(index=False, float_format=config["float_format"],
                              lineterminator=config["line_terminator"])
