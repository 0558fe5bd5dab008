"""
Magnetic Surface Lab - Report Writer Factory

Registry of report writers by format name.
"""

import logging
from typing import Dict, List

from reports.base_writer import BaseReportWriter, ReportError
from reports.csv_writer import CSVReportWriter
from reports.json_writer import JSONReportWriter


class ReportWriterFactory:
    """Factory for report writers."""

    def __init__(self):
        """Initialize the writer factory."""
        self.logger = logging.getLogger(__name__)
        self._writers: Dict[str, BaseReportWriter] = {}
        self._register_writers()

    def _register_writers(self) -> None:
        """Register all available writers."""
        for writer in (JSONReportWriter(), CSVReportWriter()):
            self._writers[writer.format_name] = writer
        self.logger.debug(f"Registered {len(self._writers)} writers: {list(self._writers)}")

    def get_writer(self, format_name: str) -> BaseReportWriter:
        """Writer for a format name.

        Args:
            format_name: 'json' or 'csv'

        Returns:
            BaseReportWriter: The registered writer
        """
        try:
            return self._writers[format_name.lower()]
        except KeyError:
            raise ReportError(f"unknown report format '{format_name}'") from None

    def supported_formats(self) -> List[str]:
        """Registered format names."""
        return list(self._writers)


_writer_factory = None


def get_writer_factory() -> ReportWriterFactory:
    """Global writer factory instance."""
    global _writer_factory
    if _writer_factory is None:
        _writer_factory = ReportWriterFactory()
    return _writer_factory
