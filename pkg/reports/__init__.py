"""
Magnetic Surface Lab - Reports Package

JSON and CSV report writers with atomic file output.
"""

from .base_writer import BaseReportWriter, ReportError
from .json_writer import JSONReportWriter, to_serializable
from .csv_writer import CSVReportWriter
from .writer_factory import ReportWriterFactory, get_writer_factory

__all__ = [
    'BaseReportWriter', 'ReportError',
    'JSONReportWriter', 'to_serializable',
    'CSVReportWriter',
    'ReportWriterFactory', 'get_writer_factory',
]
