"""
Magnetic Surface Lab - Base Report Writer

Abstract writer interface shared by the JSON and CSV report formats.
Writers render a payload to text; persisting goes through an atomic
write or to stdout.
"""

import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Optional, Union

from utils.file_utils import FileUtils


class ReportError(Exception):
    """Raised when a payload cannot be rendered in a format."""

    def __init__(self, message: str, writer_name: str = ""):
        """Initialize report error.

        Args:
            message: Error message
            writer_name: Name of the writer that failed
        """
        self.message = message
        self.writer_name = writer_name
        super().__init__(self.message)

    def __str__(self) -> str:
        """String representation with writer context."""
        if self.writer_name:
            return f"{self.writer_name}: {self.message}"
        return self.message


class BaseReportWriter(ABC):
    """Abstract base writer for experiment reports."""

    def __init__(self):
        """Initialize the writer."""
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Format identifier used on the command line (e.g. 'json')."""

    @property
    @abstractmethod
    def file_extension(self) -> str:
        """Default file extension including the dot."""

    @abstractmethod
    def render(self, payload: Any) -> str:
        """Render a payload to text.

        Args:
            payload: Report content

        Returns:
            str: Encoded report ending with a newline
        """

    def write(self, payload: Any, output_path: Optional[Union[str, Path]] = None) -> str:
        """Render a payload and write it to a file or stdout.

        Args:
            payload: Report content
            output_path: Destination file (stdout when None)

        Returns:
            str: The rendered text
        """
        text = self.render(payload)
        if output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            FileUtils.atomic_write_text(output_path, text)
            self.logger.info(f"Wrote {self.format_name} report to {output_path}")
        return text
