"""
Magnetic Surface Lab - File Utilities

Directory creation and atomic report writes: content goes to a temporary
file in the destination directory and is renamed into place.
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Union

from config.settings import Settings


class FileUtils:
    """Utility class for file operations."""

    @staticmethod
    def ensure_directory(directory_path: Path) -> bool:
        """Ensure directory exists, create if necessary.

        Args:
            directory_path: Path to directory

        Returns:
            bool: True if directory exists or was created successfully
        """
        try:
            Path(directory_path).mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logging.getLogger(__name__).error(f"Failed to create directory {directory_path}: {e}")
            return False

    @staticmethod
    def atomic_write_text(file_path: Union[str, Path], text: str, encoding: str = None) -> Path:
        """Write text so that readers see either the old file or the complete new one.

        Newlines are written as-is (no platform translation).

        Args:
            file_path: Destination path
            text: Content
            encoding: Text encoding (default UTF-8)

        Returns:
            Path: The destination path
        """
        logger = logging.getLogger(__name__)
        destination = Path(file_path)
        encoding = encoding or Settings.REPORT_CONFIG["encoding"]
        if not FileUtils.ensure_directory(destination.parent if str(destination.parent) else Path('.')):
            raise OSError(f"cannot create directory for {destination}")

        fd, temp_name = tempfile.mkstemp(prefix=f".{destination.name}.", suffix=".tmp",
                                         dir=str(destination.parent))
        try:
            with os.fdopen(fd, 'w', encoding=encoding, newline='') as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temp_name, destination)
        except BaseException:
            try:
                os.unlink(temp_name)
            except OSError:
                pass
            raise
        logger.debug(f"Wrote {len(text)} characters to {destination}")
        return destination
