"""
Magnetic Surface Lab - Logging Configuration

Logging setup for command-line runs. Console output goes to stderr so that
stdout only ever carries reports; a rotating log file is optional.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Dict, List, Optional, Union

from config.settings import Settings

_CONSOLE_FORMAT = '%(asctime)s %(levelname)-8s %(name)s: %(message)s'


class ColoredFormatter(logging.Formatter):
    """Console formatter that tints the level name on terminals."""

    LEVEL_COLORS: Dict[int, str] = {
        logging.DEBUG: '\033[36m',
        logging.INFO: '\033[32m',
        logging.WARNING: '\033[33m',
        logging.ERROR: '\033[31m',
        logging.CRITICAL: '\033[35m',
    }
    RESET = '\033[0m'

    def formatMessage(self, record: logging.LogRecord) -> str:
        color = self.LEVEL_COLORS.get(record.levelno)
        if color is None:
            return super().formatMessage(record)
        plain = record.levelname
        record.levelname = f"{color}{plain}{self.RESET}"
        try:
            return super().formatMessage(record)
        finally:
            record.levelname = plain


def _numeric_level(level: Union[str, int]) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).upper())
    return value if isinstance(value, int) else logging.WARNING


def _console_handlers(logger: logging.Logger) -> List[logging.Handler]:
    return [h for h in logger.handlers
            if isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler)]


def _file_handler(log_path: Path) -> logging.Handler:
    config = Settings.LOGGING_CONFIG
    log_path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        filename=str(log_path),
        maxBytes=config["max_bytes"],
        backupCount=config["backup_count"],
        encoding='utf-8',
    )
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(config["format"], datefmt='%Y-%m-%d %H:%M:%S'))
    return handler


def setup_logging(console_output: Optional[bool] = None,
                  log_level: Optional[str] = None,
                  log_file: Optional[Union[str, Path]] = None) -> None:
    """Replace the root handlers for one run.

    Args:
        console_output: Log to stderr (default from Settings)
        log_level: Console level name (default from Settings)
        log_file: Rotating log file receiving DEBUG and up; when omitted the
            Settings file is used only if file output is switched on there
    """
    config = Settings.LOGGING_CONFIG
    if console_output is None:
        console_output = config["console_output"]
    level = _numeric_level(log_level or config["level"])
    if log_file is None and config["file_output"]:
        log_file = config["file"]

    root = logging.getLogger()
    for old in list(root.handlers):
        root.removeHandler(old)
        old.close()
    root.setLevel(level)

    if console_output:
        stream = logging.StreamHandler(sys.stderr)
        stream.setLevel(level)
        tty = getattr(sys.stderr, "isatty", lambda: False)()
        stream.setFormatter((ColoredFormatter if tty else logging.Formatter)(_CONSOLE_FORMAT, datefmt='%H:%M:%S'))
        root.addHandler(stream)

    if log_file is not None:
        try:
            root.addHandler(_file_handler(Path(log_file)))
            root.setLevel(logging.DEBUG)
        except OSError as e:
            logging.getLogger(__name__).warning(f"File logging disabled, cannot open {log_file}: {e}")

    logging.getLogger(__name__).debug(
        f"Logging ready: console={console_output} level={logging.getLevelName(level)} file={log_file}")


class LogContext:
    """Temporarily run the root logger and its console handlers at another level."""

    def __init__(self, level: Union[str, int]):
        self.level = _numeric_level(level)
        self._saved: Optional[tuple] = None

    def __enter__(self) -> 'LogContext':
        root = logging.getLogger()
        consoles = _console_handlers(root)
        self._saved = (root.level, [(h, h.level) for h in consoles])
        root.setLevel(self.level)
        for handler in consoles:
            handler.setLevel(self.level)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self._saved is None:
            return
        root_level, handler_levels = self._saved
        logging.getLogger().setLevel(root_level)
        for handler, level in handler_levels:
            handler.setLevel(level)
        self._saved = None
