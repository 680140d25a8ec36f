"""Logging for the eco-communities command line and library.

Library modules only call ``get_logger(__name__)``; handlers are installed
once by ``setup_logging`` from the CLI entry point.
"""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
QUIET_LOGGERS = ("numba",)

# stdout is reserved for command results
console = Console(stderr=True)


def _console_handler(rich_output: bool) -> logging.Handler:
    if rich_output:
        return RichHandler(console=console, show_time=True, show_path=False, rich_tracebacks=True)
    handler = logging.StreamHandler(console.file)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def setup_logging(
    level: int = logging.INFO,
    log_file: Optional[Path] = None,
    rich_output: bool = True,
) -> None:
    """Route log records to stderr and, optionally, a DEBUG-level log file.

    Args:
        level: Threshold for the console handler
        log_file: Also write every record at DEBUG and above here
        rich_output: Use a RichHandler instead of plain formatted lines
    """
    stream = _console_handler(rich_output)
    stream.setLevel(level)
    handlers: list[logging.Handler] = [stream]

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        sink = logging.FileHandler(log_file, encoding="utf-8")
        sink.setLevel(logging.DEBUG)
        sink.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(sink)

    logging.basicConfig(
        level=min(level, logging.DEBUG) if log_file else level,
        handlers=handlers,
        force=True,
    )
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class ProgressTracker:
    """Sweep counter that logs at DEBUG every ``log_every`` sweeps and on the last one."""

    def __init__(self, description: str = "Sampling", log_every: int = 100):
        self.description = description
        self.log_every = max(1, log_every)
        self.current = 0
        self.total = 0
        self._logger = get_logger(f"{__name__}.progress")

    def update(self, current: int, total: int, message: str = "") -> None:
        self.current = current
        self.total = total
        if current % self.log_every and current != total:
            return
        share = current / total if total > 0 else 0.0
        line = f"{self.description}: sweep {current}/{total} ({share:.0%})"
        self._logger.debug(f"{line} - {message}" if message else line)

    def complete(self, message: str = "done") -> None:
        self._logger.debug(f"{self.description}: {message}")
