"""
Logging system for algcps
"""
import logging
import sys
from pathlib import Path
from typing import Optional

LOGGER_NAME = 'algcps'

# ANSI color codes
COLORS = {
    'DEBUG': '\033[36m',     # Cyan
    'INFO': '\033[32m',      # Green
    'WARNING': '\033[33m',   # Yellow
    'ERROR': '\033[31m',     # Red
    'CRITICAL': '\033[35m',  # Magenta
    'RESET': '\033[0m'
}

CONSOLE_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
WORKER_FORMAT = '%(asctime)s [%(levelname)s] %(processName)s %(message)s'


class ColoredFormatter(logging.Formatter):
    """Formatter that colors the level name when writing to a terminal."""

    def __init__(self, fmt: str, datefmt: Optional[str] = None, use_color: bool = True):
        super().__init__(fmt, datefmt=datefmt)
        self.use_color = use_color

    def format(self, record):
        original_levelname = record.levelname
        if self.use_color and original_levelname in COLORS:
            record.levelname = f"{COLORS[original_levelname]}{original_levelname}{COLORS['RESET']}"
        try:
            return super().format(record)
        finally:
            record.levelname = original_levelname


def _console_level(verbose: bool, quiet: bool) -> int:
    if quiet:
        return logging.ERROR
    if verbose:
        return logging.DEBUG
    return logging.WARNING


def _console_handler(verbose: bool, quiet: bool, fmt: str) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(_console_level(verbose, quiet))
    handler.setFormatter(ColoredFormatter(fmt, datefmt='%H:%M:%S', use_color=sys.stderr.isatty()))
    return handler


def setup_logging(
    log_dir: Optional[Path] = None,
    verbose: bool = False,
    quiet: bool = False
) -> logging.Logger:
    """
    Setup logging with a console handler and an optional file handler.

    The console handler writes to stderr; stdout carries command output
    (terms, traces, JSON reports) and stays machine-readable.

    Args:
        log_dir: Directory for execution.log (if None, console only)
        verbose: Enable DEBUG level logging
        quiet: Only show ERROR and CRITICAL

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)
    logger.handlers.clear()
    logger.addHandler(_console_handler(verbose, quiet, CONSOLE_FORMAT))

    if log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)
        log_file = log_dir / "execution.log"

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)  # Always DEBUG in file
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s [%(levelname)s] %(name)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        logger.addHandler(file_handler)

        logger.debug(f"Logging to file: {log_file}")

    return logger


def configure_worker(verbose: bool = False, quiet: bool = False) -> None:
    """
    Process pool initializer: console logging only, tagged with the worker name.

    Workers never write execution.log; the parent process logs each
    merged report instead.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)
    logger.handlers.clear()
    logger.addHandler(_console_handler(verbose, quiet, WORKER_FORMAT))


def get_logger() -> logging.Logger:
    """Get the algcps logger instance."""
    return logging.getLogger(LOGGER_NAME)
