"""
Logging for the ramification toolkit.

Console records go to stderr (stdout carries the CLI's JSON documents).
File logging is opt-in through config.logging.log_to_file and writes one
file per logger and day, plain or JSON.
"""
import logging
import sys
import time
from datetime import datetime, timezone
from typing import List

from pythonjsonlogger import jsonlogger

from config import LOGS_DIR

FILE_FORMAT = '%(asctime)s %(levelname)s %(name)s:%(lineno)d %(message)s'


class JSONFormatter(jsonlogger.JsonFormatter):
    """JSON records; copies the toolkit's structured extras when present."""

    EXTRA_FIELDS = ('operation', 'duration_ms', 'p', 'm', 'n', 'suite')

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        log_record['timestamp'] = datetime.fromtimestamp(record.created, timezone.utc).isoformat()
        log_record['level'] = record.levelname
        log_record['logger'] = record.name
        for key in self.EXTRA_FIELDS:
            value = getattr(record, key, None)
            if value is not None:
                log_record[key] = round(value, 3) if key == 'duration_ms' else value


class ColoredFormatter(logging.Formatter):
    """
    Short console lines: LEVEL logger - message [key=value ...].
    Colors are used only when the stream is a terminal.
    """

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def __init__(self, use_color: bool = False):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        level = record.levelname
        if self.use_color:
            level = f"{self.COLORS.get(level, '')}{level}{self.RESET}"
        details = " ".join(
            f"{key}={getattr(record, key)}"
            for key in JSONFormatter.EXTRA_FIELDS
            if key != 'duration_ms' and getattr(record, key, None) is not None
        )
        line = f"{level} {record.name} - {record.getMessage()}"
        if details:
            line += f" [{details}]"
        if record.exc_info:
            line += f"\n{self.formatException(record.exc_info)}"
        return line


def _handlers(name: str, log_to_file: bool, log_to_console: bool, json_format: bool) -> List[logging.Handler]:
    handlers: List[logging.Handler] = []
    if log_to_console:
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(ColoredFormatter(use_color=sys.stderr.isatty()))
        handlers.append(console)
    if log_to_file:
        LOGS_DIR.mkdir(parents=True, exist_ok=True)
        stamp = datetime.now().strftime('%Y%m%d')
        handler = logging.FileHandler(LOGS_DIR / f"{name}_{stamp}.log", mode='a', encoding='utf-8')
        handler.setFormatter(JSONFormatter('%(message)s') if json_format else logging.Formatter(FILE_FORMAT))
        handlers.append(handler)
    return handlers


def setup_logging(
    name: str = "ramify",
    level: str = "WARNING",
    log_to_file: bool = False,
    log_to_console: bool = True,
    json_format: bool = False
) -> logging.Logger:
    """
    Attach handlers to a logger once.

    Args:
        name: Logger name
        level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_to_file: Also write to logs/<name>_<date>.log
        log_to_console: Write to stderr
        json_format: JSON lines in the log file

    Returns:
        Configured logger

    Example:
        >>> logger = setup_logging("localsym", level="DEBUG")
        >>> logger.debug("symbol computed", extra={'p': 2, 'm': 3})
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(level.upper())
    logger.propagate = False
    for handler in _handlers(name, log_to_file, log_to_console, json_format):
        logger.addHandler(handler)
    return logger


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, configured from config.logging on first use."""
    from config import get_config

    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    cfg = get_config().logging
    return setup_logging(
        name=name,
        level=cfg.log_level,
        log_to_file=cfg.log_to_file,
        json_format=cfg.json_format,
    )


def set_level(level: str) -> None:
    """Change the level of every toolkit logger created so far (--log-level)."""
    from config import get_config

    level = level.upper()
    get_config().logging.log_level = level
    for logger in logging.Logger.manager.loggerDict.values():
        if isinstance(logger, logging.Logger) and logger.handlers and not logger.propagate:
            logger.setLevel(level)


class OperationLogger:
    """
    Times a computation and logs its outcome at DEBUG (WARNING on failure).

    Example:
        >>> with OperationLogger(logger, "witt_symbol", p=2, m=3):
        ...     value = compute()
    """

    def __init__(self, logger: logging.Logger, operation: str, **fields):
        self.logger = logger
        self.operation = operation
        self.fields = fields
        self.started = 0.0

    def __enter__(self):
        self.started = time.perf_counter()
        self.logger.debug(f"start {self.operation}", extra=self.fields)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration_ms = (time.perf_counter() - self.started) * 1000
        extra = {**self.fields, 'operation': self.operation, 'duration_ms': duration_ms}
        if exc_type is None:
            self.logger.debug(f"done {self.operation} in {duration_ms:.1f}ms", extra=extra)
        else:
            self.logger.warning(f"{self.operation} failed after {duration_ms:.1f}ms: {exc_type.__name__}: {exc_val}",
                                extra=extra)
        return False
