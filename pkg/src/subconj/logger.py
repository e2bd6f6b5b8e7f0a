"""Module for defining our logger."""

from __future__ import annotations

import logging
import logging.config
from logging.handlers import RotatingFileHandler
from typing import TYPE_CHECKING, Any, Final

import structlog
from pythonjsonlogger.json import JsonFormatter
from structlog import make_filtering_bound_logger
from structlog.contextvars import merge_contextvars
from structlog.dev import set_exc_info
from structlog.processors import StackInfoRenderer, TimeStamper, add_log_level
from structlog.stdlib import LoggerFactory

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path


def setup_logging(log_level: int | str = logging.WARNING, log_file: Path | None = None) -> None:
    """Configure structured JSON logging on standard error.

    Results go to standard output, so log records never mix with them. A rotating file handler is
    added when a log file is given.

    Args:
        log_level: Level name or number.
        log_file: Optional file receiving the same records.

    """
    level: Final[int] = logging.getLevelNamesMapping()[log_level.upper()] if isinstance(log_level, str) else log_level

    handlers: dict[str, Any] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": level,
            "formatter": "json",
            "stream": "ext://sys.stderr",
        },
    }
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers["file"] = {
            "class": RotatingFileHandler,
            "level": level,
            "formatter": "json",
            "filename": log_file,
            "maxBytes": 10_000_000,  # 10MB
            "backupCount": 5,
        }

    logging_config: Mapping[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"json": {"()": JsonFormatter, "format": "%(asctime)s %(name)s %(levelname)s %(message)s"}},
        "handlers": handlers,
        "root": {"level": level, "handlers": list(handlers)},
    }

    logging.config.dictConfig(logging_config)

    structlog.configure(
        cache_logger_on_first_use=True,
        logger_factory=LoggerFactory(),
        wrapper_class=make_filtering_bound_logger(level),
        processors=[
            merge_contextvars,
            add_log_level,
            StackInfoRenderer(),
            set_exc_info,
            TimeStamper(fmt="iso", utc=True),
            structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
    )
