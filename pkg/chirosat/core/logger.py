"""
Logging System
==============

Line-oriented logging for long solver jobs: every record carries the
instance identifier of the job that produced it, so a CPU-day run can be
followed with ``tail -f logs/chirosat.log`` alone.
"""
import logging
import logging.handlers
import os
import sys
import traceback
from contextlib import contextmanager
from contextvars import ContextVar
from pathlib import Path
from typing import Dict, Any, Optional

from colorama import Fore, Style, just_fix_windows_console

from chirosat.constants import DEFAULT_LOG_DIR

_current_instance: ContextVar[str] = ContextVar("chirosat_instance", default="-")


class ColoredFormatter(logging.Formatter):
    """Renkli console output için formatter"""

    COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.MAGENTA,
    }

    def format(self, record):
        color = self.COLORS.get(record.levelname)
        if color is None:
            return super().format(record)
        original = record.levelname
        record.levelname = f"{color}{original}{Style.RESET_ALL}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


class ContextFilter(logging.Filter):
    """Adds the current instance identifier to each record"""

    def filter(self, record):
        record.instance = _current_instance.get()
        return True


@contextmanager
def instance_context(instance_id: str):
    """Tag every log line emitted inside the block with ``instance_id``."""
    token = _current_instance.set(instance_id)
    try:
        yield instance_id
    finally:
        _current_instance.reset(token)


class ChiroLogger:
    """Project-wide logger registry"""

    _loggers: Dict[str, logging.Logger] = {}
    _initialized = False

    @classmethod
    def initialize(cls, log_dir: Optional[str] = None, console_level: int = logging.INFO):
        """Logging sistemini başlatır"""
        if cls._initialized:
            return

        log_dir = Path(log_dir or os.getenv("CHIROSAT_LOG_DIR") or DEFAULT_LOG_DIR)
        log_dir.mkdir(exist_ok=True, parents=True)
        just_fix_windows_console()

        root_logger = logging.getLogger()
        root_logger.setLevel(logging.DEBUG)

        # Mevcut handler'ları temizle
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        # Console → stderr, stdout is reserved for reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(console_level)
        console_handler.setFormatter(ColoredFormatter(
            '%(asctime)s [%(levelname)s] %(name)s: %(message)s [%(instance)s]'
        ))
        console_handler.addFilter(ContextFilter())

        main_file_handler = logging.handlers.RotatingFileHandler(
            log_dir / 'chirosat.log',
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        main_file_handler.setLevel(logging.DEBUG)
        file_formatter = logging.Formatter(
            '%(asctime)s [%(levelname)s] %(name)s: %(message)s '
            '[%(instance)s] [%(pathname)s:%(lineno)d]'
        )
        main_file_handler.setFormatter(file_formatter)
        main_file_handler.addFilter(ContextFilter())

        error_file_handler = logging.handlers.RotatingFileHandler(
            log_dir / 'errors.log',
            maxBytes=5*1024*1024,  # 5MB
            backupCount=10,
            encoding='utf-8'
        )
        error_file_handler.setLevel(logging.ERROR)
        error_file_handler.setFormatter(file_formatter)
        error_file_handler.addFilter(ContextFilter())

        root_logger.addHandler(console_handler)
        root_logger.addHandler(main_file_handler)
        root_logger.addHandler(error_file_handler)

        cls._initialized = True

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        """Named logger döndürür; handlers are installed by ``initialize`` (CLI start-up)."""
        if name not in cls._loggers:
            cls._loggers[name] = logging.getLogger(name)

        return cls._loggers[name]

    @classmethod
    def log_run_event(cls, instance: str, event: str, **context):
        """Instance lifecycle event (encoded, solving, checked, ...)"""
        logger = cls.get_logger('chirosat.runs')

        context_str = " | ".join(f"{k}={v}" for k, v in context.items() if v is not None)
        message = f"EVENT: {event} | INSTANCE: {instance}"
        if context_str:
            message += f" | {context_str}"

        with instance_context(instance):
            logger.info(message)

    @classmethod
    def log_solver_run(cls, instance: str, status: str, elapsed: float, **context):
        logger = cls.get_logger('chirosat.solver')

        context_str = " | ".join(f"{k}={v}" for k, v in context.items() if v is not None)
        message = f"SOLVER: {status} | INSTANCE: {instance} | ELAPSED: {elapsed:.2f}s"
        if context_str:
            message += f" | {context_str}"

        with instance_context(instance):
            logger.info(message)

    @classmethod
    def log_error_with_context(cls, error: Exception, context: Dict[str, Any] = None):
        """Hata ile birlikte context bilgilerini loglar"""
        logger = cls.get_logger('chirosat.errors')

        error_details = {
            'error_type': type(error).__name__,
            'error_message': str(error),
            'traceback': traceback.format_exc()
        }
        if context:
            error_details.update(context)

        logger.error(f"ERROR_OCCURRED: {error_details}")


# Kolay erişim için kısayollar
def get_logger(name: str) -> logging.Logger:
    return ChiroLogger.get_logger(name)


def log_run_event(instance: str, event: str, **context):
    ChiroLogger.log_run_event(instance, event, **context)


def log_solver_run(instance: str, status: str, elapsed: float, **context):
    ChiroLogger.log_solver_run(instance, status, elapsed, **context)


def log_error(error: Exception, context: Dict[str, Any] = None):
    ChiroLogger.log_error_with_context(error, context)
