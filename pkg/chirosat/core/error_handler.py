"""
Error Handler Utilities
=======================

CLI katmanında hata yönetimi: maps exceptions to the machine-readable
stderr line and the process exit status.
"""

from __future__ import annotations
import sys
from contextlib import contextmanager
from typing import Optional, TextIO

from chirosat.constants import EXIT_CODES, EXIT_UNEXPECTED
from chirosat.core.exceptions import ChiroSatException
from chirosat.core.logger import get_logger, log_error

logger = get_logger(__name__)


class ErrorHandler:
    """Merkezi hata yönetici sınıfı"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream
        self._error_count = 0

    @property
    def error_count(self) -> int:
        return self._error_count

    def handle_exception(self, exception: Exception, context: Optional[str] = None) -> int:
        """
        Exception'ı handle et

        Args:
            exception: Yakalanan exception
            context: Hata context'i (subcommand, function)

        Returns:
            int: process exit status for the error category
        """
        self._error_count += 1

        if isinstance(exception, ChiroSatException):
            category = exception.category.value
            code = exception.error_code
            message = exception.message
            exit_code = EXIT_CODES.get(category, EXIT_UNEXPECTED)
        else:
            logger.exception(f"Unexpected error: {exception}")
            log_error(exception, {"context": context or "unknown"})
            category = "unexpected"
            code = "UNEXPECTED_ERROR"
            message = f"{type(exception).__name__}: {exception}"
            exit_code = EXIT_UNEXPECTED

        self._emit(category, code, message)
        return exit_code

    def _emit(self, category: str, code: str, message: str) -> None:
        stream = self.stream or sys.stderr
        flat = " ".join(str(message).split())
        print(f"error: category={category} code={code} message={flat}", file=stream)

    def reset_error_count(self):
        """Hata sayacını sıfırla"""
        self._error_count = 0


# Global error handler instance
_global_error_handler: Optional[ErrorHandler] = None


def get_error_handler() -> ErrorHandler:
    """Global error handler'ı al"""
    global _global_error_handler
    if _global_error_handler is None:
        _global_error_handler = ErrorHandler()
    return _global_error_handler


def handle_error(exception: Exception, context: Optional[str] = None) -> int:
    """
    Hata handle etme utility fonksiyonu

    Usage:
        try:
            ...
        except Exception as e:
            return handle_error(e, context="solve")
    """
    return get_error_handler().handle_exception(exception, context)


@contextmanager
def error_context(context: Optional[str] = None):
    """
    Error handling context manager; the exit status is stored on the
    yielded dict under ``"exit_code"``.

    Usage:
        with error_context("bound") as outcome:
            ...
        sys.exit(outcome.get("exit_code", 0))
    """
    outcome: dict = {}
    try:
        yield outcome
    except Exception as e:
        outcome["exit_code"] = handle_error(e, context)


def setup_global_exception_handler():
    """Global exception handler'ı kur"""
    def excepthook(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return

        logger.critical(
            "Unhandled global error",
            exc_info=(exc_type, exc_value, exc_traceback)
        )
        if exc_value:
            handle_error(exc_value, context="global_exception_handler")

    sys.excepthook = excepthook
