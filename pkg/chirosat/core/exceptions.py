"""
chirosat Exception Classes
==========================

Merkezi hata yönetimi: every layer raises a subclass of ChiroSatException
so the CLI can map it to a machine-readable category and exit status.

Solver-side trouble (timeouts, odd exit codes, malformed models) is *not*
an exception; it is reported through ``SolverOutcome.status == "failed"``.
"""

from __future__ import annotations
import traceback
from typing import Optional, Dict, Any, Sequence
from enum import Enum

from chirosat.core.logger import get_logger

logger = get_logger(__name__)


class ErrorSeverity(Enum):
    """Hata ciddiyeti seviyeleri"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Hata kategorileri"""
    VALIDATION = "validation"
    CONFIGURATION = "configuration"
    FILE_SYSTEM = "file_system"
    FORMAT = "format"
    DEGENERACY = "degeneracy"
    ENCODING = "encoding"
    EXTERNAL_SERVICE = "external_service"
    VERIFICATION = "verification"


class ChiroSatException(Exception):
    """Base exception class for chirosat"""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        category: ErrorCategory = ErrorCategory.VALIDATION,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        context: Optional[Dict[str, Any]] = None,
        original_exception: Optional[Exception] = None
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.category = category
        self.severity = severity
        self.context = context or {}
        self.original_exception = original_exception

        self._log_exception()

    def _log_exception(self):
        """Exception'ı uygun seviyede logla"""
        log_context = {
            "error_code": self.error_code,
            "category": self.category.value,
            "severity": self.severity.value,
            "error_context": self.context
        }

        if self.severity == ErrorSeverity.CRITICAL:
            logger.critical(f"{self.message}", extra=log_context)
        elif self.severity == ErrorSeverity.HIGH:
            logger.error(f"{self.message}", extra=log_context)
        elif self.severity == ErrorSeverity.MEDIUM:
            logger.warning(f"{self.message}", extra=log_context)
        else:
            logger.info(f"{self.message}", extra=log_context)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error_code": self.error_code,
            "message": self.message,
            "category": self.category.value,
            "severity": self.severity.value,
            "context": self.context,
            "traceback": traceback.format_exc() if self.original_exception else None
        }


# Input / configuration
class ValidationException(ChiroSatException):
    """Invalid arguments or problem parameters"""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs):
        if field:
            kwargs.setdefault("context", {})["field"] = field
        kwargs.setdefault("category", ErrorCategory.VALIDATION)
        kwargs.setdefault("severity", ErrorSeverity.LOW)
        kwargs.setdefault("error_code", "VALIDATION_FAILED")
        super().__init__(message, **kwargs)


class ConfigurationException(ChiroSatException):
    """Configuration related exception"""

    def __init__(self, message: str, config_key: Optional[str] = None, **kwargs):
        if config_key:
            kwargs.setdefault("context", {})["config_key"] = config_key
        kwargs.setdefault("category", ErrorCategory.CONFIGURATION)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        kwargs.setdefault("error_code", "CONFIG_ERROR")
        super().__init__(message, **kwargs)


class FileSystemException(ChiroSatException):
    """File system related exception"""

    def __init__(self, message: str, file_path: Optional[str] = None, **kwargs):
        if file_path:
            kwargs.setdefault("context", {})["file_path"] = str(file_path)
        kwargs.setdefault("category", ErrorCategory.FILE_SYSTEM)
        kwargs.setdefault("severity", ErrorSeverity.MEDIUM)
        kwargs.setdefault("error_code", "FILE_SYSTEM_ERROR")
        super().__init__(message, **kwargs)


class FormatException(ChiroSatException):
    """Malformed point-set, chirotope, catalog or DIMACS text"""

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None, **kwargs):
        ctx = kwargs.setdefault("context", {})
        if source:
            ctx["source"] = str(source)
        if line is not None:
            ctx["line"] = line
        kwargs.setdefault("category", ErrorCategory.FORMAT)
        kwargs.setdefault("severity", ErrorSeverity.LOW)
        kwargs.setdefault("error_code", "FORMAT_ERROR")
        super().__init__(message, **kwargs)


# Geometry / combinatorics
class DegeneracyException(ChiroSatException):
    """Points in a common hyperplane (orientation 0) where general position is required"""

    def __init__(self, labels: Sequence[int], **kwargs):
        self.labels = tuple(labels)
        message = f"Degenerate tuple (orientation 0): {self.labels}"
        kwargs.setdefault("context", {})["labels"] = list(self.labels)
        kwargs.setdefault("category", ErrorCategory.DEGENERACY)
        kwargs.setdefault("severity", ErrorSeverity.LOW)
        kwargs.setdefault("error_code", "DEGENERATE_INPUT")
        super().__init__(message, **kwargs)


class ChirotopeIndexException(ValidationException):
    """Tuple index outside 1..n"""

    def __init__(self, index: int, n: int, **kwargs):
        message = f"Index {index} out of range 1..{n}"
        kwargs.setdefault("context", {}).update({"index": index, "n": n})
        kwargs.setdefault("error_code", "INDEX_OUT_OF_RANGE")
        super().__init__(message, **kwargs)


class EncodingException(ChiroSatException):
    """CNF generation precondition violated"""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("category", ErrorCategory.ENCODING)
        kwargs.setdefault("severity", ErrorSeverity.MEDIUM)
        kwargs.setdefault("error_code", "ENCODING_ERROR")
        super().__init__(message, **kwargs)


class WitnessException(ChiroSatException):
    """A model or witness could not be decoded or certified"""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("category", ErrorCategory.VERIFICATION)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        kwargs.setdefault("error_code", "WITNESS_ERROR")
        super().__init__(message, **kwargs)


# External tools (SAT solver, DRAT checker)
class ExternalToolException(ChiroSatException):
    """External executable exception"""

    def __init__(self, message: str, tool: Optional[str] = None, **kwargs):
        if tool:
            kwargs.setdefault("context", {})["tool"] = tool
        kwargs.setdefault("category", ErrorCategory.EXTERNAL_SERVICE)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        kwargs.setdefault("error_code", "EXTERNAL_TOOL_ERROR")
        super().__init__(message, **kwargs)


class ToolNotFoundException(ExternalToolException):
    """Configured executable is missing"""

    def __init__(self, tool: str, path: str, **kwargs):
        message = f"{tool} executable not found: {path}"
        kwargs.setdefault("context", {})["path"] = path
        kwargs.setdefault("error_code", "TOOL_NOT_FOUND")
        super().__init__(message, tool=tool, **kwargs)


class ProofCheckTimeoutException(ExternalToolException):
    """Proof checker exceeded its wall-clock limit"""

    def __init__(self, proof_path: str, timeout: float, **kwargs):
        message = f"Proof check timed out after {timeout}s: {proof_path}"
        kwargs.setdefault("context", {}).update({"proof_path": str(proof_path), "timeout": timeout})
        kwargs.setdefault("error_code", "CHECKER_TIMEOUT")
        super().__init__(message, tool="checker", **kwargs)


class ProofCheckerCrashException(ExternalToolException):
    """Checker died or printed no verdict (distinct from a rejected proof)"""

    def __init__(self, proof_path: str, returncode: int, output: str = "", **kwargs):
        message = f"Proof checker crashed (exit {returncode}) on {proof_path}"
        kwargs.setdefault("context", {}).update({
            "proof_path": str(proof_path),
            "returncode": returncode,
            "output_tail": output[-2000:],
        })
        kwargs.setdefault("error_code", "CHECKER_CRASH")
        super().__init__(message, tool="checker", **kwargs)
