"""
EAF Engine - Error Types and Exit Codes
=======================================

Every expected failure raised by the engines is an `EafError` carrying an exit
code and a structured `data` payload. The command center maps the code straight
to the process exit status.
"""

from typing import Any, Optional


class ErrorCodes:
    SUCCESS = 0
    VERIFICATION_FAILED = 1
    USAGE_ERROR = 2
    INTERNAL_ERROR = 3


class EafError(Exception):
    def __init__(
        self, message: str, code: int = ErrorCodes.USAGE_ERROR, data: Any = None
    ):
        self.message = message
        self.code = code
        self.data = data
        super().__init__(self.message)

    def to_dict(self) -> dict:
        return {
            "status": False,
            "code": self.code,
            "error": type(self).__name__,
            "message": self.message,
            "data": self.data,
        }


class DomainError(EafError):
    """A precondition of an operation does not hold."""


class DateParseError(DomainError):
    pass


class ArithmeticOverflowError(EafError, OverflowError):
    """An intermediate value left the working integer width."""

    def __init__(self, value: int, bits: int, what: str = "intermediate"):
        super().__init__(
            f"{what} {value} does not fit a signed {bits}-bit integer",
            data={"value": value, "bits": bits},
        )


class UnsupportedParametersError(EafError):
    def __init__(self, message: str, suggested_k: Optional[int] = None):
        super().__init__(message, data={"suggested_k": suggested_k})


class SearchNotFoundError(EafError):
    def __init__(self, message: str, best_n: Optional[int] = None, best_k: Optional[int] = None):
        super().__init__(message, data={"best_n": best_n, "best_k": best_k})


class CertificateRefusedError(EafError):
    def __init__(self, hypothesis: str, detail: str):
        super().__init__(
            f"certificate refused: {hypothesis} ({detail})",
            code=ErrorCodes.VERIFICATION_FAILED,
            data={"hypothesis": hypothesis},
        )
        self.hypothesis = hypothesis


class BenchError(EafError):
    pass
