"""
Custom exceptions for the application.
"""
from typing import Any, Dict, Optional


class QTraceError(Exception):
    """Base exception for qtrace. Carries a process exit code and a detail message."""

    exit_code: int = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def to_payload(self) -> Dict[str, Any]:
        return {
            "error": self.__class__.__name__,
            "detail": self.detail,
            "exit_code": self.exit_code,
        }


class ScalarParseError(QTraceError):
    """Raised when a Scalar string cannot be parsed."""
    def __init__(self, text: str, reason: str):
        super().__init__(f"Cannot parse scalar '{text}': {reason}")


class ScalarDivisionError(QTraceError):
    """Raised on division by the zero Scalar."""
    def __init__(self):
        super().__init__("Division by the zero scalar")


class ZeroSpecializationError(QTraceError):
    """Raised when a Scalar is specialized at q = 0."""
    def __init__(self):
        super().__init__("Cannot specialize at q = 0")


class VanishingDenominatorError(QTraceError):
    """Raised when the denominator of a Scalar vanishes at the requested point."""
    def __init__(self, point: Any):
        super().__init__(f"Denominator vanishes at q = {point}")


class BoundExceededError(QTraceError):
    """Raised when a resource bound (enumeration size, rank) is exceeded."""
    def __init__(self, what: str, value: int, bound: int):
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class BraidingValidationError(QTraceError):
    """Raised when a matrix fails one of the braiding axioms."""
    def __init__(self, failures: Dict[str, str]):
        self.failures = failures
        summary = "; ".join(f"{axiom}: {reason}" for axiom, reason in failures.items())
        super().__init__(f"Braiding validation failed ({summary})")

    def to_payload(self) -> Dict[str, Any]:
        payload = super().to_payload()
        payload["failures"] = self.failures
        return payload


class NotHeckeNormalizedError(QTraceError):
    """Raised when a braiding without (σ+id)(σ-ν id)=0 normalization reaches the graded machinery."""
    def __init__(self, name: str):
        super().__init__(
            f"Braiding '{name}' is not Hecke-normalized; negate it or re-validate with a Hecke parameter"
        )


class GradeMismatchError(QTraceError):
    """Raised when grades or operator sizes do not line up."""
    def __init__(self, detail: str):
        super().__init__(f"Grade mismatch: {detail}")


class ContextMismatchError(QTraceError):
    """Raised when endomorphisms from different contexts are combined."""
    def __init__(self, detail: str = "Operands belong to different contexts"):
        super().__init__(detail)


class NoTopGradeError(QTraceError):
    """Raised when a q-trace is requested in a context without a one-dimensional top grade."""
    def __init__(self, name: str):
        super().__init__(f"Context '{name}' has no declared top grade; the q-trace is undefined")


class NotInSubspaceError(QTraceError):
    """Raised when a vector or index set does not lie in the expected subspace."""
    def __init__(self, detail: str):
        super().__init__(f"Not in subspace: {detail}")


class DocumentError(QTraceError):
    """Raised when a document cannot be read or validated."""
    def __init__(self, detail: str):
        super().__init__(f"Invalid document: {detail}")


class UnknownSuiteError(QTraceError):
    """Raised when the verification suite name is not registered."""
    def __init__(self, name: str, known: list):
        super().__init__(f"Unknown suite '{name}'. Known suites: {', '.join(known)}")


class IdentityViolation(QTraceError):
    """Raised when an identity that must hold exactly fails."""
    exit_code = 1

    def __init__(self, identity: str, counterexample: str):
        self.identity = identity
        self.counterexample = counterexample
        super().__init__(f"Identity '{identity}' violated: {counterexample}")
