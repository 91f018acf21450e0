"""
Report schemas for consistent command output.
"""
from datetime import datetime, timezone
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


def _now() -> datetime:
    return datetime.now(timezone.utc)


class ErrorResponse(BaseModel):
    """Standard error payload written to stderr."""
    error: str
    detail: str
    exit_code: int
    failures: Optional[Dict[str, str]] = None
    timestamp: datetime = Field(default_factory=_now)


class IdentityResult(BaseModel):
    """Outcome of one identity over all of its cases."""
    identity: str
    context: str
    status: Literal["pass", "fail", "skipped"]
    cases: int = 0
    counterexample: Optional[str] = None
    note: Optional[str] = None
    seconds: float = 0.0

    def to_text(self) -> str:
        line = f"{self.status.upper():7} {self.identity} [{self.context}] cases={self.cases} ({self.seconds:.2f}s)"
        if self.note:
            line += f"\n        {self.note}"
        if self.counterexample:
            line += f"\n        counterexample: {self.counterexample}"
        return line


class SuiteReport(BaseModel):
    """Response for the verify command."""
    suite: str
    braiding: str
    N: int
    max_p: int
    passed: bool
    results: List[IdentityResult]
    timestamp: datetime = Field(default_factory=_now)

    @property
    def failures(self) -> List[IdentityResult]:
        return [r for r in self.results if r.status == "fail"]

    def to_text(self) -> str:
        header = f"suite {self.suite} braiding={self.braiding} N={self.N} max_p={self.max_p}"
        lines = [header] + [r.to_text() for r in self.results]
        counts = {s: sum(1 for r in self.results if r.status == s) for s in ("pass", "fail", "skipped")}
        lines.append(
            f"{'PASSED' if self.passed else 'FAILED'}: "
            f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped"
        )
        return "\n".join(lines)


class ScalarValue(BaseModel):
    """A canonical Scalar, optionally evaluated at q = q0."""
    value: str
    at_q0: Optional[str] = None

    def to_text(self) -> str:
        return self.value if self.at_q0 is None else f"{self.value}  (= {self.at_q0} at q0)"


class GradeTrace(BaseModel):
    """Traces of one grade of a wedge endomorphism."""
    grade: int
    q_trace: Optional[ScalarValue] = None
    quantum_trace: Optional[ScalarValue] = None
    ratio: Optional[ScalarValue] = None
    predicted_ratio: Optional[ScalarValue] = None


class TraceReport(BaseModel):
    """Response for the trace command."""
    context: str
    kind: Literal["q", "quantum", "both"]
    q_trace: Optional[ScalarValue] = None
    quantum_trace: Optional[ScalarValue] = None
    grades: List[GradeTrace] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = []
        if self.q_trace is not None:
            lines.append(f"Tr_q = {self.q_trace.to_text()}")
        if self.quantum_trace is not None:
            lines.append(f"tr_q = {self.quantum_trace.to_text()}")
        if len(self.grades) > 1 or any(g.ratio is not None for g in self.grades):
            for g in self.grades:
                parts = [f"grade {g.grade}:"]
                for label, value in (
                    ("Tr_q", g.q_trace),
                    ("tr_q", g.quantum_trace),
                    ("ratio", g.ratio),
                    ("predicted", g.predicted_ratio),
                ):
                    if value is not None:
                        parts.append(f"{label} = {value.to_text()}")
                lines.append("  ".join(parts))
        return "\n".join(lines)


class ComponentBasisReport(BaseModel):
    """A component basis as sparse tensors: each vector is a list of (key, value) records."""
    grade: int
    dim: int
    vectors: List[List[List]]


class BasisReport(BaseModel):
    """Response for the basis command."""
    context: str
    components: List[ComponentBasisReport]

    def to_text(self) -> str:
        lines = [f"context {self.context}"]
        for component in self.components:
            lines.append(f"grade {component.grade}: dim {component.dim}")
            for k, vector in enumerate(component.vectors):
                terms = " + ".join(f"({value})·e{tuple(key)}" for key, value in vector)
                lines.append(f"  v{k + 1} = {terms or '0'}")
        return "\n".join(lines)


class ProfileReport(BaseModel):
    """Response for the profile command."""
    context: str
    bound: int
    dims: List[int]
    top: Optional[int] = None
    hecke_param: Optional[ScalarValue] = None
    expected_dims: Optional[List[int]] = None

    def to_text(self) -> str:
        lines = [
            f"context {self.context}",
            f"dims (p = 0..{self.bound}): {', '.join(str(d) for d in self.dims)}",
            f"top grade: {self.top if self.top is not None else 'none observed'}",
        ]
        if self.hecke_param is not None:
            lines.append(f"hecke parameter: {self.hecke_param.to_text()}")
        if self.expected_dims is not None:
            lines.append(f"expected: {', '.join(str(d) for d in self.expected_dims)}")
        return "\n".join(lines)

