"""
The trace command: Tr_q and/or tr_q of an endomorphism document.
"""
from pathlib import Path

from pydantic import Field, field_validator

from src.algebra.endomorphisms import q_trace
from src.algebra.scalars import ZERO, qpow
from src.algebra.traces import quantum_trace, trace_ratio_exponent
from src.api.common import BraidingRequest
from src.schemas.responses import GradeTrace, TraceReport
from src.services.context_store import ContextStore
from src.services.document_codec import DocumentCodec
from src.utils.exceptions import ContextMismatchError

KINDS = ("q", "quantum", "both")


class TraceRequest(BraidingRequest):
    input: Path = Field(..., description="Endomorphism document")
    kind: str = Field(default="both", description="q, quantum or both")

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v):
        v = v.strip().lower()
        if v not in KINDS:
            raise ValueError(f"kind must be one of: {', '.join(KINDS)}")
        return v


def run_trace(request: TraceRequest, store: ContextStore) -> TraceReport:
    codec = DocumentCodec(store)
    if not request.is_builtin:
        request.descriptor(store)
    doc = codec.parse_endo(request.input)
    a = codec.to_endo(doc)
    report = TraceReport(context=a.context.name, kind=request.kind)
    if request.kind in ("q", "both"):
        report.q_trace = request.scalar(q_trace(a))
    if request.kind == "q":
        return report

    if doc.context.builtin != "sl-exterior":
        raise ContextMismatchError("the quantum trace is defined for sl-exterior documents only")
    N = doc.context.N
    ext = store.exterior(N)
    total = ZERO
    for p in a.support():
        w = ext.from_graded(a, p)
        twisted = quantum_trace(w)
        total += twisted
        line = GradeTrace(grade=p, quantum_trace=request.scalar(twisted))
        if request.kind == "both":
            generic = ext.q_trace(w)
            line.q_trace = request.scalar(generic)
            if twisted:
                line.ratio = request.scalar(generic / twisted)
            line.predicted_ratio = request.scalar(qpow(trace_ratio_exponent(N, p)))
        report.grades.append(line)
    report.quantum_trace = request.scalar(total)
    return report
