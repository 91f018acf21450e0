"""
Versioned JSON documents for braidings and graded endomorphisms.

Scalars are stored as canonical text, records are sorted and zero entries
dropped, so emitting a parsed document reproduces it byte for byte.
"""
import hashlib
import json
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.algebra.braiding import Braiding, operator_from_entries, validate_braiding
from src.algebra.scalars import parse_scalar, to_text
from src.utils.exceptions import ScalarParseError
from src.utils.validators import validate_builtin

Record = Tuple[Tuple[int, ...], Tuple[int, ...], str]


def canonical_scalar(text: str) -> str:
    """Canonical text of a Scalar string; parse failures surface as ValueError for pydantic."""
    try:
        return to_text(parse_scalar(text))
    except ScalarParseError as e:
        raise ValueError(e.detail)


def _canonical_records(records: List[Record]) -> List[Record]:
    cleaned = []
    for row, col, value in records:
        value = canonical_scalar(value)
        if value != "0":
            cleaned.append((tuple(row), tuple(col), value))
    keys = [(row, col) for row, col, _ in cleaned]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate (row, col) record")
    return sorted(cleaned)


def dumps(model: BaseModel) -> str:
    """Deterministic JSON: sorted keys, no unset optional fields."""
    return json.dumps(model.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2) + "\n"


class BraidingDocument(BaseModel):
    """A braiding on V ⊗ V with its quadratic relation (σ - λ)(σ - μ) = 0."""
    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    dim: int = Field(..., ge=1, description="dim V")
    roots: Tuple[str, str] = Field(..., description="λ, μ as Scalar strings")
    hecke_param: Optional[str] = Field(default=None, description="ν when one root is -1")
    entries: List[Record] = Field(default_factory=list, description="(row, col, value) on V ⊗ V")

    @field_validator("roots")
    @classmethod
    def validate_roots(cls, v):
        return tuple(canonical_scalar(r) for r in v)

    @field_validator("hecke_param")
    @classmethod
    def validate_hecke_param(cls, v):
        if v is not None:
            return canonical_scalar(v)
        return v

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v):
        return _canonical_records(v)

    @model_validator(mode="after")
    def check_consistency(self):
        for row, col, _ in self.entries:
            for key in (row, col):
                if len(key) != 2 or any(not 1 <= i <= self.dim for i in key):
                    raise ValueError(f"index {key} is not a pair in 1..{self.dim}")
        if self.hecke_param is not None:
            first, second = self.roots
            paired = second if first == "-1" else first if second == "-1" else None
            if paired is None:
                raise ValueError("hecke_param needs -1 among the roots")
            if self.hecke_param != paired:
                raise ValueError(f"hecke_param must be the root paired with -1, here {paired}")
        return self

    @classmethod
    def from_braiding(cls, b: Braiding) -> "BraidingDocument":
        nu = b.hecke_param
        return cls(
            dim=b.dim,
            roots=tuple(to_text(r) for r in b.roots),
            hecke_param=to_text(nu) if nu is not None else None,
            entries=[(row, col, to_text(value)) for row, col, value in b.operator.entries()],
        )

    def sha256(self) -> str:
        return hashlib.sha256(dumps(self).encode("utf-8")).hexdigest()

    def to_braiding(self, name: Optional[str] = None) -> Braiding:
        """Validate the axioms and build the Braiding; raises BraidingValidationError."""
        op = operator_from_entries(
            self.dim, 2, ((row, col, parse_scalar(value)) for row, col, value in self.entries)
        )
        roots = tuple(parse_scalar(r) for r in self.roots)
        return validate_braiding(self.dim, op, roots=roots, name=name or f"custom[{self.sha256()[:8]}]")


class ContextDescriptor(BaseModel):
    """Either a builtin braiding with N, or the sha256 of a braiding document; plus the profiling bound."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    builtin: Optional[str] = None
    N: Optional[int] = Field(default=None, ge=1)
    braiding_sha256: Optional[str] = None
    bound: int = Field(..., ge=1, description="grades profiled when no top grade is observed")

    @field_validator("builtin")
    @classmethod
    def validate_builtin_name(cls, v):
        if v is not None:
            return validate_builtin(v)
        return v

    @model_validator(mode="after")
    def check_form(self):
        if (self.builtin is None) == (self.braiding_sha256 is None):
            raise ValueError("give exactly one of builtin or braiding_sha256")
        if self.builtin is not None and self.N is None:
            raise ValueError("builtin braidings need N")
        if self.braiding_sha256 is not None and self.N is not None:
            raise ValueError("N only applies to builtin braidings")
        return self

    @property
    def key(self) -> Tuple:
        return (self.builtin, self.N, self.braiding_sha256, self.bound)


class EndoComponent(BaseModel):
    """One grade: a dense matrix in the component basis, or wedge records in the convolution basis."""
    model_config = ConfigDict(extra="forbid")

    grade: int = Field(..., ge=0)
    matrix: Optional[List[List[str]]] = None
    entries: Optional[List[Record]] = None

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v):
        if v is None:
            return v
        if any(len(row) != len(v) for row in v):
            raise ValueError("matrix must be square")
        return [[canonical_scalar(x) for x in row] for row in v]

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v):
        if v is None:
            return v
        return _canonical_records(v)

    @model_validator(mode="after")
    def check_form(self):
        if (self.matrix is None) == (self.entries is None):
            raise ValueError(f"grade {self.grade}: give exactly one of matrix or entries")
        return self


class EndoDocument(BaseModel):
    """A graded endomorphism; grades without a component are zero."""
    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    context: ContextDescriptor
    components: List[EndoComponent] = Field(default_factory=list)

    @field_validator("components")
    @classmethod
    def sort_components(cls, v):
        grades = [c.grade for c in v]
        if len(set(grades)) != len(grades):
            raise ValueError("duplicate grade")
        return sorted(v, key=lambda c: c.grade)

    @model_validator(mode="after")
    def check_entries_form(self):
        if any(c.entries is not None for c in self.components):
            if self.context.builtin != "sl-exterior":
                raise ValueError("wedge records are only defined for the sl-exterior braiding")
            if any(c.matrix is not None for c in self.components):
                raise ValueError("mixing matrix and entries components")
        return self

    @property
    def form(self) -> str:
        if any(c.entries is not None for c in self.components):
            return "entries"
        return "matrix"
