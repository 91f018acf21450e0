"""
Request fields shared by every command: the braiding selection and output options.
"""
from contextlib import nullcontext
from pathlib import Path
from typing import ContextManager, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.algebra.braiding import BUILTIN_NAMES
from src.algebra.permutations import lifted_bound
from src.algebra.scalars import Scalar, eval_at, to_text
from src.schemas.documents import ContextDescriptor
from src.schemas.responses import ScalarValue
from src.services.context_store import ContextStore
from src.services.document_codec import DocumentCodec
from src.utils.exceptions import VanishingDenominatorError
from src.utils.validators import (
    validate_builtin,
    validate_max_p,
    validate_output_format,
    validate_q0,
    validate_rank,
)


class BraidingRequest(BaseModel):
    braiding: str = Field(default="sl-exterior", description="Builtin name or path to a braiding document")
    N: int = Field(default=1, description="Rank: V = Q(q)^{N+1}")
    max_p: Optional[int] = Field(default=None, description="Largest grade to enumerate")
    q0: Optional[str] = Field(default=None, description="Also evaluate printed Scalars at q = q0")
    format: str = Field(default="text", description="json or text")
    force: bool = Field(default=False, description="Lift the rank and enumeration bounds")

    @field_validator("braiding")
    @classmethod
    def validate_braiding_name(cls, v):
        if v.strip().lower() in BUILTIN_NAMES:
            return validate_builtin(v)
        if not Path(v).is_file():
            raise ValueError(f"'{v}' is neither a builtin ({', '.join(BUILTIN_NAMES)}) nor a readable file")
        return v

    @field_validator("q0")
    @classmethod
    def validate_point(cls, v):
        return validate_q0(v)

    @field_validator("format")
    @classmethod
    def validate_format(cls, v):
        return validate_output_format(v)

    @model_validator(mode="after")
    def check_bounds(self):
        validate_rank(self.N, self.force)
        if self.max_p is not None:
            validate_max_p(self.max_p, self.force)
        return self

    def enumeration_scope(self) -> ContextManager:
        """With --force, symmetrizers and group sums may run up to max_p for this command."""
        if self.force and self.max_p is not None:
            return lifted_bound(self.max_p)
        return nullcontext()

    @property
    def is_builtin(self) -> bool:
        return self.braiding in BUILTIN_NAMES

    def descriptor(self, store: ContextStore) -> ContextDescriptor:
        """Register a braiding document when one is given, else address the builtin."""
        if self.is_builtin:
            return store.builtin_descriptor(self.braiding, self.N, self.max_p)
        doc = DocumentCodec.parse_braiding(Path(self.braiding))
        return store.register(doc, bound=self.max_p)

    def scalar(self, s: Scalar) -> ScalarValue:
        if self.q0 is None:
            return ScalarValue(value=to_text(s))
        try:
            value = str(eval_at(s, self.q0))
        except VanishingDenominatorError as e:
            value = e.detail
        return ScalarValue(value=to_text(s), at_q0=value)
