"""
The product command: compose, convolve or third product of two documents.
"""
from pathlib import Path
from typing import Callable, Dict

from pydantic import Field, field_validator

from src.algebra.endomorphisms import GradedEndo, compose, convolve, third_product
from src.api.common import BraidingRequest
from src.schemas.documents import EndoDocument
from src.services.context_store import ContextStore
from src.services.document_codec import DocumentCodec
from src.utils.exceptions import ContextMismatchError

PRODUCTS: Dict[str, Callable[[GradedEndo, GradedEndo], GradedEndo]] = {
    "compose": compose,
    "convolve": convolve,
    "third": third_product,
}


class ProductRequest(BraidingRequest):
    a: Path = Field(..., description="Left operand document")
    b: Path = Field(..., description="Right operand document")
    which: str = Field(..., description="compose, convolve or third")

    @field_validator("which")
    @classmethod
    def validate_which(cls, v):
        v = v.strip().lower()
        if v not in PRODUCTS:
            raise ValueError(f"which must be one of: {', '.join(PRODUCTS)}")
        return v


def run_product(request: ProductRequest, store: ContextStore) -> EndoDocument:
    """The product in the serialization of the left operand."""
    codec = DocumentCodec(store)
    if not request.is_builtin:
        request.descriptor(store)
    left, right = codec.parse_endo(request.a), codec.parse_endo(request.b)
    if left.context != right.context:
        raise ContextMismatchError(
            f"documents belong to different contexts ({left.context.key} and {right.context.key})"
        )
    result = PRODUCTS[request.which](codec.to_endo(left), codec.to_endo(right))
    return codec.from_endo(result, form=left.form, descriptor=left.context)
