"""
Document codec: reads and writes braiding and endomorphism documents and
converts them to and from GradedEndo values.
"""
import logging
from pathlib import Path
from typing import List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from src.algebra import linalg
from src.algebra.endomorphisms import GradedEndo
from src.algebra.exterior import WedgeEndo
from src.algebra.scalars import parse_scalar, to_text
from src.schemas.documents import (
    BraidingDocument,
    ContextDescriptor,
    EndoComponent,
    EndoDocument,
    dumps,
)
from src.services.context_store import ContextStore
from src.utils.exceptions import DocumentError, GradeMismatchError

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


def _load(model: Type[Model], source: Union[str, Path]) -> Model:
    if isinstance(source, Path):
        try:
            source = source.read_text(encoding="utf-8")
        except OSError as e:
            raise DocumentError(f"cannot read {e.filename}: {e.strerror}")
    try:
        return model.model_validate_json(source)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise DocumentError(f"{model.__name__} {location}: {first['msg']}")


class DocumentCodec:
    """Parse and emit documents against the contexts of a ContextStore."""

    def __init__(self, store: ContextStore):
        self.store = store

    @staticmethod
    def emit(doc: BaseModel) -> str:
        return dumps(doc)

    @staticmethod
    def parse_braiding(source: Union[str, Path]) -> BraidingDocument:
        return _load(BraidingDocument, source)

    @staticmethod
    def parse_endo(source: Union[str, Path]) -> EndoDocument:
        return _load(EndoDocument, source)

    def to_endo(self, doc: EndoDocument) -> GradedEndo:
        """Materialize a document in its context; absent grades are zero."""
        ctx = self.store.context(doc.context)
        if doc.form == "entries":
            ext = self.store.exterior(doc.context.N)
            total = GradedEndo.zero(ctx)
            for component in doc.components:
                coefficients = {
                    (row, col): parse_scalar(value) for row, col, value in component.entries
                }
                total = total + ext.to_graded(WedgeEndo(ext.dim, component.grade, coefficients))
            return total
        blocks = [linalg.zeros(n) for n in ctx.dims]
        for component in doc.components:
            ctx.check_grade(component.grade)
            n = ctx.dims[component.grade]
            if len(component.matrix) != n:
                raise GradeMismatchError(
                    f"grade {component.grade} matrix is {len(component.matrix)}×{len(component.matrix)}, expected {n}×{n}"
                )
            rows = [[parse_scalar(x) for x in row] for row in component.matrix]
            blocks[component.grade] = linalg.matrix(rows, (n, n))
        return GradedEndo.from_blocks(ctx, blocks)

    def from_endo(
        self, a: GradedEndo, form: str = "matrix", descriptor: Optional[ContextDescriptor] = None
    ) -> EndoDocument:
        """Emit the nonzero grades of A in matrix or wedge-record form."""
        descriptor = descriptor or self.store.descriptor_of(a.context)
        components: List[EndoComponent] = []
        if form == "entries":
            ext = self.store.exterior(descriptor.N)
            if ext.context is not a.context:
                raise DocumentError("wedge records need the sl-exterior context of this store")
            for p in a.support():
                records = [
                    (row, col, to_text(value)) for row, col, value in ext.from_graded(a, p).records()
                ]
                components.append(EndoComponent(grade=p, entries=records))
        else:
            for p in a.support():
                rows = [[to_text(x) for x in row] for row in linalg.rows_of(a.component(p))]
                components.append(EndoComponent(grade=p, matrix=rows))
        logger.debug("emitting %s-form document with grades %s", form, a.support())
        return EndoDocument(context=descriptor, components=components)
