"""
Document schema, codec and context store tests.
"""
import json

import pytest
from hypothesis import given, settings
from pydantic import ValidationError

from src.algebra import linalg
from src.algebra.braiding import builtin
from src.algebra.endomorphisms import GradedEndo
from src.algebra.scalars import parse_scalar, to_text
from src.schemas.documents import (
    BraidingDocument,
    ContextDescriptor,
    EndoComponent,
    EndoDocument,
    canonical_scalar,
    dumps,
)
from src.services.context_store import ContextStore
from src.services.document_codec import DocumentCodec
from src.utils.exceptions import BraidingValidationError, DocumentError, GradeMismatchError
from tests.strategies import braiding_documents, endo_documents, scalars


def _exterior_doc(N, components):
    return {"version": 1, "context": {"builtin": "sl-exterior", "N": N, "bound": N + 2}, "components": components}


def test_canonical_scalar():
    assert canonical_scalar("q^-2 + 1") == "1 + q^-2"
    with pytest.raises(ValueError):
        canonical_scalar("q +")


def test_braiding_document_round_trip():
    b = builtin("sl-exterior", 1)
    doc = BraidingDocument.from_braiding(b)
    assert doc.hecke_param == "q^-2"
    assert set(doc.roots) == {"-1", "q^-2"}
    again = BraidingDocument.model_validate_json(dumps(doc))
    assert dumps(again) == dumps(doc)
    assert again.sha256() == doc.sha256()
    assert again.to_braiding().same_data(b)


def test_braiding_document_is_canonicalized():
    doc = BraidingDocument(dim=1, roots=("-1", "1"), entries=[((1, 1), (1, 1), "q/q")])
    assert doc.entries == [((1, 1), (1, 1), "1")]
    assert BraidingDocument(dim=1, roots=("1", "-1"), entries=[((1, 1), (1, 1), "0")]).entries == []


@pytest.mark.parametrize(
    "fields",
    [
        {"dim": 2, "roots": ("1", "-1"), "entries": [((1, 3), (1, 1), "1")]},
        {"dim": 1, "roots": ("1", "-1"), "hecke_param": "q"},
        {"dim": 1, "roots": ("1", "q"), "hecke_param": "q"},
        {"dim": 1, "roots": ("-1", "q^-2"), "hecke_param": "-1"},
        {"dim": 1, "roots": ("1", "-1"), "entries": [((1, 1), (1, 1), "1"), ((1, 1), (1, 1), "2")]},
        {"dim": 1, "roots": ("1", "-1"), "extra": True},
        {"dim": 1, "roots": ("x", "-1")},
    ],
)
def test_invalid_braiding_documents(fields):
    with pytest.raises(ValidationError):
        BraidingDocument(**fields)


def test_braiding_axioms_are_checked():
    doc = BraidingDocument(dim=1, roots=("1", "-1"), entries=[((1, 1), (1, 1), "2")])
    with pytest.raises(BraidingValidationError):
        doc.to_braiding()


def test_context_descriptor_forms():
    assert ContextDescriptor(builtin="flip", N=1, bound=3).key == ("flip", 1, None, 3)
    with pytest.raises(ValidationError):
        ContextDescriptor(builtin="flip", braiding_sha256="ab", bound=3)
    with pytest.raises(ValidationError):
        ContextDescriptor(builtin="flip", bound=3)
    with pytest.raises(ValidationError):
        ContextDescriptor(braiding_sha256="ab", N=1, bound=3)
    with pytest.raises(ValidationError):
        ContextDescriptor(builtin="nope", N=1, bound=3)


def test_endo_component_forms():
    with pytest.raises(ValidationError):
        EndoComponent(grade=1)
    with pytest.raises(ValidationError):
        EndoComponent(grade=1, matrix=[["1", "0"]])
    assert EndoComponent(grade=1, matrix=[["q*q", "0"], ["0", "1"]]).matrix[0][0] == "q^2"


def test_entries_form_is_exterior_only():
    with pytest.raises(ValidationError):
        EndoDocument(
            context=ContextDescriptor(builtin="sl-dual", N=1, bound=3),
            components=[EndoComponent(grade=1, entries=[((1,), (1,), "1")])],
        )


def test_duplicate_grades():
    with pytest.raises(ValidationError):
        EndoDocument(
            context=ContextDescriptor(builtin="flip", N=1, bound=3),
            components=[EndoComponent(grade=0, matrix=[["1"]]), EndoComponent(grade=0, matrix=[["2"]])],
        )


def test_codec_entries_round_trip(store):
    codec = DocumentCodec(store)
    text = json.dumps(_exterior_doc(1, [{"grade": 1, "entries": [[[2], [2], "1"], [[1], [2], "q"]]}]))
    doc = codec.parse_endo(text)
    a = codec.to_endo(doc)
    assert a.support() == [1]
    emitted = codec.from_endo(a, form="entries", descriptor=doc.context)
    assert codec.emit(emitted) == codec.emit(doc)


def test_codec_matrix_form(store, ctx1):
    codec = DocumentCodec(store)
    a = GradedEndo.single(ctx1, 2, linalg.matrix([[parse_scalar("q + 1")]], (1, 1)))
    doc = codec.from_endo(a)
    assert doc.form == "matrix"
    assert doc.components == [EndoComponent(grade=2, matrix=[["q + 1"]])]
    assert codec.to_endo(doc) == a


def test_codec_rejects_wrong_block_size(store):
    codec = DocumentCodec(store)
    doc = EndoDocument.model_validate(_exterior_doc(1, [{"grade": 1, "matrix": [["1"]]}]))
    with pytest.raises(GradeMismatchError):
        codec.to_endo(doc)


def test_codec_reports_malformed_input(store, tmp_path):
    codec = DocumentCodec(store)
    with pytest.raises(DocumentError):
        codec.parse_endo("{not json")
    with pytest.raises(DocumentError):
        codec.parse_endo(tmp_path / "missing.json")
    with pytest.raises(DocumentError):
        codec.parse_braiding(json.dumps({"dim": 0, "roots": ["1", "-1"]}))


def test_store_caches_contexts(store):
    descriptor = store.builtin_descriptor("sl-exterior", 1)
    assert descriptor.bound == 3
    assert store.context(descriptor) is store.context(descriptor)
    assert store.descriptor_of(store.context(descriptor)) == descriptor
    # terminating builtins share one context whatever bound is declared
    other = ContextDescriptor(builtin="sl-exterior", N=1, bound=6)
    assert store.context(other) is store.context(descriptor)


def test_store_registers_custom_braidings():
    store = ContextStore()
    doc = BraidingDocument.from_braiding(builtin("flip", 1))
    descriptor = store.register(doc, bound=2)
    assert descriptor.braiding_sha256 == doc.sha256()
    ctx = store.context(descriptor)
    assert ctx.dims == (1, 2, 3)
    assert ctx.name.startswith("custom[")
    with pytest.raises(DocumentError):
        ContextStore().context(descriptor)


def test_foreign_context(ctx1):
    with pytest.raises(DocumentError):
        ContextStore().descriptor_of(ctx1)


@given(scalars())
@settings(max_examples=100, deadline=None)
def test_scalar_text_is_stable(s):
    text = to_text(s)
    assert parse_scalar(text) == s
    assert canonical_scalar(text) == text


@given(braiding_documents())
@settings(max_examples=100, deadline=None)
def test_braiding_documents_reparse_byte_for_byte(doc):
    text = dumps(doc)
    again = DocumentCodec.parse_braiding(text)
    assert again.model_dump() == doc.model_dump()
    assert dumps(again) == text


@given(endo_documents())
@settings(max_examples=100, deadline=None)
def test_endo_documents_reparse_byte_for_byte(doc):
    text = dumps(doc)
    again = DocumentCodec.parse_endo(text)
    assert again.model_dump() == doc.model_dump()
    assert dumps(again) == text
