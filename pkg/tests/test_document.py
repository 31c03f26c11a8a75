import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hsgkit.document import KINDS, canonicalize, make_document, parse_document, serialize_document
from hsgkit.errors import DocumentError
from hsgkit.fixtures import table_document
from hsgkit.grid import grid_to_body
from hsgkit.neuro.world import self_loop_body
from hsgkit.registry import init_registry
from hsgkit.suites import definability_grid

VALID = {
    "grid": grid_to_body(definability_grid()),
    "registry": init_registry().to_body(),
    "world": self_loop_body(),
    "category": {"chain": ["a", "b"]},
    "ring": {"zmod": 3, "generators": ["x"]},
}


def test_kinds_listed():
    assert set(VALID) <= set(KINDS)


@pytest.mark.parametrize("kind", sorted(VALID))
def test_roundtrip(kind):
    text = make_document(kind, VALID[kind], f"{kind}-1")
    doc = parse_document(text)
    assert doc.kind == kind and doc.id == f"{kind}-1"
    assert parse_document(serialize_document(doc)) == doc


@pytest.mark.parametrize("kind", sorted(VALID))
def test_canonical_form_is_fixed_point(kind):
    text = make_document(kind, VALID[kind])
    once = canonicalize(text)
    assert canonicalize(once) == once
    # key order and whitespace in the input do not matter
    shuffled = json.dumps(json.loads(text), indent=4, sort_keys=False)
    assert canonicalize(shuffled) == once


@pytest.mark.parametrize(
    "text,code",
    [
        ("{", "syntax"),
        ("[1]", "schema"),
        ('{"kind": "zz", "format_version": 1, "body": {}}', "unknown-kind"),
        ('{"kind": "grid", "format_version": 2, "body": {}}', "schema"),
        ('{"kind": "grid", "format_version": 1, "body": {}, "extra": 1}', "schema"),
        ('{"kind": "grid", "format_version": 1, "body": {"axes": "no"}}', "schema"),
        ('{"kind": "grid", "format_version": 1, "body": {"x": NaN}}', "syntax"),
        ('{"kind": "grid", "format_version": 1, "body": {"x": 1e999}}', "syntax"),
    ],
)
def test_rejections(text, code):
    with pytest.raises(DocumentError) as e:
        parse_document(text)
    assert e.value.code == code


def test_syntax_error_location():
    with pytest.raises(DocumentError) as e:
        parse_document('{\n  "kind": "grid",\n  oops\n}')
    assert (e.value.line, e.value.column) == (3, 3)


def test_symbols_without_registry_warn():
    text = make_document("category", {"chain": ["a"]}, symbols=["E"])
    assert parse_document(text).warnings


def test_undeclared_symbol_with_registry():
    envelope = {"kind": "category", "format_version": 1, "body": {"chain": ["a"]}}
    text = json.dumps({**envelope, "symbols": ["Q"], "registry": init_registry().to_body()})
    with pytest.raises(DocumentError) as e:
        parse_document(text)
    assert e.value.code == "undeclared-symbol"
    ok = make_document("category", {"chain": ["a"]}, symbols=["E", "S"], registry=init_registry().to_body())
    assert parse_document(ok).warnings == ()


def test_table_documents_parse():
    for name in ("table1", "table2"):
        assert parse_document(json.dumps(table_document(name))).kind == "grid"


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.one_of(st.text(), st.binary()))
def test_fuzz_text_never_crashes(data):
    try:
        parse_document(data)
    except DocumentError:
        pass


_json = st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False) | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=5), inner, max_size=4),
    max_leaves=15,
)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(KINDS), _json)
def test_fuzz_bodies_never_crash(kind, body):
    text = json.dumps({"kind": kind, "format_version": 1, "body": body})
    try:
        doc = parse_document(text)
    except DocumentError:
        return
    assert canonicalize(canonicalize(text)) == canonicalize(text)
    assert doc.kind == kind
