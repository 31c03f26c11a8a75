"""Document format: a canonical JSON envelope around a kind-specific body.

Envelope fields are ``format_version``, ``kind``, ``id`` and ``body``, plus an
optional ``registry`` (an inline registry body) and ``symbols`` (the notation
the document relies on).  Symbols are checked against the registry's
notational axioms when one is referenced.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

import jsonschema

from .canon import canonical_json
from .errors import DocumentError, HSGError
from .registry import Registry, registry_from_body

FORMAT_VERSION = 1
KINDS = ("category", "functor", "adjunction", "diagram", "grid", "criterion", "registry", "package", "ring", "world")
_ENVELOPE = {"format_version", "kind", "id", "body", "registry", "symbols"}


@lru_cache(maxsize=None)
def schemas() -> dict:
    return json.loads(resources.files("hsgkit.data").joinpath("schemas.json").read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Document:
    kind: str
    body: Mapping
    format_version: int = FORMAT_VERSION
    id: str = ""
    registry: Registry | None = None
    registry_body: Mapping | None = None
    symbols: tuple = ()
    warnings: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        d = {"format_version": self.format_version, "kind": self.kind, "id": self.id, "body": self.body}
        if self.registry_body is not None:
            d["registry"] = self.registry_body
        if self.symbols:
            d["symbols"] = list(self.symbols)
        return d


def _locate(text: str, path) -> tuple:
    """Best-effort line/column of a JSON path, found by scanning for its keys."""
    pos = 0
    for part in path:
        if isinstance(part, str):
            hit = text.find(json.dumps(part, ensure_ascii=False), pos)
            if hit < 0:
                break
            pos = hit
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def parse_document(text: str | bytes, registry: Registry | None = None) -> Document:
    """Parse and validate a document; ``registry`` overrides any inline one."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentError("syntax", f"input is not UTF-8: {e.reason}", 1, e.start + 1) from None
    try:
        raw = json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float)
    except json.JSONDecodeError as e:
        raise DocumentError("syntax", e.msg, e.lineno, e.colno) from None
    except RecursionError:
        raise DocumentError("syntax", "nesting too deep") from None
    except ValueError as e:
        raise DocumentError("syntax", str(e)) from None
    if not isinstance(raw, dict):
        raise DocumentError("schema", "document must be a JSON object", 1, 1)
    extra = sorted(set(raw) - _ENVELOPE)
    if extra:
        raise DocumentError("schema", f"unknown envelope fields {extra}", *_locate(text, [extra[0]]))
    kind = raw.get("kind")
    if kind not in KINDS:
        raise DocumentError("unknown-kind", f"unknown document kind {kind!r}", *_locate(text, ["kind"]))
    version = raw.get("format_version")
    if version != FORMAT_VERSION or isinstance(version, bool):
        raise DocumentError("schema", f"unsupported format_version {version!r}", *_locate(text, ["format_version"]))
    doc_id = raw.get("id", "")
    if not isinstance(doc_id, str):
        raise DocumentError("schema", "id must be a string", *_locate(text, ["id"]))
    if "body" not in raw:
        raise DocumentError("schema", "missing body", 1, 1)
    body = raw["body"]
    _validate(kind, body, text)
    symbols = raw.get("symbols", [])
    if not isinstance(symbols, list) or not all(isinstance(s, str) and s for s in symbols):
        raise DocumentError("schema", "symbols must be a list of nonempty strings", *_locate(text, ["symbols"]))
    reg_body = raw.get("registry")
    if reg_body is not None:
        _validate("registry", reg_body, text, ("registry",))
        if registry is None:
            try:
                registry = registry_from_body(reg_body)
            except HSGError as e:
                raise DocumentError("schema", f"inline registry: {e}", *_locate(text, ["registry"])) from None
    warnings = ()
    if symbols:
        if registry is None:
            warnings = (f"symbols {sorted(symbols)} are not checked: no registry referenced",)
        else:
            declared = registry.symbols()
            missing = [s for s in symbols if s not in declared]
            if missing:
                raise DocumentError(
                    "undeclared-symbol",
                    f"symbol(s) {missing} have no notational axiom in the referenced registry",
                    *_locate(text, ["symbols"]),
                )
    return Document(kind, body, version, doc_id, registry, reg_body, tuple(symbols), warnings)


def _reject_constant(c):
    raise ValueError(f"non-finite number {c}")


def _finite_float(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise ValueError(f"number {s} overflows a double")
    return v


def _validate(kind: str, body, text: str, prefix=("body",)):
    try:
        jsonschema.validate(body, schemas()[kind])
    except jsonschema.ValidationError as e:
        path = [*prefix, *e.absolute_path]
        where = "/".join(str(p) for p in path)
        raise DocumentError("schema", f"{kind} body at {where}: {e.message}", *_locate(text, path), path) from None


def serialize_document(doc: Document) -> str:
    return canonical_json(doc.to_dict())


def canonicalize(text: str | bytes) -> str:
    return serialize_document(parse_document(text))


def make_document(kind: str, body: Mapping, doc_id: str = "", **extra) -> str:
    """Serialize a body as a document, validating it on the way."""
    d = {"format_version": FORMAT_VERSION, "kind": kind, "id": doc_id, "body": body, **extra}
    return canonicalize(canonical_json(d))
