"""Canonical JSON profile shared by every serialized artifact."""
from __future__ import annotations

import json


def canonical_json(obj) -> str:
    """Key-sorted, two-space indented, UTF-8 friendly, LF-terminated."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")
