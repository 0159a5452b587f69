"""JSON schemas for every machine-readable CLI output.

Each document carries a ``kind`` field naming its schema; ``validate``
dispatches on it.  Schemas live alongside this module as plain JSON so
external consumers can use them without importing the package.
"""

from __future__ import annotations

import json
from importlib import resources

import jsonschema

KINDS = (
    "verify-report",
    "exceptions",
    "rep-count",
    "bound-breakdown",
    "check-result",
    "threshold",
    "artin",
    "sums",
    "table-summary",
)


def schema_for(kind: str) -> dict:
    if kind not in KINDS:
        raise KeyError(f"unknown document kind {kind!r}; expected one of {KINDS}")
    path = resources.files(__package__) / f"{kind}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def validate(doc: dict) -> None:
    """Raise jsonschema.ValidationError if doc does not match its schema."""
    kind = doc.get("kind")
    if kind is None:
        raise jsonschema.ValidationError("document has no 'kind' field")
    jsonschema.validate(doc, schema_for(kind))
