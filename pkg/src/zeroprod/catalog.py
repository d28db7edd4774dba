"""Append-only JSONL results catalog."""

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

import jsonschema

from . import SCHEMA_VERSION, __version__

CATALOG_ENV = "ZEROPROD_CATALOG"
DEFAULT_CATALOG = "zeroprod_catalog.jsonl"
KINDS = ("rys", "shortest", "construct", "verify")

RECORD_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "payload", "q", "n", "elapsed_ms", "tool_version", "timestamp"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "payload": {"type": "object"},
        "q": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 1},
        "elapsed_ms": {"type": "number", "minimum": 0},
        "tool_version": {"type": "string"},
        "timestamp": {"type": "string", "format": "date-time"},
    },
    "additionalProperties": False,
}

_lock = threading.Lock()


def utc_now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class CatalogRecord:
    kind: str
    payload: dict
    q: int
    n: int
    elapsed_ms: float
    tool_version: str = __version__
    timestamp: str = field(default_factory=utc_now)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "payload": self.payload,
            "q": self.q,
            "n": self.n,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def validate_record(d):
    jsonschema.validate(d, RECORD_SCHEMA, format_checker=jsonschema.FormatChecker())


def default_path():
    return os.environ.get(CATALOG_ENV, DEFAULT_CATALOG)


def append_record(record, path=None):
    """Validate and append one line; returns the path written."""
    path = path or default_path()
    d = record.to_dict()
    validate_record(d)
    line = json.dumps(d, sort_keys=True)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with _lock, open(path, "a") as fh:
        fh.write(line + "\n")
    return path


def read_catalog(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
