"""JSON input parsing and schema-validated output documents."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from . import intmat
from .classify import FactoredCharPoly
from .errors import DomainError
from .polyring import IntPoly

SCHEMA_VERSION = 1
SCHEMA_NAMES = (
    "type_certificate",
    "dirichlet_family",
    "manifold",
    "obstruction_report",
    "identity_certificate",
    "error",
)


class ParseError(DomainError):
    def __init__(self, msg, source="<input>", line=None, col=None):
        where = source if line is None else f"{source}:{line}:{col}"
        super().__init__(f"{where}: {msg}")
        self.line, self.col = line, col


def load_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source, exc.lineno, exc.colno) from None


def load_json_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc.strerror or exc), path) from None
    return load_json_text(text, path)


def _wrap(source, fn, data):
    try:
        return fn(data)
    except ParseError:
        raise
    except (DomainError, TypeError, ValueError, KeyError, AttributeError) as exc:
        raise ParseError(str(exc) or type(exc).__name__, source) from None


def parse_poly(data, source="<input>") -> IntPoly:
    if not isinstance(data, list):
        raise ParseError("polynomial must be a JSON array of decimal strings", source)
    return _wrap(source, IntPoly.from_json, data)


def parse_matrix(data, source="<input>"):
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a JSON array of rows", source)
    m = _wrap(source, intmat.from_json, data)
    if not m or not intmat.is_square(m):
        raise ParseError("matrix must be square and non-empty", source)
    return m


def parse_factorization(data, source="<input>") -> FactoredCharPoly:
    return _wrap(source, FactoredCharPoly.from_json, data)


def parse_poly_list(data, source="<input>") -> list[IntPoly]:
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise ParseError("expected a JSON array of polynomials", source)
    return [parse_poly(p, source) for p in data]


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(name)
    text = resources.files("otforge").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(doc: dict, name: str | None = None) -> None:
    """Raise jsonschema.ValidationError when doc does not match its schema."""
    name = name or doc.get("kind")
    jsonschema.validate(doc, load_schema(name))


def document(kind: str, **body) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind}
    doc.update(body)
    validate(doc, kind)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
