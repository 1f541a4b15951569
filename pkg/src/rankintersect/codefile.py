"""Code files: JSON schema, validation, and byte-exact round trips."""

from __future__ import annotations

import json
from pathlib import Path

from .codes import RankCode
from .errors import FieldMismatch, SchemaError
from .fields import make_extension_field

ExpectedProperties = list[dict]


def code_to_dict(code: RankCode, expected_properties: ExpectedProperties | None = None) -> dict:
    out = {
        "field": code.field.describe(),
        "n": code.n,
        "k": code.k,
        "generator": [list(row) for row in code.generator],
    }
    if code.name:
        out["name"] = code.name
    if expected_properties is not None:
        out["expected_properties"] = expected_properties
    return out


def emit_code(code: RankCode, expected_properties: ExpectedProperties | None = None) -> str:
    """Canonical JSON text; emit(parse(f)) reproduces f byte-for-byte."""
    return json.dumps(code_to_dict(code, expected_properties), indent=2, sort_keys=True) + "\n"


def _require(mapping: dict, key: str, kind, context: str):
    if key not in mapping:
        raise SchemaError(f"{context}: missing field {key!r}")
    value = mapping[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SchemaError(f"{context}: field {key!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise SchemaError(f"{context}: field {key!r} must be a list")
    if kind is dict and not isinstance(value, dict):
        raise SchemaError(f"{context}: field {key!r} must be an object")
    return value


def dict_to_code(data: dict, context: str = "code file") -> tuple[RankCode, ExpectedProperties | None]:
    if not isinstance(data, dict):
        raise SchemaError(f"{context}: top level must be an object")
    field_desc = _require(data, "field", dict, context)
    q = _require(field_desc, "q", int, f"{context}.field")
    m = _require(field_desc, "m", int, f"{context}.field")
    modulus = _require(field_desc, "modulus", list, f"{context}.field")
    if not all(isinstance(c, int) and not isinstance(c, bool) for c in modulus):
        raise SchemaError(f"{context}.field: modulus coefficients must be integers")
    field = make_extension_field(q, m, tuple(modulus))
    n = _require(data, "n", int, context)
    k = _require(data, "k", int, context)
    generator = _require(data, "generator", list, context)
    if len(generator) != k:
        raise SchemaError(f"{context}: generator has {len(generator)} rows, expected k = {k}")
    rows = []
    for i, row in enumerate(generator):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{context}: generator row {i} must be a list of {n} entries")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool):
                raise SchemaError(f"{context}: generator[{i}][{j}] must be an integer")
            if not 0 <= v < field.order:
                raise FieldMismatch(
                    f"{context}: generator[{i}][{j}] = {v} is outside F_{{{q}^{m}}} encodings [0, {field.order})"
                )
        rows.append(tuple(row))
    code = RankCode(field, rows, name=data.get("name"))
    expected = data.get("expected_properties")
    if expected is not None:
        if not isinstance(expected, list):
            raise SchemaError(f"{context}: expected_properties must be a list")
        for entry in expected:
            if not isinstance(entry, dict) or "property" not in entry or "expected" not in entry:
                raise SchemaError(
                    f"{context}: expected_properties entries need 'property' and 'expected'"
                )
    return code, expected


def parse_code_file(path: str | Path) -> tuple[RankCode, ExpectedProperties | None]:
    """Parse and validate a code file; the modulus and generator rank are checked."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return dict_to_code(data, context=str(path))


def recipe_expected_block(recipe) -> ExpectedProperties:
    return [
        {"property": prop, "expected": expected, "tag": tag}
        for prop, expected, tag in recipe.expected_properties
    ]
