"""Stable JSON encoding for reports, and a small structural schema validator.

One rule set everywhere: Fractions render as "p/q", polynomials as their
ASCII form, reals to 12 significant digits, dataclasses by field name.
Identical inputs therefore produce byte-identical reports.
"""

import dataclasses
import json
import math
from fractions import Fraction

from .polynomials import UniPoly
from .rationals import fmt_rational


def fmt_float(x):
    return float(f"{x:.12g}")


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf"
        return fmt_float(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, UniPoly):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return jsonable(obj.as_dict())
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [jsonable(v) for v in obj]
    return str(obj)


def _key(k):
    if isinstance(k, tuple):
        return "+".join(str(x) for x in k)
    if isinstance(k, Fraction):
        return fmt_rational(k)
    return str(k)


def dumps(report):
    return json.dumps(jsonable(report), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# structural schema validation
# ---------------------------------------------------------------------------

def validate(obj, schema, path="$"):
    """Check obj against a small structural schema; returns a list of error
    strings (empty when valid).

    Schema nodes: {"type": "object", "required": {key: subschema},
    "optional": {key: subschema}} | {"type": "array", "items": subschema} |
    {"type": "string" | "number" | "integer" | "boolean" | "any"}.
    """
    errors = []
    t = schema.get("type", "any")
    if t == "any":
        return errors
    if t == "object":
        if not isinstance(obj, dict):
            return [f"{path}: expected object, got {type(obj).__name__}"]
        for key, sub in schema.get("required", {}).items():
            if key not in obj:
                errors.append(f"{path}.{key}: missing required key")
            else:
                errors.extend(validate(obj[key], sub, f"{path}.{key}"))
        for key, sub in schema.get("optional", {}).items():
            if key in obj:
                errors.extend(validate(obj[key], sub, f"{path}.{key}"))
        return errors
    if t == "array":
        if not isinstance(obj, list):
            return [f"{path}: expected array, got {type(obj).__name__}"]
        sub = schema.get("items", {"type": "any"})
        for i, v in enumerate(obj):
            errors.extend(validate(v, sub, f"{path}[{i}]"))
        return errors
    if t == "string":
        if not isinstance(obj, str):
            errors.append(f"{path}: expected string, got {type(obj).__name__}")
        return errors
    if t == "number":
        if not isinstance(obj, (int, float)) or isinstance(obj, bool):
            errors.append(f"{path}: expected number, got {type(obj).__name__}")
        return errors
    if t == "integer":
        if not isinstance(obj, int) or isinstance(obj, bool):
            errors.append(f"{path}: expected integer, got {type(obj).__name__}")
        return errors
    if t == "boolean":
        if not isinstance(obj, bool):
            errors.append(f"{path}: expected boolean, got {type(obj).__name__}")
        return errors
    raise ValueError(f"unknown schema type {t!r}")


CERTIFY_SCHEMA = {
    "type": "object",
    "required": {
        "map": {"type": "object",
                "required": {"a": {"type": "string"}, "b": {"type": "string"},
                             "poly": {"type": "string"}}},
        "beta": {"type": "string"},
        "levels": {"type": "array", "items": {
            "type": "object",
            "required": {"n": {"type": "integer"},
                         "certified": {"type": "boolean"}},
            "optional": {"prime": {"type": "integer"},
                         "group_order": {"type": "string"},
                         "group_order_decimal": {"type": "string"},
                         "irreducibility": {"type": "object"},
                         "condition_R": {"type": "object"},
                         "reason": {"type": "string"},
                         "detail": {"type": "string"}},
        }},
        "obstructions": {"type": "object"},
        "conclusion": {"type": "string"},
        "provenance": {"type": "object", "required": {
            "tool": {"type": "string"}, "version": {"type": "string"},
            "command": {"type": "string"}, "seed": {"type": "integer"},
            "config": {"type": "object"}}},
    },
}
