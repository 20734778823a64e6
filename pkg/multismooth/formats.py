"""Space and operator files, report payloads and their text/json rendering.

Rationals travel as strings "p/q" (plain integers are accepted on input),
floats as JSON numbers and complex entries as ["re", "im"] pairs.
"""
from __future__ import annotations

from fractions import Fraction
import json
import logging
from pathlib import Path
from typing import Any, Sequence, Union

import voluptuous as vol

from .exceptions import ParseError, SmoothnessException, ValidationError
from .operators import NormAttainment, Operator, SmoothnessReport
from .spaces import (
    EuclideanSpace,
    Field,
    PolyhedralSpace,
    Space,
    is_l1,
    is_linf,
    l1_space,
    linf_space,
    validate_polyhedral,
)

_LOGGER = logging.getLogger(__name__)

FORMATS = ("text", "json")
SPACE_TYPES = ("polyhedral", "linf", "l1", "euclidean")


def rational(value):
    """Exact scalar from a string or an integer."""
    if isinstance(value, bool):
        raise vol.Invalid("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise vol.Invalid(f"not a rational: {value!r}") from err
    raise vol.Invalid(f"expected a rational string, got {value!r}")


def scalar(value):
    """Rational, float, or complex ["re", "im"] pair."""
    if isinstance(value, float):
        return value
    if isinstance(value, list):
        if len(value) != 2:
            raise vol.Invalid("complex entries are [re, im] pairs")
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError) as err:
            raise vol.Invalid(f"not a complex pair: {value!r}") from err
    return rational(value)


POSITIVE_DIM = vol.All(int, vol.Range(min=1))

SPACE_TYPE_SCHEMA = vol.Schema({vol.Required("type"): vol.In(SPACE_TYPES)}, extra=vol.ALLOW_EXTRA)

SPACE_SCHEMAS = {
    "polyhedral": vol.Schema(
        {
            vol.Required("type"): "polyhedral",
            vol.Optional("dim"): POSITIVE_DIM,
            vol.Required("vertices"): vol.All([[rational]], vol.Length(min=1)),
        }
    ),
    "linf": vol.Schema({vol.Required("type"): "linf", vol.Required("dim"): POSITIVE_DIM}),
    "l1": vol.Schema({vol.Required("type"): "l1", vol.Required("dim"): POSITIVE_DIM}),
    "euclidean": vol.Schema(
        {
            vol.Required("type"): "euclidean",
            vol.Required("dim"): POSITIVE_DIM,
            vol.Optional("field", default=Field.REAL.value): vol.In([f.value for f in Field]),
        }
    ),
}

OPERATOR_SCHEMA = vol.Schema(
    {
        vol.Required("matrix"): vol.All([vol.All([scalar], vol.Length(min=1))], vol.Length(min=1)),
        vol.Required("domain"): dict,
        vol.Required("codomain"): dict,
        vol.Optional("field"): vol.In([f.value for f in Field]),
    },
    extra=vol.ALLOW_EXTRA,
)


def _field_path(err: vol.Invalid, prefix: str = "") -> str:
    path = ".".join(str(p) for p in err.path)
    return f"{prefix}.{path}".strip(".") if prefix else path


def _validate(schema: vol.Schema, payload: Any, prefix: str = "") -> dict:
    try:
        return schema(payload)
    except vol.MultipleInvalid as err:
        first = err.errors[0]
        raise ParseError(f"Invalid payload: {first.msg}", field=_field_path(first, prefix)) from err
    except vol.Invalid as err:
        raise ParseError(f"Invalid payload: {err.msg}", field=_field_path(err, prefix)) from err


def read_payload(path: Union[str, Path]) -> Any:
    """Decode one JSON payload file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"Cannot read {path}: {err.strerror}") from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: {err.msg}", line=err.lineno) from err


def space_from_payload(payload: Any, prefix: str = "") -> Space:
    """Validated space from a decoded payload."""
    if not isinstance(payload, dict):
        raise ParseError("A space payload is an object", field=prefix or None)
    kind = _validate(SPACE_TYPE_SCHEMA, payload, prefix)["type"]
    data = _validate(SPACE_SCHEMAS[kind], payload, prefix)
    if kind == "linf":
        return linf_space(data["dim"])
    if kind == "l1":
        return l1_space(data["dim"])
    if kind == "euclidean":
        return EuclideanSpace(data["dim"], Field(data["field"]))
    space = validate_polyhedral(data["vertices"])
    if "dim" in data and data["dim"] != space.dim:
        raise ValidationError(f"Declared dimension {data['dim']} but vertices have dimension {space.dim}")
    return space


def operator_from_payload(payload: Any) -> Operator:
    """Validated operator from a decoded payload."""
    if not isinstance(payload, dict):
        raise ParseError("An operator payload is an object")
    data = _validate(OPERATOR_SCHEMA, payload)
    domain_payload, codomain_payload = dict(data["domain"]), dict(data["codomain"])
    if "field" in data:
        for space_payload in (domain_payload, codomain_payload):
            if space_payload.get("type") == "euclidean":
                space_payload.setdefault("field", data["field"])
    domain = space_from_payload(domain_payload, "domain")
    codomain = space_from_payload(codomain_payload, "codomain")
    return Operator(tuple(tuple(row) for row in data["matrix"]), domain, codomain)


def parse_space(path: Union[str, Path]) -> Space:
    space = space_from_payload(read_payload(path))
    for warning in getattr(space, "warnings", ()):
        _LOGGER.warning("%s: %s", path, warning)
    return space


def parse_operator(path: Union[str, Path]) -> Operator:
    return operator_from_payload(read_payload(path))


def parse_point(text: str) -> tuple[Fraction, ...]:
    """Comma separated rationals, e.g. "1/2,-1,0"."""
    try:
        return tuple(rational(part) for part in text.split(","))
    except vol.Invalid as err:
        raise ParseError(f"Invalid point {text!r}: {err.msg}", field="point") from err


# Rendering


def render_scalar(value) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [repr(value.real), repr(value.imag)]
    return value


def render_vector(vector: Sequence) -> list:
    return [render_scalar(v) for v in vector]


def render_matrix(matrix: Sequence[Sequence]) -> list:
    return [render_vector(row) for row in matrix]


def space_to_payload(space: Space) -> dict:
    if isinstance(space, EuclideanSpace):
        return {"type": "euclidean", "dim": space.dim, "field": space.field.value}
    if is_linf(space):
        return {"type": "linf", "dim": space.dim}
    if is_l1(space):
        return {"type": "l1", "dim": space.dim}
    return {"type": "polyhedral", "dim": space.dim, "vertices": render_matrix(space.vertices)}


def operator_to_payload(operator: Operator) -> dict:
    return {
        "matrix": render_matrix(operator.matrix),
        "domain": space_to_payload(operator.domain),
        "codomain": space_to_payload(operator.codomain),
    }


def space_report(space: Space) -> dict:
    payload = space_to_payload(space)
    if isinstance(space, PolyhedralSpace):
        payload["vertices"] = render_matrix(space.vertices)
        payload["facets"] = render_matrix(space.facets)
        if space.warnings:
            payload["warnings"] = list(space.warnings)
    return payload


def attainment_report(attainment: NormAttainment) -> dict:
    payload = {
        "norm": render_scalar(attainment.norm_value),
        "mode": attainment.mode.value,
        "attaining_count": len(attainment.attaining_vertices),
        "attaining_vertices": render_matrix(attainment.attaining_vertices),
        "images": render_matrix(attainment.images),
    }
    if attainment.tolerance is not None:
        payload["tolerance"] = attainment.tolerance
    if attainment.norm_squared is not None:
        payload["norm_squared"] = render_scalar(attainment.norm_squared)
    return payload


def smoothness_report(report: SmoothnessReport) -> dict:
    payload = {
        "order": report.order,
        "mode": report.mode.value,
        "norm": render_scalar(report.norm_value),
        "attaining_count": report.attaining_count,
        "witness_pairs": [
            {"x": render_vector(pair.x), "y_star": render_vector(pair.y_star)} for pair in report.witness_pairs
        ],
    }
    if report.case_label is not None:
        payload["case_label"] = report.case_label
        payload["s1_size"] = report.s1_size
        payload["predicted_order"] = report.predicted_order
        payload["consistent"] = report.consistent
    return payload


def plain(value: Any) -> Any:
    """Recursively turn rationals and tuples into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return render_scalar(value)


def _text_value(value: Any) -> str:
    if isinstance(value, list):
        if value and all(isinstance(v, list) for v in value):
            return "[" + ", ".join(_text_value(v) for v in value) + "]"
        return "(" + ", ".join(_text_value(v) for v in value) + ")"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    return str(value)


def _text_lines(payload: dict, indent: int = 0) -> list[str]:
    pad = " " * indent
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text_lines(value, indent + 2))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                inner = _text_lines(item, indent + 4)
                lines.append(f"{pad}  - {inner[0].lstrip()}")
                lines.extend(inner[1:])
        else:
            lines.append(f"{pad}{key}: {_text_value(value)}")
    return lines


def render(payload: dict, output_format: str = "text") -> str:
    """Render a report payload; both formats carry the same values."""
    payload = plain(payload)
    if output_format == "json":
        return json.dumps(payload, indent=2, default=str)
    if output_format != "text":
        raise ValidationError(f"Unknown output format {output_format}")
    return "\n".join(_text_lines(payload))


def error_payload(err: SmoothnessException) -> dict:
    payload = {"error": type(err).__name__, "message": err.message}
    if err.payload is not None:
        payload["payload"] = err.payload
    return payload
