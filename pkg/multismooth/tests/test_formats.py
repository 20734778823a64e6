"""Tests for payload parsing and report rendering."""
from fractions import Fraction as F
import json

import pytest

from multismooth.exceptions import NotSymmetric, ParseError, ValidationError
from multismooth.formats import (
    operator_from_payload,
    operator_to_payload,
    parse_operator,
    parse_point,
    parse_space,
    plain,
    render,
    smoothness_report,
    space_report,
)
from multismooth.operators import ArithmeticMode, operator_smoothness
from multismooth.spaces import EuclideanSpace, Field, is_l1, is_linf


def test_parse_named_spaces(write_json):
    """Test the linf, l1 and euclidean shorthands."""
    assert is_linf(parse_space(write_json({"type": "linf", "dim": 3})), 3)
    assert is_l1(parse_space(write_json({"type": "l1", "dim": 2})), 2)
    space = parse_space(write_json({"type": "euclidean", "dim": 2, "field": "complex"}))
    assert space == EuclideanSpace(2, Field.COMPLEX)


def test_parse_polyhedral_with_rational_strings(write_json):
    """Test vertices given as integers and "p/q" strings."""
    path = write_json({"type": "polyhedral", "vertices": [["2", 1], [2, "-1"], ["-2", "2/2"], [-2, -1]]})
    space = parse_space(path)
    assert space.dim == 2
    assert (F(2), F(1)) in space.vertices
    assert space.facets == ((F(-1, 2), 0), (0, -1), (0, 1), (F(1, 2), 0))


def test_parse_rejects_asymmetric_vertices(write_json):
    """Test that a vertex set must be closed under negation."""
    with pytest.raises(NotSymmetric):
        parse_space(write_json({"type": "polyhedral", "vertices": [[1, 0], [0, 1], [-1, 0]]}))


def test_parse_declared_dimension_mismatch(write_json):
    """Test that a declared dimension must match the vertices."""
    with pytest.raises(ValidationError):
        parse_space(write_json({"type": "polyhedral", "dim": 3, "vertices": [[1, 0], [-1, 0], [0, 1], [0, -1]]}))


def test_invalid_json_reports_the_line(tmp_path):
    """Test that a decoding error carries its line number."""
    path = tmp_path / "broken.json"
    path.write_text('{"type": "linf",\n "dim": }\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        parse_space(path)
    assert err.value.line == 2
    assert "line 2" in err.value.message


def test_invalid_field_is_named(write_json):
    """Test that schema errors name the offending field."""
    with pytest.raises(ParseError) as err:
        parse_space(write_json({"type": "linf", "dim": 0}))
    assert err.value.field == "dim"
    with pytest.raises(ParseError) as err:
        parse_space(write_json({"type": "hexagon", "dim": 2}))
    assert err.value.field == "type"


def test_missing_file(tmp_path):
    """Test that unreadable files are parse errors."""
    with pytest.raises(ParseError):
        parse_space(tmp_path / "absent.json")


def test_operator_field_applies_to_euclidean_spaces(write_json):
    """Test that a top-level field makes the Euclidean spaces complex."""
    payload = {
        "matrix": [[["1", "0"], ["0", "1"]]],
        "domain": {"type": "euclidean", "dim": 2},
        "codomain": {"type": "euclidean", "dim": 1},
        "field": "complex",
    }
    operator = parse_operator(write_json(payload))
    assert operator.domain.field is Field.COMPLEX
    assert operator.codomain.field is Field.COMPLEX
    assert operator.matrix == ((1 + 0j, 1j),)


def test_operator_modes(write_json):
    """Test that floats select the approximate path."""
    payload = {
        "matrix": [[0.6, 0, 0], [0.8, 0, 0]],
        "domain": {"type": "linf", "dim": 3},
        "codomain": {"type": "euclidean", "dim": 2},
    }
    assert parse_operator(write_json(payload)).mode is ArithmeticMode.APPROX
    payload["matrix"] = [["3/5", 0, 0], ["4/5", 0, 0]]
    assert parse_operator(write_json(payload)).mode is ArithmeticMode.EXACT


def test_operator_payload_errors_are_located():
    """Test the field path of a bad matrix entry and a bad domain."""
    with pytest.raises(ParseError) as err:
        operator_from_payload({"matrix": [["x"]], "domain": {"type": "linf", "dim": 1}, "codomain": {"type": "linf", "dim": 1}})
    assert err.value.field.startswith("matrix")
    with pytest.raises(ParseError) as err:
        operator_from_payload({"matrix": [[1]], "domain": {"type": "linf", "dim": -1}, "codomain": {"type": "linf", "dim": 1}})
    assert err.value.field == "domain.dim"


def test_operator_payload_round_trip(projection, rectangle):
    """Test that a rendered operator parses back to the same map."""
    payload = operator_to_payload(projection)
    assert payload["domain"] == {"type": "linf", "dim": 3}
    parsed = operator_from_payload(json.loads(json.dumps(payload)))
    assert parsed.matrix == projection.matrix
    assert operator_to_payload(parsed) == payload
    polygon = space_report(rectangle)
    assert polygon["type"] == "polyhedral"
    assert len(polygon["facets"]) == 4


def test_parse_point():
    """Test comma separated rational points."""
    assert parse_point("1/2,-1, 0") == (F(1, 2), F(-1), F(0))
    with pytest.raises(ParseError) as err:
        parse_point("1,abc")
    assert err.value.field == "point"


def test_render_formats_carry_the_same_values(half_diagonal):
    """Test the text and json renderings of one report."""
    payload = smoothness_report(operator_smoothness(half_diagonal))
    text = render(payload)
    assert "order: 2" in text
    assert "mode: exact" in text
    assert json.loads(render(payload, "json")) == plain(payload)
    with pytest.raises(ValidationError):
        render(payload, "xml")
