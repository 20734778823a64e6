"""Tests for the audit of the rectangle example."""
import logging

from multismooth.worked_example import (
    STATED_ATTAINING_COUNT,
    STATED_ORDER,
    audit_report,
    audit_worked_example,
    example_operator,
)


def test_example_operator():
    """Test that T(x, y, z, w) = (y + w, x)."""
    operator = example_operator()
    assert operator.apply((1, 2, 3, 4)) == (6, 1)


def test_audit_reports_computed_values(caplog):
    """Test the computed attainment set and order against the stated ones."""
    with caplog.at_level(logging.WARNING, logger="multismooth.worked_example"):
        audit = audit_worked_example()
    assert audit.norm_value == 1
    assert len(audit.attaining_vertices) == 16
    assert audit.order == audit.oracle_order == 7
    assert audit.passed
    assert len(audit.divergences) == 2
    assert str(STATED_ATTAINING_COUNT) in audit.divergences[0]
    assert str(STATED_ORDER) in audit.divergences[1]
    warnings = [r for r in caplog.records if r.name == "multismooth.worked_example"]
    assert len(warnings) == 2


def test_audit_report():
    """Test the report payload."""
    report = audit_report(audit_worked_example())
    assert report["norm"] == "1"
    assert report["attaining_count"] == 16
    assert report["stated_order"] == STATED_ORDER
    assert report["passed"] is True
    assert report["operator"]["domain"] == {"type": "linf", "dim": 4}
