"""Audit of T(x, y, z, w) = (y + w, x) from l_inf^4 into a rectangle ball."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging

from .formats import operator_to_payload, render_matrix, render_scalar
from .operators import Operator, norm_attainment_ext, operator_smoothness
from .oracle import brute_rank_oracle
from .spaces import linf_space, validate_polyhedral

_LOGGER = logging.getLogger(__name__)

RECTANGLE_VERTICES = ((2, 1), (2, -1), (-2, 1), (-2, -1))
EXAMPLE_MATRIX = ((0, 1, 0, 1), (1, 0, 0, 0))

# Reference values the audit compares against
STATED_ATTAINING_COUNT = 8
STATED_ORDER = 6


@dataclass(frozen=True)
class ExampleAudit:
    norm_value: Fraction
    attaining_vertices: tuple[tuple[Fraction, ...], ...]
    images: tuple[tuple[Fraction, ...], ...]
    order: int
    oracle_order: int
    divergences: tuple[str, ...]

    @property
    def passed(self) -> bool:
        """Both pipelines agree; the stated values are only reported."""
        return self.order == self.oracle_order


def example_operator() -> Operator:
    codomain = validate_polyhedral(RECTANGLE_VERTICES)
    return Operator(EXAMPLE_MATRIX, linf_space(4), codomain)


def audit_worked_example() -> ExampleAudit:
    operator = example_operator()
    attainment = norm_attainment_ext(operator)
    order = operator_smoothness(operator).order
    oracle_order = brute_rank_oracle(operator)

    divergences = []
    count = len(attainment.attaining_vertices)
    if count != STATED_ATTAINING_COUNT:
        divergences.append(f"attaining set has {count} vertices, stated {STATED_ATTAINING_COUNT}")
    if order != STATED_ORDER:
        divergences.append(f"order of smoothness is {order}, stated {STATED_ORDER}")
    for message in divergences:
        _LOGGER.warning("Worked example: %s", message)
    if order != oracle_order:
        _LOGGER.error("Worked example: pipeline order %s, brute oracle %s", order, oracle_order)

    return ExampleAudit(
        norm_value=attainment.norm_value,
        attaining_vertices=attainment.attaining_vertices,
        images=attainment.images,
        order=order,
        oracle_order=oracle_order,
        divergences=tuple(divergences),
    )


def audit_report(audit: ExampleAudit) -> dict:
    return {
        "operator": operator_to_payload(example_operator()),
        "norm": render_scalar(audit.norm_value),
        "attaining_count": len(audit.attaining_vertices),
        "attaining_vertices": render_matrix(audit.attaining_vertices),
        "images": render_matrix(audit.images),
        "order": audit.order,
        "oracle_order": audit.oracle_order,
        "stated_attaining_count": STATED_ATTAINING_COUNT,
        "stated_order": STATED_ORDER,
        "divergences": list(audit.divergences),
        "passed": audit.passed,
    }
