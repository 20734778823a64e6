"""Seeded verification suites.

Each suite draws an instance per seed, re-checks the hypotheses it was
built for, then checks the conclusion. Instances violating either are
failures carrying a payload that the CLI can read back.
"""
from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
import logging
import time
from typing import Callable, Optional

import numpy as np

from .const import CASE_I_A, CASE_REDUCED, MAX_CONSECUTIVE_FAILURES
from .exceptions import PropertyViolation, SmoothnessException, UnknownTheorem
from .formats import operator_to_payload, plain
from .generators import (
    EUCLIDEAN_TARGETS,
    LINF3_TARGETS,
    GeneratedInstance,
    InstanceConfig,
    random_instance,
    random_polyhedral_space,
)
from .hilbert import bj_orthogonal_hilbert, hilbert_smoothness, sampled_rank_oracle, top_singular_subspace
from .linalg import bareiss_rank, independent_rows, outer_flat
from .operators import (
    adjoint,
    bj_orthogonal,
    classify_linf3_case,
    norm_attainment_ext,
    operator_smoothness,
    smoothness_via_adjoint,
)
from .oracle import (
    bj_breakpoint_oracle,
    brute_rank_oracle,
    extreme_contraction_lp,
    extreme_contraction_smoothness,
    hilbert_bj_oracle,
)
from .spaces import (
    EuclideanSpace,
    Field,
    dual_space,
    facet_enumeration,
    leading_positive,
    norm,
    point_smoothness,
    validate_polyhedral,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Failure:
    seed: int
    message: str
    payload: Optional[dict] = None


@dataclass(frozen=True)
class VerificationReport:
    theorem_id: str
    seeds_run: int
    passes: int
    failures: tuple[Failure, ...]
    wall_time: float
    histogram: dict[str, int] = field(default_factory=dict)
    rejections: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def instance_payload(instance: GeneratedInstance) -> dict:
    payload = {
        "seed": instance.seed,
        "family": instance.family,
        "operator": operator_to_payload(instance.operator),
        "details": plain(instance.details),
    }
    if instance.other is not None:
        payload["other"] = operator_to_payload(instance.other)
    return payload


@contextmanager
def _reporting(instance: GeneratedInstance):
    """Attach the instance to any analysis error raised inside the block."""
    try:
        yield
    except SmoothnessException as err:
        if not (isinstance(err.payload, dict) and "operator" in err.payload):
            detail = err.payload
            err.payload = instance_payload(instance)
            if detail is not None:
                err.payload["detail"] = plain(detail)
        raise


def _violation(message: str, instance: GeneratedInstance) -> PropertyViolation:
    return PropertyViolation(message, instance_payload(instance))


# Suites: each takes a seed and returns (histogram label, rejections)


def _suite_adjoint(seed: int):
    instance = random_instance(seed, InstanceConfig("polyhedral-pair"))
    with _reporting(instance):
        order = operator_smoothness(instance.operator).order
        dual_order = operator_smoothness(adjoint(instance.operator)).order
        if order != dual_order:
            raise _violation(f"order {order} but the adjoint has order {dual_order}", instance)
    return f"order {order}", instance.rejections


def _suite_sum_rule(seed: int):
    instance = random_instance(seed, InstanceConfig("sum-rule"))
    operator = instance.operator
    with _reporting(instance):
        attainment = norm_attainment_ext(operator)
        canonical = [(x, y) for x, y in zip(attainment.attaining_vertices, attainment.images) if leading_positive(x)]
        if bareiss_rank([x for x, _ in canonical]) != len(canonical):
            raise _violation("attaining vertices are not linearly independent", instance)
        expected = sum(point_smoothness(operator.codomain, _unit(y, attainment.norm_value)) for _, y in canonical)
        order = operator_smoothness(operator).order
        if order != expected:
            raise _violation(f"order {order}, sum of point orders {expected}", instance)
    return f"r={len(canonical)}", instance.rejections


def _unit(image, value):
    return tuple(v / value for v in image)


def _suite_mr_rule(seed: int):
    instance = random_instance(seed, InstanceConfig("mr-rule"))
    operator = instance.operator
    with _reporting(instance):
        attainment = norm_attainment_ext(operator)
        canonical = [(x, y) for x, y in zip(attainment.attaining_vertices, attainment.images) if leading_positive(x)]
        basis = independent_rows([x for x, _ in canonical])
        m = operator.codomain.dim
        for index in basis:
            x, y = canonical[index]
            if point_smoothness(operator.codomain, _unit(y, attainment.norm_value)) != m:
                raise _violation(f"image of {x} is not {m}-smooth", instance)
        r = len(basis)
        order = operator_smoothness(operator).order
        if order != m * r:
            raise _violation(f"order {order}, expected m*r = {m}*{r}", instance)
    return f"mr={m * r}", instance.rejections


def _linf3_config(seed: int) -> InstanceConfig:
    target = LINF3_TARGETS[seed % len(LINF3_TARGETS)]
    euclidean = target in EUCLIDEAN_TARGETS and seed % 3 == 0
    return InstanceConfig("linf3-case", target=target, codomain_family="euclidean" if euclidean else "polygon")


def _suite_linf3_cases(seed: int):
    config = _linf3_config(seed)
    instance = random_instance(seed, config)
    operator = instance.operator
    with _reporting(instance):
        report = classify_linf3_case(operator)
        if report.case_label != config.target:
            raise _violation(f"built for case {config.target}, classified {report.case_label}", instance)
        if not report.consistent:
            raise _violation(
                f"case {report.case_label} predicts {report.predicted_order}, rank gives {report.order}", instance
            )
        if isinstance(operator.codomain, EuclideanSpace) and report.case_label != CASE_REDUCED:
            rank_one = bareiss_rank(operator.matrix) == 1
            if rank_one != (report.case_label == CASE_I_A):
                raise _violation(f"rank {bareiss_rank(operator.matrix)} with case {report.case_label}", instance)
    return report.case_label, instance.rejections


def _suite_extreme(seed: int):
    instance = random_instance(seed, InstanceConfig("random-linf3"))
    operator = instance.operator
    with _reporting(instance):
        by_lp = extreme_contraction_lp(operator)
        by_criterion = extreme_contraction_smoothness(operator)
        by_order = operator_smoothness(operator).order == 6
        if not by_lp == by_criterion == by_order:
            raise _violation(f"LP {by_lp}, criterion {by_criterion}, order 6 {by_order}", instance)
    return "extreme" if by_lp else "not extreme", instance.rejections


def _hilbert_suite(scalar_field: Field) -> Callable[[int], tuple]:
    def suite(seed: int):
        multiplicity = 1 + seed % 4
        instance = random_instance(
            seed, InstanceConfig("planted-svd", dim=6, multiplicity=multiplicity, field=scalar_field)
        )
        with _reporting(instance):
            if top_singular_subspace(instance.operator).multiplicity != multiplicity:
                raise _violation(f"planted multiplicity {multiplicity} not recovered", instance)
            formula = multiplicity * multiplicity
            if scalar_field is Field.REAL:
                formula = multiplicity * (multiplicity + 1) // 2
            order = hilbert_smoothness(instance.operator)
            sampled = sampled_rank_oracle(instance.operator, seed=seed)
            if not order == formula == sampled:
                raise _violation(f"formula {formula}, order {order}, sampled rank {sampled}", instance)
        return f"n={multiplicity}", instance.rejections

    return suite


def _suite_bj_hilbert(seed: int):
    instance = random_instance(seed, InstanceConfig("bj-hilbert"))
    with _reporting(instance):
        verdict = bj_orthogonal_hilbert(instance.operator, instance.other)
        oracle = hilbert_bj_oracle(instance.operator, instance.other)
        if verdict != oracle:
            raise _violation(f"range test says {verdict}, line search says {oracle}", instance)
        if verdict != instance.details["expected"]:
            raise _violation(f"built to be {instance.details['expected']}, found {verdict}", instance)
    return "orthogonal" if verdict else "not orthogonal", instance.rejections


def _suite_bj_polyhedral(seed: int):
    instance = random_instance(seed, InstanceConfig("bj-polyhedral", dim=2 + seed % 2))
    with _reporting(instance):
        verdict = bj_orthogonal(instance.operator, instance.other)
        oracle = bj_breakpoint_oracle(instance.operator, instance.other)
        if verdict != oracle:
            raise _violation(f"derivative test says {verdict}, breakpoints say {oracle}", instance)
    return "orthogonal" if verdict else "not orthogonal", instance.rejections


def _independent_subset(rng, vectors: list, size: int) -> list:
    chosen = []
    for index in rng.permutation(len(vectors)):
        candidate = chosen + [vectors[int(index)]]
        if bareiss_rank(candidate) == len(candidate):
            chosen = candidate
        if len(chosen) == size:
            break
    return chosen


def _suite_independence(seed: int):
    rng = np.random.default_rng(seed)
    domain = random_polyhedral_space(rng, int(rng.integers(2, 5)))
    codomain = random_polyhedral_space(rng, int(rng.integers(2, 5)))
    vertices = _independent_subset(rng, list(domain.vertices), int(rng.integers(1, domain.dim + 1)))
    functionals = _independent_subset(rng, list(codomain.facets), int(rng.integers(1, codomain.dim + 1)))
    rows = [outer_flat(y, x) for y in functionals for x in vertices]
    rank = bareiss_rank(rows)
    if rank != len(rows):
        raise PropertyViolation(
            f"{len(rows)} outer products have rank {rank}",
            plain({"seed": seed, "vertices": vertices, "functionals": functionals}),
        )
    return f"{len(functionals)}x{len(vertices)}", 0


def _rank_oracle_config(seed: int) -> InstanceConfig:
    family = ("polyhedral-pair", "random-linf3", "sum-rule")[seed % 3]
    codomain = "euclidean" if family == "random-linf3" and seed % 2 else "polygon"
    return InstanceConfig(family, codomain_family=codomain)


def _suite_rank_oracle(seed: int):
    instance = random_instance(seed, _rank_oracle_config(seed))
    with _reporting(instance):
        order = operator_smoothness(instance.operator).order
        brute = brute_rank_oracle(instance.operator)
        if order != brute:
            raise _violation(f"pipeline order {order}, brute oracle {brute}", instance)
    return instance.family, instance.rejections


def _suite_linf_codomain(seed: int):
    instance = random_instance(seed, InstanceConfig("linf-codomain"))
    with _reporting(instance):
        shortcut = smoothness_via_adjoint(instance.operator)
        order = operator_smoothness(instance.operator).order
        if shortcut.order != order:
            raise _violation(f"adjoint shortcut {shortcut.order}, order {order}", instance)
    return f"rows={len(shortcut.attaining_rows)}", instance.rejections


def _suite_polarity(seed: int):
    rng = np.random.default_rng(seed)
    space = random_polyhedral_space(rng, int(rng.integers(2, 5)))
    payload = {"seed": seed, "vertices": space.vertices}
    if facet_enumeration(space) != space.facets:
        raise PropertyViolation("facet enumeration is not reproducible", plain(payload))
    polar = validate_polyhedral(space.facets)
    if polar.warnings or polar.vertices != dual_space(space).vertices or polar.facets != space.vertices:
        raise PropertyViolation("the polar of the polar differs from the space", plain(payload))
    point = tuple(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5))) for _ in range(space.dim))
    scale = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    if norm(space, tuple(scale * c for c in point)) != abs(scale) * norm(space, point):
        raise PropertyViolation("norm is not homogeneous", plain(payload))
    if norm(space, point) != max(abs(sum(f * c for f, c in zip(v, point))) for v in polar.vertices):
        raise PropertyViolation("norm differs from the support function of the polar", plain(payload))
    return space.label.split("[")[0], 0


SUITES: dict[str, Callable[[int], tuple]] = {
    "adjoint": _suite_adjoint,
    "sum-rule": _suite_sum_rule,
    "mr-rule": _suite_mr_rule,
    "linf3-cases": _suite_linf3_cases,
    "extreme": _suite_extreme,
    "hilbert-real": _hilbert_suite(Field.REAL),
    "hilbert-complex": _hilbert_suite(Field.COMPLEX),
    "bj-hilbert": _suite_bj_hilbert,
    "bj-polyhedral": _suite_bj_polyhedral,
    "independence": _suite_independence,
    "rank-oracle": _suite_rank_oracle,
    "linf-codomain": _suite_linf_codomain,
    "polarity": _suite_polarity,
}
THEOREM_IDS = tuple(SUITES)


class VerificationRunner:
    """Runs one suite over consecutive seeds and tallies the outcome."""

    def __init__(self, theorem_id: str) -> None:
        if theorem_id not in SUITES:
            raise UnknownTheorem(f"Unknown theorem {theorem_id!r}; known: {', '.join(THEOREM_IDS)}")
        self.theorem_id = theorem_id
        self._suite = SUITES[theorem_id]
        self._failed_in_a_row = 0

    def run(self, seeds: int, seed0: int = 1) -> VerificationReport:
        self._failed_in_a_row = 0
        start = time.perf_counter()
        passes = 0
        rejections = 0
        failures: list[Failure] = []
        histogram: Counter = Counter()
        for seed in range(seed0, seed0 + seeds):
            try:
                label, rejected = self._suite(seed)
            except SmoothnessException as err:
                failures.append(Failure(seed, err.message, err.payload))
                self._failed_in_a_row += 1
                if self._failed_in_a_row >= MAX_CONSECUTIVE_FAILURES:
                    _LOGGER.error("%s: multiple consecutive failures, seed %s: %s", self.theorem_id, seed, err.message)
                else:
                    _LOGGER.warning("%s: seed %s failed: %s", self.theorem_id, seed, err.message)
                continue
            self._failed_in_a_row = 0
            passes += 1
            rejections += rejected
            histogram[label] += 1
        elapsed = time.perf_counter() - start
        _LOGGER.info(
            "%s: %s/%s passed in %.2fs (%s rejected draws)", self.theorem_id, passes, seeds, elapsed, rejections
        )
        return VerificationReport(
            theorem_id=self.theorem_id,
            seeds_run=seeds,
            passes=passes,
            failures=tuple(failures),
            wall_time=elapsed,
            histogram=dict(sorted(histogram.items())),
            rejections=rejections,
        )


def verify_theorem(theorem_id: str, seeds: int, seed0: int = 1) -> VerificationReport:
    """Run ``seeds`` instances of a suite starting at ``seed0``."""
    return VerificationRunner(theorem_id).run(seeds, seed0)


def verification_report(report: VerificationReport) -> dict:
    return {
        "theorem_id": report.theorem_id,
        "seeds_run": report.seeds_run,
        "passes": report.passes,
        "failure_count": len(report.failures),
        "wall_time": round(report.wall_time, 3),
        "rejections": report.rejections,
        "histogram": report.histogram,
        "failures": [
            {"seed": f.seed, "message": f.message, "payload": f.payload} for f in report.failures
        ],
    }
