"""Tests for the seeded instance generators."""
from fractions import Fraction as F

import numpy as np
import pytest

from multismooth.const import CASE_II, CASE_III, CASE_IV
from multismooth.exceptions import GenerationExhausted, ValidationError
from multismooth.generators import (
    EUCLIDEAN_TARGETS,
    LINF3_TARGETS,
    InstanceConfig,
    _Rejected,
    _rejection_sample,
    circle_point,
    operator_from_images,
    planted_operator,
    random_instance,
    random_polygon,
    sphere_point,
)
from multismooth.hilbert import bj_orthogonal_hilbert, top_singular_subspace
from multismooth.operators import LINF3_LABELS, classify_linf3_case, norm_attainment_ext, operator_smoothness
from multismooth.spaces import EuclideanSpace, Field, norm, squared_norm


def test_rational_circle_and_sphere_points():
    """Test that the parametrizations land on the unit sphere."""
    assert squared_norm(EuclideanSpace(2), circle_point(F(1, 2))) == 1
    assert squared_norm(EuclideanSpace(3), sphere_point((F(1, 3), F(-2)))) == 1


def test_random_polygon_vertices_are_unit():
    """Test that every polygon vertex has norm one."""
    rng = np.random.default_rng(3)
    for _ in range(5):
        polygon = random_polygon(rng)
        assert polygon.dim == 2
        assert all(norm(polygon, v) == 1 for v in polygon.vertices)
        assert not polygon.warnings


def test_operator_from_images(linf2):
    """Test that the first three cube labels map to the requested images."""
    images = ((F(1), F(1)), (F(1), F(-1)), (F(-1), F(-1)))
    operator = operator_from_images(images, linf2)
    for label, image in zip(LINF3_LABELS, images):
        assert operator.apply(label) == image
    assert operator.apply(LINF3_LABELS[3]) == (F(-1), F(1))


def test_same_seed_same_instance():
    """Test determinism."""
    config = InstanceConfig("polyhedral-pair")
    first, second = random_instance(11, config), random_instance(11, config)
    assert first.operator == second.operator
    assert first.details == second.details


@pytest.mark.parametrize("target", LINF3_TARGETS)
@pytest.mark.parametrize("seed", range(3))
def test_linf3_case_targets(target, seed):
    """Test that planted cube instances land in their case."""
    instance = random_instance(seed, InstanceConfig("linf3-case", target=target))
    report = classify_linf3_case(instance.operator)
    assert report.case_label == target
    assert report.consistent


@pytest.mark.parametrize("target", EUCLIDEAN_TARGETS)
def test_linf3_case_euclidean_targets(target):
    """Test the cases available in the Euclidean plane."""
    config = InstanceConfig("linf3-case", target=target, codomain_family="euclidean")
    report = classify_linf3_case(random_instance(5, config).operator)
    assert report.case_label == target
    assert report.consistent


@pytest.mark.parametrize("target", [CASE_II, CASE_III, CASE_IV])
def test_non_smooth_cases_need_a_polygon(target):
    """Test that the Euclidean plane cannot host cases with vertex images."""
    with pytest.raises(ValidationError):
        random_instance(1, InstanceConfig("linf3-case", target=target, codomain_family="euclidean"))


def test_sum_rule_instances():
    """Test that the declared expectation matches the computed order."""
    for seed in range(5):
        instance = random_instance(seed, InstanceConfig("sum-rule"))
        assert norm_attainment_ext(instance.operator).norm_value == 1
        assert operator_smoothness(instance.operator).order == instance.details["expected"]


def test_planted_operator():
    """Test the planted multiplicity."""
    rng = np.random.default_rng(0)
    for scalar_field in Field:
        operator = planted_operator(rng, 6, 3, scalar_field)
        structure = top_singular_subspace(operator)
        assert structure.multiplicity == 3
        assert structure.sigma_max == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        planted_operator(rng, 4, 4)


def test_bj_hilbert_instances_match_their_label():
    """Test that the orthogonality verdict is the planted one."""
    for seed in range(6):
        instance = random_instance(seed, InstanceConfig("bj-hilbert"))
        assert bj_orthogonal_hilbert(instance.operator, instance.other) == instance.details["expected"]


def test_unknown_family():
    """Test that unknown families are refused."""
    with pytest.raises(ValidationError):
        random_instance(1, InstanceConfig("no-such-family"))


def test_rejection_budget():
    """Test that the rejection loop gives up after its budget."""
    calls = []

    def draw():
        calls.append(1)
        raise _Rejected("never")

    with pytest.raises(GenerationExhausted) as err:
        _rejection_sample(draw, 4, "impossible instance")
    assert len(calls) == 4
    assert err.value.rejections == 4


def test_rejection_counts_retries():
    """Test that rejected draws are counted."""
    attempts = iter([True, True, False])

    def draw():
        if next(attempts):
            raise _Rejected("again")
        return "done"

    assert _rejection_sample(draw, 10, "instance") == ("done", 2)
