"""Tests for polyhedral and Euclidean spaces."""
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st
import pytest

from multismooth.const import ENV_SCOPE_MAX_DIM
from multismooth.exceptions import (
    DimensionMismatch,
    NotFullDimensional,
    NotSymmetric,
    NotUnitVector,
    ScopeExceeded,
    ValidationError,
)
from multismooth.spaces import (
    EuclideanSpace,
    Field,
    dual_space,
    facet_enumeration,
    is_extreme_point,
    is_l1,
    is_linf,
    l1_space,
    leading_positive,
    linf_space,
    norm,
    point_smoothness,
    squared_norm,
    support_face,
    validate_polyhedral,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
points3 = st.tuples(rationals, rationals, rationals)


def test_cube_and_cross_polytope():
    """Test the standard balls and their polarity."""
    cube = linf_space(3)
    assert len(cube.vertices) == 8
    assert len(cube.facets) == 6
    assert cube.label == "linf^3"
    assert is_linf(cube, 3)
    assert not is_linf(cube, 2)
    assert dual_space(cube) == l1_space(3)
    assert is_l1(l1_space(2))
    assert l1_space(2).facets == linf_space(2).vertices


def test_rectangle_facets(rectangle):
    """Test the facet scan on the rectangle ball."""
    assert rectangle.facets == ((F(-1, 2), 0), (0, -1), (0, 1), (F(1, 2), 0))
    assert facet_enumeration(rectangle) == rectangle.facets
    assert rectangle.label == "polyhedral^2[4 vertices]"
    assert not rectangle.warnings


def test_double_dual(rectangle):
    """Test that the dual of the dual is the space itself."""
    dual = dual_space(rectangle)
    assert dual.vertices == rectangle.facets
    assert dual_space(dual) == rectangle
    assert validate_polyhedral(rectangle.facets).facets == rectangle.vertices


def test_euclidean_is_self_dual(plane):
    """Test the Euclidean dual."""
    assert dual_space(plane) is plane


def test_norms(rectangle, plane):
    """Test gauge values."""
    assert norm(rectangle, (4, 0)) == 2
    assert norm(rectangle, (2, 1)) == 1
    assert norm(linf_space(2), (F(1, 2), -3)) == 3
    assert squared_norm(plane, (F(3, 5), F(4, 5))) == 1
    assert norm(plane, (3, 4)) == pytest.approx(5.0)
    with pytest.raises(DimensionMismatch):
        norm(rectangle, (1, 0, 0))


def test_support_face(rectangle):
    """Test Ext J at a vertex and at an edge point."""
    assert support_face(rectangle, (2, 1)).functionals == ((0, 1), (F(1, 2), 0))
    assert point_smoothness(rectangle, (2, 1)) == 2
    assert support_face(rectangle, (0, 1)).functionals == ((0, 1),)
    assert point_smoothness(rectangle, (0, 1)) == 1
    with pytest.raises(NotUnitVector):
        support_face(rectangle, (1, 0))


def test_euclidean_points_are_smooth(plane):
    """Test that every unit vector of a Euclidean space is smooth."""
    assert point_smoothness(plane, (F(3, 5), F(4, 5))) == 1
    assert point_smoothness(plane, (0.6, 0.8)) == 1
    with pytest.raises(NotUnitVector):
        point_smoothness(plane, (1, 1))


def test_extreme_points(rectangle):
    """Test membership in Ext(B_X)."""
    assert is_extreme_point(rectangle, (2, -1))
    assert not is_extreme_point(rectangle, (0, 1))


def test_redundant_points_dropped():
    """Test that non-vertices are removed with a warning."""
    space = validate_polyhedral([(1, 1), (1, -1), (-1, 1), (-1, -1), (1, 0), (-1, 0)])
    assert space.vertices == linf_space(2).vertices
    assert len(space.warnings) == 2
    assert space == linf_space(2)


def test_invalid_point_sets():
    """Test the validation errors."""
    with pytest.raises(NotSymmetric):
        validate_polyhedral([(1, 0)])
    with pytest.raises(NotFullDimensional):
        validate_polyhedral([(1, 1), (-1, -1)])
    with pytest.raises(DimensionMismatch):
        validate_polyhedral([(1, 0), (-1, 0, 0)])
    with pytest.raises(ValidationError):
        validate_polyhedral([])
    with pytest.raises(ValidationError):
        EuclideanSpace(0)


def test_scope_bound(monkeypatch):
    """Test that the dimension bound is read from the environment."""
    with pytest.raises(ScopeExceeded):
        linf_space(5)
    monkeypatch.setenv(ENV_SCOPE_MAX_DIM, "5")
    assert len(linf_space(5).vertices) == 32


def test_field_coercion():
    """Test that the scalar field accepts its string value."""
    assert EuclideanSpace(2, "complex").field is Field.COMPLEX


def test_leading_positive():
    """Test the canonical representative of an antipodal pair."""
    assert leading_positive((0, 1, -1))
    assert not leading_positive((0, -1, 1))
    assert not leading_positive((0, 0))


@settings(max_examples=50, deadline=None)
@given(points3, rationals)
def test_norm_is_homogeneous(point, scale):
    """Test |c x| = |c| |x| on the cube and the cross-polytope."""
    for space in (linf_space(3), l1_space(3)):
        assert norm(space, tuple(scale * c for c in point)) == abs(scale) * norm(space, point)


@settings(max_examples=50, deadline=None)
@given(points3)
def test_norms_are_polar(point):
    """Test the max and sum norms read off the facets."""
    assert norm(linf_space(3), point) == max(abs(c) for c in point)
    assert norm(l1_space(3), point) == sum(abs(c) for c in point)
