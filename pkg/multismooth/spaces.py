"""Finite-dimensional normed spaces: polyhedral balls and Euclidean spaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
import logging
import math
from typing import Optional, Sequence, Union

from .const import DEFAULT_TOL, SCOPE_MAX_VERTICES, scope_max_dim
from .exceptions import (
    DimensionMismatch,
    NotFullDimensional,
    NotSymmetric,
    NotUnitVector,
    ScopeExceeded,
    ValidationError,
)
from .linalg import bareiss_rank, dot, exact_vector, solve

_LOGGER = logging.getLogger(__name__)

Vector = tuple


class ArithmeticMode(str, Enum):
    """Arithmetic a value or a result was computed in."""

    EXACT = "exact"
    APPROX = "approx"


class Field(str, Enum):
    """Scalar field of a Euclidean space."""

    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class PolyhedralSpace:
    """Space whose unit ball is a symmetric polytope.

    ``vertices`` is Ext(B_X); ``facets`` is Ext(B_X*), each facet functional
    normalized so that its maximum over the ball is 1. Both lists are sorted
    lexicographically.
    """

    dim: int
    vertices: tuple[Vector, ...]
    facets: tuple[Vector, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def label(self) -> str:
        """Short description for logs and reports."""
        if is_linf(self):
            return f"linf^{self.dim}"
        if is_l1(self):
            return f"l1^{self.dim}"
        return f"polyhedral^{self.dim}[{len(self.vertices)} vertices]"


@dataclass(frozen=True)
class EuclideanSpace:
    """Real or complex inner-product space."""

    dim: int
    field: Field = Field.REAL

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"Euclidean dimension must be positive, got {self.dim}")
        object.__setattr__(self, "field", Field(self.field))

    @property
    def label(self) -> str:
        """Short description for logs and reports."""
        return f"euclidean^{self.dim}[{self.field.value}]"


Space = Union[PolyhedralSpace, EuclideanSpace]


@dataclass(frozen=True)
class SupportFace:
    """Ext J(y): the extreme supporting functionals of a unit vector."""

    base_point: Vector
    functionals: tuple[Vector, ...]


def negate(vector: Sequence) -> Vector:
    """Return -v."""
    return tuple(-v for v in vector)


def leading_positive(vector: Sequence) -> bool:
    """True when the first nonzero coordinate is positive."""
    for value in vector:
        if value:
            return value > 0
    return False


def linf_space(dim: int) -> PolyhedralSpace:
    """The cube: vertices are all sign vectors, facets are +-e_i*."""
    _check_scope(dim, 2**dim)
    vertices = tuple(sorted(tuple(Fraction(s) for s in signs) for signs in product((-1, 1), repeat=dim)))
    return PolyhedralSpace(dim, vertices, _unit_vectors(dim))


def l1_space(dim: int) -> PolyhedralSpace:
    """The cross-polytope, polar of the cube."""
    _check_scope(dim, 2 * dim)
    facets = tuple(sorted(tuple(Fraction(s) for s in signs) for signs in product((-1, 1), repeat=dim)))
    return PolyhedralSpace(dim, _unit_vectors(dim), facets)


def _unit_vectors(dim: int) -> tuple[Vector, ...]:
    units = []
    for i in range(dim):
        for sign in (-1, 1):
            units.append(tuple(Fraction(sign if j == i else 0) for j in range(dim)))
    return tuple(sorted(units))


def _check_scope(dim: int, vertex_count: int) -> None:
    if dim > scope_max_dim():
        raise ScopeExceeded(f"Dimension {dim} exceeds the scope bound {scope_max_dim()}")
    if vertex_count > SCOPE_MAX_VERTICES:
        raise ScopeExceeded(f"{vertex_count} vertices exceed the scope bound {SCOPE_MAX_VERTICES}")


def _scan_facets(dim: int, points: Sequence[Vector]) -> tuple[Vector, ...]:
    """Supporting hyperplanes through dim linearly independent points."""
    point_set = set(points)
    found: set[Vector] = set()
    candidates = 0
    for subset in combinations(points, dim):
        if any(negate(p) in subset for p in subset):
            continue
        normal = solve(subset, [Fraction(1)] * dim)
        if normal is None or normal in found:
            continue
        candidates += 1
        if all(dot(normal, p) <= 1 for p in point_set):
            found.add(normal)
            found.add(negate(normal))
    _LOGGER.debug("Facet scan: dim=%s, %s points, %s hyperplanes tried, %s facets", dim, len(points), candidates, len(found))
    return tuple(sorted(found))


def validate_polyhedral(vertices: Sequence[Sequence]) -> PolyhedralSpace:
    """Build a canonical polyhedral space from a symmetric point set.

    Points that are not vertices of the convex hull are dropped and reported
    in ``warnings``.
    """
    if not vertices:
        raise ValidationError("A polyhedral space needs at least one vertex")
    dims = {len(v) for v in vertices}
    if len(dims) != 1:
        raise DimensionMismatch(f"Vertices have inconsistent dimensions {sorted(dims)}")
    dim = dims.pop()
    if dim < 1:
        raise ValidationError("Vertices must have positive dimension")
    points = sorted(set(exact_vector(v) for v in vertices))
    _check_scope(dim, len(points))

    point_set = set(points)
    for point in points:
        if negate(point) not in point_set:
            raise NotSymmetric(f"{_fmt(point)} is present but {_fmt(negate(point))} is not")
    if bareiss_rank(points) < dim:
        raise NotFullDimensional(f"Vertices span less than the whole {dim}-dimensional space")

    facets = _scan_facets(dim, points)
    kept, warnings = [], []
    for point in points:
        active = [f for f in facets if dot(f, point) == 1]
        if active and bareiss_rank(active) == dim:
            kept.append(point)
        else:
            warnings.append(f"redundant point {_fmt(point)} dropped")
    for message in warnings:
        _LOGGER.warning("Polyhedral input: %s", message)

    return PolyhedralSpace(dim, tuple(kept), facets, tuple(warnings))


def facet_enumeration(space: PolyhedralSpace) -> tuple[Vector, ...]:
    """Recompute Ext(B_X*) from the vertices alone."""
    _check_scope(space.dim, len(space.vertices))
    return _scan_facets(space.dim, list(space.vertices))


def dual_space(space: Space) -> Space:
    """The polar polytope; Euclidean spaces are self-dual."""
    if isinstance(space, EuclideanSpace):
        return space
    _check_scope(space.dim, len(space.facets))
    return PolyhedralSpace(space.dim, space.facets, space.vertices)


def _check_dimension(space: Space, x: Sequence) -> None:
    if len(x) != space.dim:
        raise DimensionMismatch(f"Vector of length {len(x)} in a {space.dim}-dimensional space")


def squared_norm(space: Space, x: Sequence):
    """Exact squared norm whenever the input is exact."""
    _check_dimension(space, x)
    if isinstance(space, PolyhedralSpace):
        return norm(space, x) ** 2
    return sum((abs(v) ** 2 for v in x), Fraction(0))


def norm(space: Space, x: Sequence):
    """Gauge of the unit ball.

    Polyhedral norms are exact fractions; Euclidean norms are floats.
    """
    _check_dimension(space, x)
    if isinstance(space, PolyhedralSpace):
        point = exact_vector(x)
        return max(abs(dot(f, point)) for f in space.facets)
    return math.sqrt(float(squared_norm(space, x)))


def _require_unit(space: Space, y: Sequence, tol: float) -> None:
    if isinstance(space, PolyhedralSpace):
        value = norm(space, y)
        if value != 1:
            raise NotUnitVector(f"{_fmt(y)} has norm {value}, expected 1")
    else:
        value = norm(space, y)
        if abs(value - 1) > tol:
            raise NotUnitVector(f"{_fmt(y)} has norm {value!r}, expected 1 within {tol}")


def support_face(space: Space, y: Sequence, tol: float = DEFAULT_TOL) -> SupportFace:
    """Extreme norm-one functionals f with f(y) = 1."""
    _require_unit(space, y, tol)
    if isinstance(space, PolyhedralSpace):
        point = exact_vector(y)
        return SupportFace(point, tuple(f for f in space.facets if dot(f, point) == 1))
    return SupportFace(tuple(y), (tuple(y),))


def point_smoothness(space: Space, y: Sequence, tol: float = DEFAULT_TOL) -> int:
    """Order of smoothness of a unit vector."""
    face = support_face(space, y, tol)
    if isinstance(space, EuclideanSpace):
        return 1
    return bareiss_rank(face.functionals)


def is_extreme_point(space: Space, x: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Membership in Ext(B_X)."""
    _check_dimension(space, x)
    if isinstance(space, PolyhedralSpace):
        return exact_vector(x) in set(space.vertices)
    return abs(norm(space, x) - 1) <= tol


def is_linf(space: Space, dim: Optional[int] = None) -> bool:
    """True when the space is the cube of the given dimension."""
    if not isinstance(space, PolyhedralSpace) or (dim is not None and space.dim != dim):
        return False
    return len(space.vertices) == 2**space.dim and all(abs(c) == 1 for v in space.vertices for c in v)


def is_l1(space: Space, dim: Optional[int] = None) -> bool:
    """True when the space is the cross-polytope of the given dimension."""
    if not isinstance(space, PolyhedralSpace) or (dim is not None and space.dim != dim):
        return False
    return len(space.vertices) == 2 * space.dim and all(
        sorted(abs(c) for c in v) == [0] * (space.dim - 1) + [1] for v in space.vertices
    )


def _fmt(vector: Sequence) -> str:
    return "(" + ", ".join(str(v) for v in vector) + ")"
