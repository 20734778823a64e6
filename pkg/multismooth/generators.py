"""Seeded random instances with a declared hypothesis bundle.

Every builder draws from ``numpy.random.default_rng(seed)`` and raises
``_Rejected`` when a draw misses its target; the draw is retried through
``backoff`` until the budget is spent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Any, Callable, Optional

import backoff
import numpy as np

from .const import CASE_I_A, CASE_I_B, CASE_II, CASE_III, CASE_IV, CASE_REDUCED, GENERATION_BUDGET
from .exceptions import GenerationExhausted, ValidationError
from .hilbert import restricted_form, top_singular_subspace
from .linalg import bareiss_rank, dot, inverse, matmul, transpose
from .operators import LINF3_LABELS, Operator, norm_attainment_ext
from .spaces import (
    EuclideanSpace,
    Field,
    PolyhedralSpace,
    Space,
    l1_space,
    linf_space,
    negate,
    norm,
    point_smoothness,
    validate_polyhedral,
)

_LOGGER = logging.getLogger(__name__)

LINF3_TARGETS = (CASE_I_A, CASE_I_B, CASE_II, CASE_III, CASE_IV, CASE_REDUCED)
# cases a strictly convex plane can realise
EUCLIDEAN_TARGETS = (CASE_I_A, CASE_I_B, CASE_REDUCED)
FAMILIES = (
    "linf3-case",
    "random-linf3",
    "polyhedral-pair",
    "sum-rule",
    "mr-rule",
    "linf-codomain",
    "bj-polyhedral",
    "planted-svd",
    "bj-hilbert",
)


@dataclass(frozen=True)
class InstanceConfig:
    """What to generate.

    ``family`` picks the builder; ``target`` is the case label for
    ``linf3-case`` or the expected verdict for ``bj-hilbert``.
    """

    family: str
    target: Optional[str] = None
    codomain_family: str = "polygon"
    dim: Optional[int] = None
    multiplicity: Optional[int] = None
    field: Field = Field.REAL
    budget: int = GENERATION_BUDGET


@dataclass(frozen=True)
class GeneratedInstance:
    seed: int
    family: str
    operator: Operator
    other: Optional[Operator] = None
    details: dict[str, Any] = field(default_factory=dict)
    rejections: int = 0


class _Rejected(Exception):
    """The draw does not meet the requested hypothesis."""


def _rejection_sample(draw: Callable[[], Any], budget: int, description: str) -> tuple[Any, int]:
    rejections = 0

    def count(details):
        nonlocal rejections
        rejections = details["tries"]

    sampler = backoff.on_exception(
        backoff.constant,
        _Rejected,
        max_tries=budget,
        interval=0,
        jitter=None,
        on_backoff=count,
        logger=_LOGGER,
        backoff_log_level=logging.DEBUG,
        giveup_log_level=logging.DEBUG,
    )(draw)
    try:
        return sampler(), rejections
    except _Rejected as err:
        raise GenerationExhausted(f"No {description} within {budget} draws", budget) from err


# Rationals


def _fraction(rng, low: int, high: int, denominator: int = 3) -> Fraction:
    q = int(rng.integers(1, denominator + 1))
    return Fraction(int(rng.integers(low * q, high * q + 1)), q)


def _open_unit(rng, denominator: int = 8) -> Fraction:
    """A rational in (0, 1)."""
    q = int(rng.integers(2, denominator + 1))
    return Fraction(int(rng.integers(1, q)), q)


def _choice(rng, items):
    return items[int(rng.integers(0, len(items)))]


def circle_point(t: Fraction) -> tuple[Fraction, Fraction]:
    """Rational point of the unit circle."""
    return ((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))


def sphere_point(u: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Inverse stereographic projection of a rational point."""
    square = sum((c * c for c in u), Fraction(0))
    return tuple(2 * c / (square + 1) for c in u) + ((square - 1) / (square + 1),)


# Spaces


def random_polygon(rng, pairs: Optional[int] = None) -> PolyhedralSpace:
    """Sheared and stretched rational points of the circle, symmetrized."""
    pairs = pairs or int(rng.integers(2, 5))
    params: set[Fraction] = set()
    while len(params) < pairs:
        q = int(rng.integers(2, 8))
        params.add(Fraction(int(rng.integers(-q + 1, q)), q))
    shear = _fraction(rng, -1, 1)
    stretch = Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    points = []
    for t in sorted(params):
        x, y = circle_point(t)
        points.append((x + shear * y, stretch * y))
    return validate_polyhedral(points + [negate(p) for p in points])


def random_polytope(rng, dim: int) -> PolyhedralSpace:
    """Symmetric polytope with rational vertices on the unit sphere."""
    if dim == 2:
        return random_polygon(rng)
    count = dim + int(rng.integers(0, 2))
    points: set[tuple] = set()
    while True:
        while len(points) < count:
            point = sphere_point(tuple(_fraction(rng, -2, 2) for _ in range(dim - 1)))
            if negate(point) not in points:
                points.add(point)
        if bareiss_rank(sorted(points)) == dim:
            break
        count += 1
    ordered = sorted(points)
    return validate_polyhedral(ordered + [negate(p) for p in ordered])


def random_polyhedral_space(rng, dim: int) -> PolyhedralSpace:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return linf_space(dim)
    if kind == 1:
        return l1_space(dim)
    return random_polytope(rng, dim)


def facet_vertices(space: PolyhedralSpace, functional) -> list[tuple]:
    return [v for v in space.vertices if dot(functional, v) == 1]


def smooth_point(rng, space: PolyhedralSpace, functional=None) -> tuple:
    """Point in the relative interior of a facet."""
    functional = functional if functional is not None else _choice(rng, space.facets)
    corners = facet_vertices(space, functional)
    weights = [Fraction(int(rng.integers(1, 5))) for _ in corners]
    total = sum(weights)
    return tuple(sum(w * c[i] for w, c in zip(weights, corners)) / total for i in range(space.dim))


def boundary_point(rng, space: Space) -> tuple:
    """Vertex or facet-interior point of a polyhedral sphere, or a rational point of a Euclidean one."""
    if isinstance(space, EuclideanSpace):
        return euclidean_point(rng, space.dim)
    if rng.random() < 0.5:
        return _choice(rng, space.vertices)
    return smooth_point(rng, space)


def euclidean_point(rng, dim: int) -> tuple:
    if dim == 1:
        return (Fraction(_choice(rng, (-1, 1))),)
    if dim == 2:
        q = int(rng.integers(2, 9))
        return circle_point(Fraction(int(rng.integers(-3 * q, 3 * q + 1)), q))
    return sphere_point(tuple(_fraction(rng, -2, 2) for _ in range(dim - 1)))


def adjacent_vertex(rng, space: PolyhedralSpace, vertex: tuple) -> tuple:
    """Other endpoint of an edge of a polygon through ``vertex``."""
    active = [f for f in space.facets if dot(f, vertex) == 1]
    edge = facet_vertices(space, _choice(rng, active))
    return next(v for v in edge if v != vertex)


def random_matrix(rng, rows: int, cols: int) -> tuple[tuple[Fraction, ...], ...]:
    while True:
        matrix = tuple(tuple(_fraction(rng, -2, 2) for _ in range(cols)) for _ in range(rows))
        if any(v for row in matrix for v in row):
            return matrix


def normalized(operator: Operator) -> Operator:
    """T/|T|, exact."""
    value = norm_attainment_ext(operator).norm_value
    if not isinstance(value, Fraction):
        raise _Rejected("irrational norm")
    return operator.scaled(1 / value)


def _codomain(rng, family: str, dim: int = 2) -> Space:
    if family == "euclidean":
        return EuclideanSpace(dim)
    if family == "linf":
        return linf_space(dim)
    if family == "l1":
        return l1_space(dim)
    if family == "polytope":
        return random_polyhedral_space(rng, dim)
    return random_polygon(rng)


# l_inf^3 into a plane


def _signed_permutation(rng) -> list[list[Fraction]]:
    perm = rng.permutation(3)
    signs = [_choice(rng, (-1, 1)) for _ in range(3)]
    return [[Fraction(signs[i]) if j == perm[i] else Fraction(0) for j in range(3)] for i in range(3)]


def operator_from_images(images: tuple, codomain: Space, rng=None) -> Operator:
    """T with T x_k = y_k on the first three canonical cube vertices.

    T x_4 is then y_1 - y_2 + y_3. A signed permutation of the cube
    coordinates is applied when ``rng`` is given.
    """
    basis = [[LINF3_LABELS[k][i] for k in range(3)] for i in range(3)]
    values = [[images[k][i] for k in range(3)] for i in range(codomain.dim)]
    matrix = matmul(values, inverse(basis))
    if rng is not None:
        matrix = matmul(matrix, _signed_permutation(rng))
    return Operator(tuple(tuple(row) for row in matrix), linf_space(3), codomain)


def _polygon_images(rng, space: PolyhedralSpace, target: str) -> tuple:
    vertex = _choice(rng, space.vertices)
    if target == CASE_IV:
        other = _choice(rng, space.vertices)
        return (vertex, negate(other), negate(vertex))
    if target == CASE_III:
        if rng.random() < 0.5:
            return (vertex, vertex, smooth_point(rng, space))
        a = vertex
        b = adjacent_vertex(rng, space, a)
        t = _open_unit(rng)
        return (negate(b), a, tuple(ai + t * (bi - ai) for ai, bi in zip(a, b)))
    if target == CASE_II:
        w = adjacent_vertex(rng, space, negate(vertex))
        t3, t4 = _open_unit(rng) / 2, _open_unit(rng) / 2

        def edge(t):
            return tuple(-p + t * (wi + p) for p, wi in zip(vertex, w))

        return (vertex, edge(t3 + t4), edge(t3))
    if target == CASE_I_B:
        first = _choice(rng, space.facets)
        others = [f for f in space.facets if f != first and f != negate(first)]
        second = _choice(rng, others)
        y1, y2 = smooth_point(rng, space, first), smooth_point(rng, space, second)
        return (y1, y2, negate(y1))
    if target == CASE_I_A:
        if rng.random() < 0.5:
            point = smooth_point(rng, space)
            return (point, negate(point), negate(point))
        facet = _choice(rng, space.facets)
        y1, y2 = smooth_point(rng, space, facet), smooth_point(rng, space, facet)
        return (y1, y2, negate(y1))
    return _reduced_images(rng, space)


def _euclidean_images(rng, space: EuclideanSpace, target: str) -> tuple:
    u = euclidean_point(rng, 2)
    if target == CASE_I_A:
        return (u, negate(u), negate(u))
    if target == CASE_I_B:
        v = euclidean_point(rng, 2)
        if v == u or v == negate(u):
            raise _Rejected("parallel images")
        return (u, v, negate(u))
    if target == CASE_REDUCED:
        return _reduced_images(rng, space)
    raise ValidationError(f"Case {target} needs non-smooth points, unavailable in a Euclidean plane")


def _reduced_images(rng, space: Space) -> tuple:
    images = tuple(boundary_point(rng, space) for _ in range(3))
    fourth = tuple(a - b + c for a, b, c in zip(*images))
    if isinstance(space, EuclideanSpace):
        short = sum((c * c for c in fourth), Fraction(0)) < 1
    else:
        short = norm(space, fourth) < 1
    if not short:
        raise _Rejected("fourth image on the sphere")
    return images


def _build_linf3_case(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    euclidean = config.codomain_family == "euclidean"
    target = config.target or _choice(rng, EUCLIDEAN_TARGETS if euclidean else LINF3_TARGETS)
    if target not in LINF3_TARGETS:
        raise ValidationError(f"Unknown case {target}")
    codomain = _codomain(rng, config.codomain_family)
    if isinstance(codomain, EuclideanSpace):
        images = _euclidean_images(rng, codomain, target)
    else:
        images = _polygon_images(rng, codomain, target)
    operator = operator_from_images(images, codomain, rng)
    return operator, None, {"target": target, "codomain": codomain.label}


def _build_random_linf3(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    """Either a planted case or a normalized random matrix."""
    if rng.random() < 0.7:
        return _build_linf3_case(rng, config)
    codomain = _codomain(rng, config.codomain_family)
    operator = normalized(Operator(random_matrix(rng, 2, 3), linf_space(3), codomain))
    return operator, None, {"target": None, "codomain": codomain.label}


# Polyhedral pairs


def _build_polyhedral_pair(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    domain = random_polyhedral_space(rng, config.dim or int(rng.integers(2, 5)))
    codomain = random_polyhedral_space(rng, int(rng.integers(2, 5)))
    operator = Operator(random_matrix(rng, codomain.dim, domain.dim), domain, codomain)
    return operator, None, {"domain": domain.label, "codomain": codomain.label}


def _build_sum_rule(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    """Columns of an operator on l_1^n: r of them unit, the others shorter."""
    n = config.dim or int(rng.integers(2, 5))
    family = _choice(rng, ("polygon", "polytope", "linf", "l1", "euclidean"))
    codomain = _codomain(rng, family, int(rng.integers(2, 4)) if family != "polygon" else 2)
    r = int(rng.integers(1, n + 1))
    attaining = sorted(int(i) for i in rng.choice(n, size=r, replace=False))
    columns = []
    for i in range(n):
        point = boundary_point(rng, codomain)
        if i not in attaining:
            point = tuple(_open_unit(rng) * c for c in point)
        columns.append(point)
    if not any(any(c) for c in columns):
        raise _Rejected("zero operator")
    operator = Operator(transpose(columns), l1_space(n), codomain)
    expected = sum(point_smoothness(codomain, columns[i]) for i in attaining)
    return operator, None, {"attaining_columns": attaining, "expected": expected}


def _build_mr_rule(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    """Rank-one u (x) phi with u a vertex and phi peaking on a face of B_X."""
    domain = random_polyhedral_space(rng, config.dim or int(rng.integers(2, 4)))
    codomain = _codomain(rng, _choice(rng, ("polygon", "polytope", "linf", "l1")), int(rng.integers(2, 4)))
    u = _choice(rng, codomain.vertices)
    vertex = _choice(rng, domain.vertices)
    active = [f for f in domain.facets if dot(f, vertex) == 1]
    chosen = [f for f in active if rng.random() < 0.5] or [active[0]]
    weights = [Fraction(int(rng.integers(1, 4))) for _ in chosen]
    total = sum(weights)
    phi = tuple(sum(w * f[j] for w, f in zip(weights, chosen)) / total for j in range(domain.dim))
    matrix = tuple(tuple(ui * pj for pj in phi) for ui in u)
    operator = Operator(matrix, domain, codomain)
    return operator, None, {"m": codomain.dim, "face_facets": len(chosen)}


def _build_linf_codomain(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    domain = random_polyhedral_space(rng, int(rng.integers(2, 4)))
    codomain = linf_space(config.dim or int(rng.integers(2, 5)))
    operator = Operator(random_matrix(rng, codomain.dim, domain.dim), domain, codomain)
    return operator, None, {"domain": domain.label}


def random_pair(rng, dim: int) -> tuple[Operator, Operator]:
    """Two small integer operators on l_inf^dim."""
    space = linf_space(dim)

    def draw():
        return tuple(tuple(Fraction(int(rng.integers(-2, 3))) for _ in range(dim)) for _ in range(dim))

    first = draw()
    while not any(v for row in first for v in row):
        first = draw()
    return Operator(first, space, space), Operator(draw(), space, space)


def _build_bj_polyhedral(rng, config: InstanceConfig) -> tuple[Operator, Operator, dict]:
    dim = config.dim or int(rng.integers(2, 4))
    operator, other = random_pair(rng, dim)
    return operator, other, {"dim": dim}


# Euclidean


def random_unitary(rng, dim: int, scalar_field: Field) -> np.ndarray:
    sample = rng.standard_normal((dim, dim))
    if scalar_field is Field.COMPLEX:
        sample = sample + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(sample)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def planted_operator(rng, dim: int, multiplicity: int, scalar_field: Field = Field.REAL, ceiling: float = 0.9) -> Operator:
    """U diag(1,...,1, s...) V^H with the lower singular values below ``ceiling``."""
    if not 1 <= multiplicity < dim:
        raise ValidationError(f"Multiplicity {multiplicity} must lie in [1, {dim - 1}]")
    values = np.concatenate([np.ones(multiplicity), rng.uniform(0.0, ceiling, dim - multiplicity)])
    left, right = random_unitary(rng, dim, scalar_field), random_unitary(rng, dim, scalar_field)
    array = left @ np.diag(values) @ right.conj().T
    convert = complex if scalar_field is Field.COMPLEX else float
    space = EuclideanSpace(dim, scalar_field)
    matrix = tuple(tuple(convert(v) for v in row) for row in array)
    return Operator(matrix, space, space)


def _build_planted_svd(rng, config: InstanceConfig) -> tuple[Operator, None, dict]:
    dim = config.dim or 6
    multiplicity = config.multiplicity or int(rng.integers(1, min(4, dim - 1) + 1))
    operator = planted_operator(rng, dim, multiplicity, config.field)
    return operator, None, {"multiplicity": multiplicity}


def _build_bj_hilbert(rng, config: InstanceConfig) -> tuple[Operator, Operator, dict]:
    """A' = A - cT moves the range of <A'x, Tx> on H0 to contain 0 or to miss it."""
    dim = config.dim or int(rng.integers(2, 6))
    multiplicity = config.multiplicity or int(rng.integers(1, min(3, dim - 1) + 1))
    operator = planted_operator(rng, dim, multiplicity)
    structure = top_singular_subspace(operator)
    noise = rng.standard_normal((dim, dim))
    raw = Operator(tuple(tuple(float(v) for v in row) for row in noise), operator.domain, operator.codomain)
    form = restricted_form(operator, raw, structure).real
    low, high = np.linalg.eigvalsh((form + form.T) / 2)[[0, -1]]
    sigma_sq = structure.sigma_max**2
    wanted = config.target if config.target is not None else _choice(rng, ("orthogonal", "not-orthogonal"))
    if wanted == "orthogonal":
        margin = (high - low) / 2
        if multiplicity > 1 and margin < 1e-3:
            raise _Rejected("degenerate range")
        shift = (low + high) / 2
    else:
        margin = float(rng.uniform(0.05, 0.5))
        shift = high + margin if rng.random() < 0.5 else low - margin
    other = raw.combined(operator, -shift / sigma_sq)
    return operator, other, {"expected": wanted == "orthogonal", "margin": float(margin)}


_BUILDERS = {
    "linf3-case": _build_linf3_case,
    "random-linf3": _build_random_linf3,
    "polyhedral-pair": _build_polyhedral_pair,
    "sum-rule": _build_sum_rule,
    "mr-rule": _build_mr_rule,
    "linf-codomain": _build_linf_codomain,
    "bj-polyhedral": _build_bj_polyhedral,
    "planted-svd": _build_planted_svd,
    "bj-hilbert": _build_bj_hilbert,
}


def random_instance(seed: int, config: InstanceConfig) -> GeneratedInstance:
    """Deterministic instance for ``seed``; rejected draws are retried."""
    if config.family not in _BUILDERS:
        raise ValidationError(f"Unknown instance family {config.family}; known: {', '.join(FAMILIES)}")
    rng = np.random.default_rng(seed)
    builder = _BUILDERS[config.family]
    (operator, other, details), rejections = _rejection_sample(
        lambda: builder(rng, config), config.budget, f"{config.family} instance for seed {seed}"
    )
    if rejections:
        _LOGGER.debug("Seed %s (%s): %s rejected draws", seed, config.family, rejections)
    return GeneratedInstance(seed, config.family, operator, other, details, rejections)
