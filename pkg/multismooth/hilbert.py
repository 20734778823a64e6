"""Smoothness and orthogonality of operators between Euclidean spaces.

For T with a strict gap below its top singular value, M_T is the unit
sphere of H0 (the top right-singular subspace), and Ext J(T) consists of
the functionals S -> <Sx, Tx> for unit x in H0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
from typing import Optional

import numpy as np

from .const import DEFAULT_GAP_TOL, DEFAULT_TOL, ORTHONORMAL_TOL, SAMPLE_FACTOR, SAMPLE_OFFSET
from .exceptions import NoGap, PropertyViolation, UnsupportedSpacePair, ValidationError, ZeroOperator
from .linalg import numeric_rank
from .operators import Operator, as_array, check_same_shape
from .spaces import EuclideanSpace, Field

_LOGGER = logging.getLogger(__name__)

ROTATION_GRID = 720


@dataclass(frozen=True, eq=False)
class SingularStructure:
    """Top singular value, its right-singular subspace and the gap below it."""

    sigma_max: float
    h0_basis: np.ndarray
    multiplicity: int
    gap: float
    singular_values: tuple[float, ...] = field(default=())


def _require_euclidean(operator: Operator) -> Field:
    domain, codomain = operator.domain, operator.codomain
    if not isinstance(domain, EuclideanSpace) or not isinstance(codomain, EuclideanSpace):
        raise UnsupportedSpacePair(f"{domain.label} -> {codomain.label} is not a pair of Euclidean spaces")
    if domain.field is not codomain.field:
        raise ValidationError("Domain and codomain must share their scalar field")
    return domain.field


def top_singular_subspace(operator: Operator, gap_tol: float = DEFAULT_GAP_TOL) -> SingularStructure:
    """SVD of T with the top singular value clustered at relative tolerance gap_tol.

    Raises NoGap when every singular value (zero-padded to the domain
    dimension) is in the top cluster.
    """
    _require_euclidean(operator)
    if operator.is_zero():
        raise ZeroOperator("The zero operator has no norm attainment structure")
    array = as_array(operator)
    _, singular, vh = np.linalg.svd(array)
    values = np.zeros(operator.domain.dim)
    values[: singular.size] = singular
    sigma = float(values[0])
    multiplicity = int(np.count_nonzero(values / sigma >= 1 - gap_tol))
    if multiplicity == operator.domain.dim:
        raise NoGap(
            f"All {multiplicity} singular values are within {gap_tol} of the norm; "
            "the restriction to the complement of H0 is not strictly smaller"
        )
    basis = vh[:multiplicity].conj().T
    _check_basis(array, basis, sigma, float(values[multiplicity - 1]))
    gap = sigma - float(values[multiplicity])
    _LOGGER.debug("sigma_max=%s multiplicity=%s gap=%s", sigma, multiplicity, gap)
    return SingularStructure(sigma, basis, multiplicity, gap, tuple(float(v) for v in values))


def _check_basis(array: np.ndarray, basis: np.ndarray, sigma: float, cluster_floor: float) -> None:
    """H0 basis is orthonormal and T maps it onto vectors of length sigma_max.

    Lengths may spread by the width of the top cluster on top of DEFAULT_TOL.
    """
    drift = float(np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1]))))
    if drift > ORTHONORMAL_TOL:
        raise PropertyViolation(f"H0 basis is off orthonormal by {drift:.3e}")
    lengths = np.linalg.norm(array @ basis, axis=0)
    worst = float(np.max(np.abs(lengths - sigma)))
    if worst > DEFAULT_TOL * max(1.0, sigma) + (sigma - cluster_floor):
        raise PropertyViolation(f"|Tx| misses sigma_max={sigma} by {worst:.3e} on the H0 basis")


def hilbert_smoothness(operator: Operator, gap_tol: float = DEFAULT_GAP_TOL) -> int:
    """n(n+1)/2 over the reals, n^2 over the complex numbers."""
    scalar_field = _require_euclidean(operator)
    n = top_singular_subspace(operator, gap_tol).multiplicity
    if scalar_field is Field.COMPLEX:
        return n * n
    return n * (n + 1) // 2


def minimum_sample_count(multiplicity: int) -> int:
    return SAMPLE_FACTOR * multiplicity * multiplicity + SAMPLE_OFFSET


def sampled_rank_oracle(
    operator: Operator,
    gap_tol: float = DEFAULT_GAP_TOL,
    sample_count: Optional[int] = None,
    seed: int = 0,
) -> int:
    """Numerical dimension of the span of sampled functionals S -> <Sx, Tx>.

    Each sample is a random unit x in H0, flattened as conj(Tx) x^T;
    the span is taken over the scalar field of the spaces.
    """
    scalar_field = _require_euclidean(operator)
    structure = top_singular_subspace(operator, gap_tol)
    n = structure.multiplicity
    minimum = minimum_sample_count(n)
    count = minimum if sample_count is None else sample_count
    if count < minimum:
        raise ValidationError(f"At least {minimum} samples are needed for multiplicity {n}, got {count}")

    rng = np.random.default_rng(seed)
    normalized = as_array(operator) / structure.sigma_max
    rows = []
    for _ in range(count):
        coefficients = rng.standard_normal(n)
        if scalar_field is Field.COMPLEX:
            coefficients = coefficients + 1j * rng.standard_normal(n)
        x = structure.h0_basis @ coefficients
        x = x / np.linalg.norm(x)
        rows.append(np.outer(np.conj(normalized @ x), x).ravel())
    rank = numeric_rank(np.array(rows))
    _LOGGER.debug("Sampled rank %s from %s samples (seed %s)", rank, count, seed)
    return rank


def restricted_form(operator: Operator, other: Operator, structure: SingularStructure) -> np.ndarray:
    """Matrix G of x -> <Ax, Tx> in the H0 basis: <Ax, Tx> = c^H G c."""
    basis = structure.h0_basis
    return basis.conj().T @ as_array(operator).conj().T @ as_array(other) @ basis


def bj_orthogonal_hilbert(
    operator: Operator,
    other: Operator,
    gap_tol: float = DEFAULT_GAP_TOL,
    tol: float = DEFAULT_TOL,
) -> bool:
    """T _|_ A iff 0 lies in W = {<Ax, Tx> : x unit in H0}."""
    check_same_shape(operator, other)
    scalar_field = _require_euclidean(operator)
    structure = top_singular_subspace(operator, gap_tol)
    form = restricted_form(operator, other, structure)
    threshold = tol * max(1.0, float(np.linalg.norm(form, 2)))

    if scalar_field is Field.REAL:
        eigenvalues = np.linalg.eigvalsh((form.real + form.real.T) / 2)
        _LOGGER.debug("Range of <Ax, Tx> on H0: [%s, %s]", eigenvalues[0], eigenvalues[-1])
        return bool(eigenvalues[0] <= threshold and eigenvalues[-1] >= -threshold)
    return _origin_in_numerical_range(form, threshold)


def _rotated_minimum(form: np.ndarray, theta: float) -> tuple[float, np.ndarray]:
    rotated = np.exp(1j * theta) * form
    hermitian = (rotated + rotated.conj().T) / 2
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)
    return float(eigenvalues[0]), eigenvectors[:, 0]


def _origin_in_numerical_range(form: np.ndarray, threshold: float) -> bool:
    """0 is outside W(G) iff some rotation makes Re(e^{it} G) positive definite."""
    thetas = np.linspace(0.0, 2 * math.pi, ROTATION_GRID, endpoint=False)
    boundary = []
    best = -math.inf
    for theta in thetas:
        lowest, vector = _rotated_minimum(form, theta)
        best = max(best, lowest)
        boundary.append(complex(vector.conj() @ form @ vector))
    if _origin_in_hull(boundary, threshold):
        return True
    _LOGGER.debug("Largest rotated minimum %s", best)
    return best <= threshold


def _origin_in_hull(points: list[complex], threshold: float) -> bool:
    """Planar test: the origin is in the hull when no half-plane gap exceeds pi."""
    if any(abs(p) <= threshold for p in points):
        return True
    angles = sorted(math.atan2(p.imag, p.real) for p in points)
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2 * math.pi - angles[-1])
    return max(gaps) < math.pi
