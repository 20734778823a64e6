"""Constants for multismooth."""
from __future__ import annotations

import os
from typing import Final

ENV_SCOPE_MAX_DIM = "SMOOTH_SCOPE_MAX_DIM"
DEFAULT_SCOPE_MAX_DIM = 4
SCOPE_MAX_VERTICES = 64

# Tolerances (float paths only, exact paths never use them)
DEFAULT_TOL = 1e-9  # unit-norm checks and attainment in approx mode
DEFAULT_GAP_TOL = 1e-8  # clustering of singular values
RANK_RTOL = 1e-8  # relative singular-value threshold for numerical rank
BJ_ORACLE_TOL = 1e-7
ORTHONORMAL_TOL = 1e-10

# Exact simplex problem size
LP_MAX_UNKNOWNS = 16
LP_MAX_CONSTRAINTS = 512

# Modular rank cross-checks
LARGE_PRIMES: Final[tuple[int, ...]] = (
    2305843009213693951,
    4611686018427387847,
    9223372036854775783,
    1000000000000000003,
    998244353,
    4294967291,
)

# Constantes pour la generation d'instances
GENERATION_BUDGET = 200  # tirages maximum par instance
MAX_CONSECUTIVE_FAILURES = 3
SAMPLE_FACTOR = 4  # sampled_rank_oracle draws SAMPLE_FACTOR * n^2 + SAMPLE_OFFSET
SAMPLE_OFFSET = 8

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2

CASE_I_A = "I(a)"
CASE_I_B = "I(b)"
CASE_II = "II"
CASE_III = "III"
CASE_IV = "IV"
CASE_REDUCED = "reduced"
CASE_LABELS: Final[tuple[str, ...]] = (CASE_I_A, CASE_I_B, CASE_II, CASE_III, CASE_IV)
CASE_ORDERS: Final[dict[str, int]] = {
    CASE_I_A: 3,
    CASE_I_B: 4,
    CASE_II: 4,
    CASE_III: 5,
    CASE_IV: 6,
}


def scope_max_dim() -> int:
    """Return the dimension bound, honouring the environment override."""
    raw = os.environ.get(ENV_SCOPE_MAX_DIM)
    if not raw:
        return DEFAULT_SCOPE_MAX_DIM
    try:
        return max(1, int(raw))
    except ValueError:
        return DEFAULT_SCOPE_MAX_DIM
