"""Oracles, lemma checks and the constraint system behind the approximation factor."""

from .constraints import (
    LN4,
    PUBLISHED_ALPHA,
    PUBLISHED_BETA,
    PUBLISHED_WEIGHTS,
    TABLE2,
    AlphaWitness,
    ConstraintError,
    ConstraintSystem,
    coefficient_matrix,
    feasible,
    is_feasible_alpha,
    min_alpha,
    published_system,
    raw_signs,
    sign_mismatches,
    sign_table,
)
from .decomposition import (
    DecompStats,
    FingerprintMismatch,
    check_lemmas,
    classify,
    decompose,
    root_edge_violations,
)
from .oracles import ORACLE_MAX_VERTICES, OracleCapacityError, oracle_pcst, oracle_steiner_cost

__all__ = [
    "LN4", "TABLE2", "AlphaWitness", "ConstraintError", "ConstraintSystem", "feasible", "min_alpha",
    "published_system", "sign_mismatches", "sign_table", "DecompStats", "FingerprintMismatch",
    "check_lemmas", "classify", "decompose", "root_edge_violations", "OracleCapacityError",
    "oracle_pcst", "oracle_steiner_cost", "ORACLE_MAX_VERTICES", "PUBLISHED_ALPHA", "PUBLISHED_BETA",
    "PUBLISHED_WEIGHTS", "is_feasible_alpha", "coefficient_matrix", "raw_signs",
]
