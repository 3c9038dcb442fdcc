"""Large transversals in symbol-filled squares by diagonal augmentation."""
from .augment import AugmentParams, InvariantViolation, improvement_round
from .oracle import greedy_baseline, max_transversal_exact
from .solver import SolveResult, SolverParams, solve, target_size
from .square import (
    Square,
    compute_profile,
    gen_cyclic_latin,
    gen_random_bounded,
    gen_random_equi,
    parse_square,
    serialize_square,
)
from .transversal import diagonal_transversal, validate_transversal

__all__ = [
    "AugmentParams", "InvariantViolation", "improvement_round",
    "greedy_baseline", "max_transversal_exact",
    "SolveResult", "SolverParams", "solve", "target_size",
    "Square", "compute_profile", "gen_cyclic_latin", "gen_random_bounded", "gen_random_equi",
    "parse_square", "serialize_square",
    "diagonal_transversal", "validate_transversal",
]
