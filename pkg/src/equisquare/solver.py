"""Outer improvement loop: grow the rainbow part of the diagonal one symbol at a time."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .augment import AugmentParams, InvariantViolation, RoundStats, run_attempt
from .square import Square, as_fraction, compute_profile
from .transversal import (
    ColumnMap,
    Transversal,
    diagonal_transversal,
    distinct_diagonal_count,
    extend,
    relabel_columns,
    transversal_to_json,
    validate_transversal,
)


@dataclass(frozen=True)
class SolverParams:
    epsilon: float | Fraction = 0.25
    mode: str = "practical"
    max_improvements: int | None = None  # defaults to n
    debug_asserts: bool = False

    def __post_init__(self):
        if not 0 < as_fraction(self.epsilon) < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.mode not in ("paper", "practical"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SolveResult:
    n: int
    transversal: Transversal
    target: Fraction
    beta: Fraction
    epsilon: float | Fraction
    mode: str
    improvements: int = 0
    rounds_total: int = 0
    per_round: list[RoundStats] = field(default_factory=list)
    attempt_rounds: list[int] = field(default_factory=list)
    diagonal_counts: list[int] = field(default_factory=list)
    reached_target: bool = False
    stalled: bool = False
    checks: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.transversal)

    def to_dict(self, sq: Square) -> dict:
        return {
            "n": self.n,
            "beta": float(self.beta),
            "epsilon": float(self.epsilon),
            "mode": self.mode,
            "size": self.size,
            "target": float(self.target),
            "reached_target": self.reached_target,
            "stalled": self.stalled,
            "improvements": self.improvements,
            "rounds_total": self.rounds_total,
            "transversal": transversal_to_json(sq, self.transversal),
        }

    def to_json(self, sq: Square) -> str:
        return json.dumps(self.to_dict(sq), indent=2) + "\n"


def target_size(n: int, beta, epsilon) -> Fraction:
    """(1 - beta/4 - epsilon) * n, never below 1."""
    value = (1 - as_fraction(beta) / 4 - as_fraction(epsilon)) * n
    return max(Fraction(1), value)


def params_from(epsilon, beta, mode: str = "practical") -> AugmentParams:
    tau = math.ceil(12 / (as_fraction(epsilon) * as_fraction(beta)))
    return AugmentParams(tau=tau, C=4 ** tau, mode=mode)


def solve(sq: Square, params: SolverParams | None = None) -> SolveResult:
    params = params or SolverParams()
    n = sq.n
    beta = compute_profile(sq).beta
    target = target_size(n, beta, params.epsilon)
    aparams = params_from(params.epsilon, beta, params.mode)
    cap = n if params.max_improvements is None else params.max_improvements
    debug = params.debug_asserts

    work, colmap = sq, ColumnMap.identity(n)
    count = distinct_diagonal_count(work)
    res = SolveResult(n=n, transversal=Transversal(()), target=target, beta=beta,
                      epsilon=params.epsilon, mode=params.mode, diagonal_counts=[count])
    checks: dict = {}
    while count < n:
        if params.mode == "paper" and count >= target:
            break
        if res.improvements >= cap:
            if debug:
                raise InvariantViolation(f"hit the improvement cap {cap}")
            break
        att = run_attempt(work, aparams, debug)
        res.per_round.extend(att.rounds)
        res.attempt_rounds.append(len(att.rounds))
        res.rounds_total += len(att.rounds)
        if att.state is not None:
            for k, v in att.state.checks.items():
                checks[k] = checks.get(k, 0) + v
        if att.sub is None:
            res.stalled = True
            break
        work, colmap = relabel_columns(work, extend(work, att.sub), colmap)
        new_count = distinct_diagonal_count(work)
        if new_count <= count:
            raise InvariantViolation(f"diagonal did not grow: {count} -> {new_count}")
        count = new_count
        res.diagonal_counts.append(count)
        res.improvements += 1

    res.transversal = Transversal.of(colmap.to_original(c) for c in diagonal_transversal(work).cells)
    res.reached_target = res.size >= target
    res.checks = checks
    if debug:
        bad = validate_transversal(sq, res.transversal.cells)
        if bad is not None:
            raise InvariantViolation(f"result is not a transversal: {bad.describe()}")
    return res
