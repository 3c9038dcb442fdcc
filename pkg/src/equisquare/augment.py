"""One improvement attempt on the diagonal of a square.

Symbols repeated on the diagonal seed round 0.  Each later round t scans
index pairs {i, j} whose diagonal symbols were tagged in earlier rounds,
and accepts a maximal set of disjoint triples (omega, i, j) where swapping
(i, i), (j, j) for (i, j), (j, i) brings in a fresh copy of omega.  Every
tagged omega carries an index set I(omega) and a sub-permutation S(omega) on
it that keeps all diagonal symbols and adds omega.  The attempt succeeds as
soon as an insertable symbol is missing from the whole diagonal.

Blocking sets: R(i) is supp(A[i,i]) when that support has at most C indices
and {i} otherwise.  These sets partition the indices, so each one is named by
a block id and R(I(omega)) is cached as a boolean row over block ids.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .square import Square
from .transversal import Cell, SubPermutation, symbols_of, verify_P1


class InvariantViolation(AssertionError):
    """Internal consistency check failed.  Always a bug, never bad input."""


@dataclass(frozen=True)
class AugmentParams:
    tau: int
    C: int
    mode: str = "practical"

    def __post_init__(self):
        if self.tau < 1 or self.C < 1:
            raise ValueError("tau and C must be at least 1")
        if self.mode not in ("paper", "practical"):
            raise ValueError(f"unknown mode {self.mode!r}")


class Triple(NamedTuple):
    omega: int
    i: int
    j: int


@dataclass
class RoundStats:
    t: int
    candidates_scanned: int
    y_size: int
    n_t: int
    m_t: int
    useless_pairs: int

    FIELDS = ("t", "candidates_scanned", "y_size", "n_t", "m_t", "useless_pairs")

    def row(self) -> list[int]:
        return [getattr(self, f) for f in self.FIELDS]


class AugmentState:
    """Bookkeeping for a single improvement attempt.

    ``tag[s]`` is the round in which symbol s joined, or -1.  Symbols with
    tag < t form Omega^{<t}.
    """

    def __init__(self, sq: Square, params: AugmentParams, debug: bool = False):
        n = sq.n
        self.sq = sq
        self.params = params
        self.debug = debug
        self.checks: Counter = Counter()
        self.C = min(params.C, n + 1)  # supports never exceed n
        self.t = 1
        self.diag = sq.diagonal().copy()
        self.supp_size = np.bincount(self.diag, minlength=sq.num_symbols)
        order = np.argsort(self.diag, kind="stable")
        self.supp: dict[int, tuple[int, ...]] = {}
        for s, start in zip(*np.unique(self.diag[order], return_index=True)):
            self.supp[int(s)] = tuple(sorted(order[start:start + self.supp_size[s]].tolist()))
        self.block = np.arange(n)
        for s, where in self.supp.items():
            if len(where) <= self.C:
                self.block[list(where)] = where[0]
        self.tag = np.full(sq.num_symbols, -1, dtype=np.int64)
        self.row_of = np.full(sq.num_symbols, -1, dtype=np.int64)
        self.rib = np.zeros((16, n), dtype=bool)
        self.nrows = 0
        self.I: dict[int, tuple[int, ...]] = {}
        self.S: dict[int, SubPermutation] = {}
        for s, where in self.supp.items():
            if len(where) >= 2:
                self._tag(s, 0, (), SubPermutation.empty(), None)

    def _tag(self, s, r, index, sub, ri_row):
        if self.nrows == len(self.rib):
            self.rib = np.vstack([self.rib, np.zeros_like(self.rib)])
        if ri_row is not None:
            self.rib[self.nrows] = ri_row
        self.row_of[s] = self.nrows
        self.nrows += 1
        self.tag[s] = r
        self.I[s] = index
        self.S[s] = sub

    # -- definitional views ----------------------------------------------

    def in_lt(self, s: int) -> bool:
        """s is in Omega^{<t}."""
        return 0 <= self.tag[s] < self.t

    def omega(self, r: int) -> list[int]:
        return np.flatnonzero(self.tag == r).tolist()

    def R(self, i: int) -> tuple[int, ...]:
        where = self.supp[int(self.diag[i])]
        return where if len(where) <= self.C else (i,)

    def RI(self, s: int) -> frozenset[int]:
        """R(I(s)) from the definition, as a union over I(s)."""
        out: set[int] = set()
        for q in self.I.get(s, ()):
            out.update(self.R(q))
        return frozenset(out)

    def RI_cached(self, s: int) -> frozenset[int]:
        row = self.row_of[s]
        if row < 0:
            return frozenset()
        return frozenset(np.flatnonzero(self.rib[row][self.block]).tolist())

    def support_of_lt(self) -> np.ndarray:
        """supp(Omega^{<t}) as a sorted index array."""
        tags = self.tag[self.diag]
        return np.flatnonzero((tags >= 0) & (tags < self.t))


def init_state(sq: Square, params: AugmentParams, debug: bool = False) -> AugmentState:
    return AugmentState(sq, params, debug)


def inserts(state: AugmentState, i: int, j: int) -> list[int]:
    """Symbols not yet in Omega^{<t} that the pair {i, j} inserts.

    Straight from the definition; the round scan in :func:`build_Yt` is
    vectorized and checked against this in debug mode.
    """
    if i == j:
        raise ValueError("pair needs two distinct indices")
    ai, aj = int(state.diag[i]), int(state.diag[j])
    if not (state.in_lt(ai) and state.in_lt(aj)):
        return []
    sets = [set(state.R(i)), set(state.R(j)), state.RI(ai), state.RI(aj)]
    for a in range(4):
        for b in range(a + 1, 4):
            if sets[a] & sets[b]:
                return []
    W = state.sq.cells
    out = []
    for w in (int(W[i, j]), int(W[j, i])):
        if not state.in_lt(w) and w not in out:
            out.append(w)
    return out


def is_winner(state: AugmentState, s: int) -> bool:
    return state.supp_size[s] == 0


def build_Yt(state: AugmentState, stop_at_winner: bool = True):
    """Greedy maximal set of disjoint triples for the current round.

    Pairs are taken in lexicographic (i, j) order; for each the first
    eligible omega (A[i,j] before A[j,i]) whose symbol and indices are unused
    is accepted.  With ``stop_at_winner`` the scan ends at the first pair
    offering a symbol absent from the diagonal, which is returned as the
    winner.  Returns ``(Y, winner, stats)``.
    """
    t = state.t
    P = state.support_of_lt()
    m = len(P)
    m_t = int(((state.tag >= 0) & (state.tag < t)).sum())
    if m < 2:
        return [], None, RoundStats(t, 0, 0, m, m_t, 0)

    iu, ju = np.triu_indices(m, 1)
    I, J = P[iu], P[ju]
    diag, block, tag = state.diag, state.block, state.tag
    ri, rj = state.row_of[diag[I]], state.row_of[diag[J]]
    bi, bj = block[I], block[J]
    rib = state.rib[:state.nrows]
    ribf = rib.astype(np.float32)
    overlap = (ribf @ ribf.T) > 0.5
    useless = ((bi == bj) | rib[ri, bi] | rib[rj, bj] | rib[ri, bj] | rib[rj, bi]
               | overlap[ri, rj])

    W = state.sq.cells
    a, b = W[I, J], W[J, I]
    ea = tag[a] < 0  # in this round every tagged symbol is in Omega^{<t}
    eb = (tag[b] < 0) & (b != a)
    cand = ~useless & (ea | eb)

    stop = len(I)
    winner = None
    if stop_at_winner:
        wins = cand & ((ea & (state.supp_size[a] == 0)) | (eb & (state.supp_size[b] == 0)))
        hits = np.flatnonzero(wins)
        if len(hits):
            p = int(hits[0])
            stop = p + 1
            w = int(a[p]) if ea[p] and state.supp_size[a[p]] == 0 else int(b[p])
            winner = Triple(w, int(I[p]), int(J[p]))

    used_idx = np.zeros(state.sq.n, dtype=bool)
    used_sym: set[int] = set()
    Y: list[Triple] = []
    pos = np.flatnonzero(cand[:stop])
    if winner is not None:
        pos = pos[:-1]
    for i, j, x, y, okx, oky in zip(I[pos].tolist(), J[pos].tolist(), a[pos].tolist(),
                                    b[pos].tolist(), ea[pos].tolist(), eb[pos].tolist()):
        if used_idx[i] or used_idx[j]:
            continue
        if okx and x not in used_sym:
            w = x
        elif oky and y not in used_sym:
            w = y
        else:
            continue
        used_idx[i] = used_idx[j] = True
        used_sym.add(w)
        Y.append(Triple(w, i, j))

    if winner is None and not stop_at_winner:
        winner = next((tr for tr in Y if is_winner(state, tr.omega)), None)

    stats = RoundStats(t, stop, len(Y), m, m_t, int(useless[:stop].sum()))
    if state.debug:
        _check_round(state, Y, winner)
    return Y, winner, stats


def compose(state: AugmentState, tr: Triple):
    """I(omega), S(omega) and the R(I(omega)) block row for a triple."""
    ai, aj = int(state.diag[tr.i]), int(state.diag[tr.j])
    index = tuple(sorted({tr.i, tr.j, *state.I[ai], *state.I[aj]}))
    cells = [*state.S[ai].cells, *state.S[aj].cells, Cell(tr.i, tr.j), Cell(tr.j, tr.i)]
    sub = SubPermutation(index, tuple(sorted(cells)))
    row = state.rib[state.row_of[ai]] | state.rib[state.row_of[aj]]
    row[state.block[tr.i]] = True
    row[state.block[tr.j]] = True
    return index, sub, row


def register_round(state: AugmentState, Y: list[Triple]) -> AugmentState:
    """Tag every omega in ``Y`` with the current round, then advance t."""
    built = [(tr, *compose(state, tr)) for tr in Y]
    for tr, index, sub, row in built:
        state._tag(tr.omega, state.t, index, sub, row)
    if state.debug:
        for tr, index, sub, _ in built:
            _check_member(state, tr.omega, state.t)
    state.t += 1
    if state.debug:
        report = check_counting_bounds(state)
        state.checks["counting"] += 1
        if not report.ok:
            raise InvariantViolation(f"counting bounds fail: {report}")
    return state


@dataclass
class Attempt:
    sub: SubPermutation | None
    winner: int | None
    rounds: list[RoundStats] = field(default_factory=list)
    state: AugmentState | None = None


def run_attempt(sq: Square, params: AugmentParams, debug: bool = False) -> Attempt:
    state = init_state(sq, params, debug)
    rounds = []
    while not (params.mode == "paper" and state.t > params.tau):
        Y, winner, stats = build_Yt(state)
        rounds.append(stats)
        if winner is not None:
            _, sub, _ = compose(state, winner)
            if not verify_P1(sq, sub) or winner.omega not in symbols_of(sq, sub.cells):
                raise InvariantViolation(f"winner {winner} does not improve the diagonal")
            return Attempt(sub, winner.omega, rounds, state)
        if not Y:
            break  # fixed point: every later round would be identical
        register_round(state, Y)
    return Attempt(None, None, rounds, state)


def improvement_round(sq: Square, params: AugmentParams, debug: bool = False):
    """``(sub, winner_symbol)`` for an improving sub-permutation, or ``None``."""
    att = run_attempt(sq, params, debug)
    return None if att.sub is None else (att.sub, att.winner)


@dataclass
class CountingReport:
    max_R: int
    bound_R: int
    max_RI_hits: int
    bound_RI_hits: int
    per_index_R: list[int]
    per_index_RI_hits: list[int]

    @property
    def ok(self) -> bool:
        return self.max_R <= self.bound_R and self.max_RI_hits <= self.bound_RI_hits


def check_counting_bounds(state: AugmentState) -> CountingReport:
    """Every |R(i)| <= C, and each i lies in R(I(A[j,j])) for at most 4^(t-1) C indices j
    with A[j,j] in Omega^{<t}."""
    n = state.sq.n
    sizes = np.bincount(state.block, minlength=n)[state.block]
    tags = state.tag[state.diag]
    js = np.flatnonzero((tags >= 0) & (tags < state.t))
    hits = np.zeros(n, dtype=np.int64)
    if len(js):
        rows = state.rib[state.row_of[state.diag[js]]]  # one row per j
        hits = rows[:, state.block].sum(axis=0)
    return CountingReport(
        max_R=int(sizes.max()), bound_R=state.C,
        max_RI_hits=int(hits.max()), bound_RI_hits=4 ** (state.t - 1) * state.C,
        per_index_R=sizes.tolist(), per_index_RI_hits=hits.tolist(),
    )


# -- debug checks ------------------------------------------------------------

def _fail(msg):
    raise InvariantViolation(msg)


def _check_round(state: AugmentState, Y: list[Triple], winner: Triple | None):
    seen_sym, seen_idx = set(), set()
    for tr in Y:
        ok = inserts(state, tr.i, tr.j)
        state.checks["insertion"] += 1
        if tr.omega not in ok:
            _fail(f"accepted triple {tr} is not an insertion")
        if tr.omega in seen_sym or {tr.i, tr.j} & seen_idx:
            _fail(f"triple {tr} overlaps an earlier triple")
        state.checks["disjoint"] += 1
        seen_sym.add(tr.omega)
        seen_idx.update((tr.i, tr.j))
    if winner is not None:
        state.checks["insertion"] += 1
        if winner.omega not in inserts(state, winner.i, winner.j) or not is_winner(state, winner.omega):
            _fail(f"winner {winner} is not an insertion of a missing symbol")


def _check_member(state: AugmentState, s: int, r: int):
    sq = state.sq
    index, sub = state.I[s], state.S[s]
    c = state.checks
    if len(index) > 4 ** r:
        _fail(f"|I({s})| = {len(index)} > 4^{r}")
    c["size"] += 1
    if not sub.is_valid() or sub.index != index:
        _fail(f"S({s}) is not a permutation of I({s})")
    c["subperm"] += 1
    if s not in symbols_of(sq, sub.cells):
        _fail(f"{s} missing from S({s})")
    c["contains-symbol"] += 1
    if not verify_P1(sq, sub):
        _fail(f"(I({s}), S({s})) loses a diagonal symbol")
    c["keeps-diagonal"] += 1
    if set(state.supp.get(s, ())) & set(index):
        _fail(f"supp({s}) meets I({s})")
    c["off-own-support"] += 1
    tags = state.tag[state.diag[list(index)]]
    if len(index) and not ((tags >= 0) & (tags < r)).all():
        _fail(f"I({s}) leaves supp(Omega^<{r})")
    c["inside-earlier-support"] += 1
    if state.RI(s) != state.RI_cached(s):
        _fail(f"cached R(I({s})) disagrees with its definition")
    c["RI-cache"] += 1
