"""Exact maximum transversal by branch and bound, plus a greedy baseline."""
from __future__ import annotations

from dataclasses import dataclass

from .square import Square
from .transversal import Cell, Transversal


@dataclass
class OracleResult:
    max_size: int
    witness: Transversal
    nodes_explored: int
    exhausted: bool = False  # budget ran out; max_size is only a lower bound


def max_transversal_exact(sq: Square, node_budget: int | None = None) -> OracleResult:
    """Depth-first over rows.  Each row either takes an unused column with an
    unused symbol (ascending column order) or is skipped (tried last).  A branch
    is cut when its size plus the remaining rows cannot beat the best so far.
    """
    n = sq.n
    grid = sq.cells.tolist()
    used_col = [False] * n
    used_sym = set()
    chosen: list[Cell] = []
    best: list[Cell] = []
    nodes = 0
    exhausted = False

    def dfs(row):
        nonlocal best, nodes, exhausted
        if len(best) == n or exhausted:
            return
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            exhausted = True
            return
        if row == n:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + (n - row) <= len(best):
            return
        cells = grid[row]
        for col in range(n):
            s = cells[col]
            if used_col[col] or s in used_sym:
                continue
            used_col[col] = True
            used_sym.add(s)
            chosen.append(Cell(row, col))
            dfs(row + 1)
            chosen.pop()
            used_sym.discard(s)
            used_col[col] = False
        dfs(row + 1)

    dfs(0)
    return OracleResult(len(best), Transversal(tuple(best)), nodes, exhausted)


def greedy_baseline(sq: Square) -> Transversal:
    """Row-major scan keeping every cell whose row, column and symbol are still free."""
    used_col, used_sym = set(), set()
    cells = []
    for r, row in enumerate(sq.cells.tolist()):
        for c, s in enumerate(row):
            if c not in used_col and s not in used_sym:
                used_col.add(c)
                used_sym.add(s)
                cells.append(Cell(r, c))
                break
    return Transversal(tuple(cells))
