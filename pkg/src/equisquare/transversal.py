"""Transversals, permutations and sub-permutations of a square.

A permutation is stored as ``map`` with ``map[i]`` the column used in row i.
The diagonal is the identity map.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .square import Square


class OutOfRange(IndexError):
    pass


class Cell(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class Transversal:
    cells: tuple[Cell, ...]  # ascending row order

    @classmethod
    def of(cls, cells: Iterable) -> "Transversal":
        return cls(tuple(sorted(Cell(int(r), int(c)) for r, c in cells)))

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class Permutation:
    map: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def cells(self) -> list[Cell]:
        return [Cell(i, c) for i, c in enumerate(self.map)]

    def is_valid(self) -> bool:
        return sorted(self.map) == list(range(len(self.map)))


@dataclass(frozen=True)
class SubPermutation:
    index: tuple[int, ...]  # sorted
    cells: tuple[Cell, ...]  # one per row of ``index``, sorted by row

    @classmethod
    def empty(cls) -> "SubPermutation":
        return cls((), ())

    @classmethod
    def of(cls, index: Iterable[int], cells: Iterable) -> "SubPermutation":
        return cls(tuple(sorted(int(i) for i in index)),
                   tuple(sorted(Cell(int(r), int(c)) for r, c in cells)))

    def is_valid(self) -> bool:
        rows = [c.row for c in self.cells]
        cols = sorted(c.col for c in self.cells)
        return (len(set(self.index)) == len(self.index)
                and rows == list(self.index) and cols == list(self.index))


@dataclass(frozen=True)
class Violation:
    kind: str  # "row-repeat", "col-repeat", "symbol-repeat" or "symbol-mismatch"
    first: Cell
    second: Cell | None = None

    def describe(self) -> str:
        if self.second is None:
            return f"{self.kind} at {tuple(self.first)}"
        return f"{self.kind} between {tuple(self.first)} and {tuple(self.second)}"


def symbols_of(sq: Square, cells: Iterable) -> list[int]:
    return [sq.cells[r, c] for r, c in cells]


def validate_transversal(sq: Square, cells: Iterable) -> Violation | None:
    """Return ``None`` if ``cells`` is a transversal, else the first violating pair.

    Cells are scanned sorted by (row, col); for each cell the earlier cells
    are checked in the same order, row before column before symbol.
    """
    ordered = sorted(Cell(int(r), int(c)) for r, c in cells)
    for cell in ordered:
        if not (0 <= cell.row < sq.n and 0 <= cell.col < sq.n):
            raise OutOfRange(f"cell {tuple(cell)} outside a {sq.n}x{sq.n} square")
    for k, b in enumerate(ordered):
        sb = sq.cells[b]
        for a in ordered[:k]:
            if a.row == b.row:
                return Violation("row-repeat", a, b)
            if a.col == b.col:
                return Violation("col-repeat", a, b)
            if sq.cells[a] == sb:
                return Violation("symbol-repeat", a, b)
    return None


def distinct_diagonal_count(sq: Square) -> int:
    return len(np.unique(sq.diagonal()))


def diagonal_transversal(sq: Square) -> Transversal:
    """One diagonal cell per distinct diagonal symbol, lowest row first."""
    seen = set()
    cells = []
    for i, s in enumerate(sq.diagonal().tolist()):
        if s not in seen:
            seen.add(s)
            cells.append(Cell(i, i))
    return Transversal(tuple(cells))


def extend(sq: Square, sub: SubPermutation) -> Permutation:
    mapping = list(range(sq.n))
    for r, c in sub.cells:
        mapping[r] = c
    return Permutation(tuple(mapping))


def verify_P1(sq: Square, sub: SubPermutation) -> bool:
    """Every diagonal symbol survives: it is in ``sub`` or on the diagonal outside its index set."""
    diag = sq.diagonal().tolist()
    inside = set(sub.index)
    kept = {diag[q] for q in range(sq.n) if q not in inside}
    kept.update(symbols_of(sq, sub.cells))
    return kept.issuperset(diag)


def verify_P2(sq: Square, sub: SubPermutation) -> bool:
    """``sub`` holds a symbol missing from the diagonal of the sub-square on its index set."""
    diag_sub = {sq.cells[i, i] for i in sub.index}
    return any(s not in diag_sub for s in symbols_of(sq, sub.cells))


class ColumnMap:
    """Maps columns of a relabeled square back to columns of the original.

    ``orig[:, cols[j]]`` is column j of the relabeled square.
    """

    __slots__ = ("cols",)

    def __init__(self, cols: Sequence[int]):
        self.cols = np.asarray(cols, dtype=np.int64)

    @classmethod
    def identity(cls, n: int) -> "ColumnMap":
        return cls(np.arange(n))

    def then(self, p: Permutation) -> "ColumnMap":
        return ColumnMap(self.cols[list(p.map)])

    def to_original(self, cell) -> Cell:
        r, c = cell
        return Cell(int(r), int(self.cols[c]))


def relabel_columns(sq: Square, p: Permutation, colmap: ColumnMap | None = None
                    ) -> tuple[Square, ColumnMap]:
    """Reorder columns so that the cells of ``p`` become the diagonal.

    ``colmap`` is the map already carried by ``sq``; the returned map composes
    it with this relabeling.
    """
    if colmap is None:
        colmap = ColumnMap.identity(sq.n)
    new = Square(sq.cells[:, list(p.map)], sq.symbols)
    return new, colmap.then(p)


# -- JSON certificates -------------------------------------------------------

def transversal_to_json(sq: Square, t: Transversal | Iterable) -> list[dict]:
    cells = t.cells if isinstance(t, Transversal) else sorted(Cell(*c) for c in t)
    return [{"row": r, "col": c, "symbol": sq.token(sq[r, c])} for r, c in cells]


def dump_transversal(sq: Square, t: Transversal) -> str:
    return json.dumps({"cells": transversal_to_json(sq, t)})


def load_transversal(text: str) -> list[tuple[Cell, str | None]]:
    """Cells from a certificate, with the claimed symbol token if present."""
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = obj.get("cells", obj.get("transversal"))
    if not isinstance(obj, list):
        raise ValueError('expected {"cells": [...]}')
    out = []
    for item in obj:
        sym = item.get("symbol")
        out.append((Cell(int(item["row"]), int(item["col"])), None if sym is None else str(sym)))
    return out


def check_certificate(sq: Square, entries: list[tuple[Cell, str | None]]) -> Violation | None:
    """Validate a loaded certificate, including any claimed symbols."""
    for cell, sym in sorted(entries):
        if not (0 <= cell.row < sq.n and 0 <= cell.col < sq.n):
            raise OutOfRange(f"cell {tuple(cell)} outside a {sq.n}x{sq.n} square")
        if sym is not None and sq.token(sq[cell]) != sym:
            return Violation("symbol-mismatch", cell)
    cells = [cell for cell, _ in entries]
    if len(set(cells)) != len(cells):
        dup = sorted(c for c in cells if cells.count(c) > 1)
        return Violation("row-repeat", dup[0], dup[1])
    return validate_transversal(sq, cells)
