"""Symbol-filled n x n arrays: interning, profiling, parsing and generators.

Symbols are arbitrary string tokens on the outside and dense integer ids
inside.  Ids are assigned in first-occurrence, row-major order so that
re-reading the same text always gives the same ids.

Generators are seeded through :class:`random.Random` (MT19937) and use its
``shuffle`` (Fisher-Yates driven by ``_randbelow``), whose output for a given
seed is stable across platforms.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class SquareFormatError(ValueError):
    pass


class RaggedRows(SquareFormatError):
    pass


class NotSquare(SquareFormatError):
    pass


class EmptySquare(SquareFormatError):
    pass


class MalformedSyntax(SquareFormatError):
    pass


class InfeasibleBeta(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats go through ``str`` so 0.05 stays 1/20."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class Square:
    """Immutable n x n grid of interned symbol ids."""

    __slots__ = ("n", "cells", "symbols", "counts", "_index")

    def __init__(self, cells: np.ndarray, symbols: Sequence[str]):
        cells = np.array(cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1] or cells.shape[0] == 0:
            raise NotSquare(f"cell grid has shape {cells.shape}")
        counts = np.bincount(cells.ravel(), minlength=len(symbols))
        if len(counts) != len(symbols) or cells.min() < 0:
            raise ValueError("cell holds a symbol id outside the symbol table")
        if (counts == 0).any():
            raise ValueError("symbol table holds a symbol that never occurs")
        cells.setflags(write=False)
        counts.setflags(write=False)
        self.n = int(cells.shape[0])
        self.cells = cells
        self.symbols = tuple(symbols)
        self.counts = counts
        self._index = {tok: k for k, tok in enumerate(self.symbols)}

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Square":
        """Intern a grid of tokens.  Tokens are converted with ``str``."""
        rows = [[str(tok) for tok in row] for row in rows]
        if not rows:
            raise EmptySquare("no rows")
        width = len(rows[0])
        for r, row in enumerate(rows):
            if len(row) != width:
                raise RaggedRows(f"row {r} has {len(row)} entries, row 0 has {width}")
        if width != len(rows):
            raise NotSquare(f"{len(rows)} rows but {width} columns")
        index: dict[str, int] = {}
        ids = [[index.setdefault(tok, len(index)) for tok in row] for row in rows]
        return cls(np.array(ids, dtype=np.int64), list(index))

    @property
    def num_symbols(self) -> int:
        return len(self.symbols)

    def symbol_id(self, token) -> int:
        return self._index[str(token)]

    def token(self, sid: int) -> str:
        return self.symbols[sid]

    def __getitem__(self, rc) -> int:
        r, c = rc
        return int(self.cells[r, c])

    def diagonal(self) -> np.ndarray:
        return self.cells.diagonal()

    def rows(self) -> list[list[str]]:
        return [[self.symbols[s] for s in row] for row in self.cells.tolist()]

    def __eq__(self, other):
        if not isinstance(other, Square):
            return NotImplemented
        return self.symbols == other.symbols and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.symbols, self.cells.tobytes()))

    def __repr__(self):
        return f"Square(n={self.n}, symbols={self.num_symbols})"


@dataclass(frozen=True)
class SquareProfile:
    beta: Fraction
    distinct_symbols: int
    is_equi: bool
    max_count: int


def compute_profile(sq: Square) -> SquareProfile:
    max_count = int(sq.counts.max())
    is_equi = sq.num_symbols == sq.n and bool((sq.counts == sq.n).all())
    return SquareProfile(
        beta=Fraction(max_count, sq.n),
        distinct_symbols=sq.num_symbols,
        is_equi=is_equi,
        max_count=max_count,
    )


# -- parsing / serialization -------------------------------------------------

def parse_square(text: str, format: str = "csv") -> Square:
    if format == "csv":
        try:
            rows = [[tok.strip() for tok in row] for row in csv.reader(io.StringIO(text))]
        except csv.Error as e:
            raise MalformedSyntax(str(e)) from e
        # blank lines (including a trailing newline) carry no row
        rows = [row for row in rows if row and not (len(row) == 1 and row[0] == "")]
        return Square.from_rows(rows)
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedSyntax(str(e)) from e
        if not isinstance(obj, dict) or not isinstance(obj.get("rows"), list):
            raise MalformedSyntax('expected an object with a "rows" list')
        rows = obj["rows"]
        if not all(isinstance(row, list) for row in rows):
            raise MalformedSyntax("every row must be a list")
        sq = Square.from_rows(rows)
        if "n" in obj and obj["n"] != sq.n:
            raise MalformedSyntax(f'"n" is {obj["n"]} but there are {sq.n} rows')
        return sq
    raise ValueError(f"unknown square format {format!r}")


def serialize_square(sq: Square, format: str = "csv") -> str:
    if format == "csv":
        return "".join(",".join(row) + "\n" for row in sq.rows())
    if format == "json":
        return json.dumps({"n": sq.n, "rows": sq.rows()})
    raise ValueError(f"unknown square format {format!r}")


def read_square(path, format: str | None = None) -> Square:
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "csv"
    with open(path) as f:
        return parse_square(f.read(), format)


def write_square(sq: Square, path, format: str | None = None) -> None:
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "csv"
    with open(path, "w") as f:
        f.write(serialize_square(sq, format))


# -- generators --------------------------------------------------------------

def gen_cyclic_latin(n: int) -> Square:
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(n)
    return Square.from_rows((idx[:, None] + idx[None, :]) % n)


def _shuffled_square(n: int, labels: list[int], seed: int) -> Square:
    random.Random(seed).shuffle(labels)
    return Square.from_rows(labels[r * n:(r + 1) * n] for r in range(n))


def gen_random_equi(n: int, seed: int) -> Square:
    """n symbols, each exactly n times, placed by a seeded shuffle of the n^2 cells."""
    if n < 1:
        raise ValueError("n must be positive")
    return _shuffled_square(n, [s for s in range(n) for _ in range(n)], seed)


def gen_random_bounded(n: int, beta, seed: int) -> Square:
    """Fill with floor(beta*n) copies of fresh symbols in turn, then shuffle."""
    if n < 1:
        raise ValueError("n must be positive")
    per_symbol = int(as_fraction(beta) * n)  # floor, beta > 0
    if per_symbol <= 0:
        raise InfeasibleBeta(f"floor(beta*n) = 0 for beta={beta}, n={n}")
    labels = [k // per_symbol for k in range(n * n)]
    return _shuffled_square(n, labels, seed)
