"""Latin squares, partial arrays and subsquare handles.

Symbols are 0-based throughout. Every container here is immutable, so the
objects can be shared freely between worker processes.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .errors import (
    ColumnDuplicate,
    NotASubsquare,
    ParseError,
    RowDuplicate,
    SymbolOutOfRange,
)

Grid = tuple[tuple[int, ...], ...]
_INT = re.compile(r"^(0|[1-9][0-9]*)$")


def _as_int(x):
    try:
        return operator.index(x)
    except TypeError:
        return x


def _check_grid(grid: Sequence[Sequence[Optional[int]]], n: int) -> None:
    # Row-major scan so the error names the first offending cell.
    seen_cols: list[set[int]] = [set() for _ in range(len(grid[0]) if grid else 0)]
    for r, row in enumerate(grid):
        seen_row: set[int] = set()
        for c, s in enumerate(row):
            if s is None:
                continue
            if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s < n:
                raise SymbolOutOfRange(r, c, s, n)
            if s in seen_row:
                raise RowDuplicate(r, c, s)
            if s in seen_cols[c]:
                raise ColumnDuplicate(r, c, s)
            seen_row.add(s)
            seen_cols[c].add(s)


@dataclass(frozen=True)
class LatinSquare:
    """An n x n array in which each row and column is a permutation of 0..n-1."""

    grid: Grid

    def __post_init__(self):
        grid = tuple(tuple(_as_int(x) for x in row) for row in self.grid)
        n = len(grid)
        if n == 0:
            raise ParseError("latin squares of order 0 are not supported")
        for r, row in enumerate(grid):
            if len(row) != n:
                raise ParseError(f"row {r} has {len(row)} entries, expected {n}")
        _check_grid(grid, n)
        object.__setattr__(self, "grid", grid)

    @property
    def order(self) -> int:
        return len(self.grid)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.grid[r][c]

    def rows(self) -> Grid:
        return self.grid

    def triples(self) -> Iterable[tuple[int, int, int]]:
        for r, row in enumerate(self.grid):
            for c, s in enumerate(row):
                yield r, c, s

    def permuted(self, row_perm=None, col_perm=None, sym_perm=None) -> "LatinSquare":
        """Apply an isotopy: row r moves to row_perm[r], and so on."""
        n = self.order
        rp = row_perm or range(n)
        cp = col_perm or range(n)
        sp = sym_perm or range(n)
        out = [[0] * n for _ in range(n)]
        for r, c, s in self.triples():
            out[rp[r]][cp[c]] = sp[s]
        return LatinSquare(out)

    def __str__(self) -> str:
        return format_square(self)


@dataclass(frozen=True)
class PartialArray:
    """An r x s array over symbols 0..n-1 with optional empty (None) cells."""

    cells: tuple[tuple[Optional[int], ...], ...]
    n: int

    def __post_init__(self):
        cells = tuple(tuple(row) for row in self.cells)
        r = len(cells)
        s = len(cells[0]) if r else 0
        if any(len(row) != s for row in cells):
            raise ParseError("partial array rows have unequal length")
        if self.n < 1:
            raise ParseError("symbol universe must be positive")
        if r > self.n or s > self.n:
            raise ParseError(f"{r}x{s} array does not fit in order {self.n}")
        _check_grid(cells, self.n)
        object.__setattr__(self, "cells", cells)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def is_filled(self) -> bool:
        return all(x is not None for row in self.cells for x in row)

    def filled_cells(self) -> Iterable[tuple[int, int, int]]:
        for r, row in enumerate(self.cells):
            for c, s in enumerate(row):
                if s is not None:
                    yield r, c, s


@dataclass(frozen=True)
class SubsquareHandle:
    rows: frozenset[int]
    cols: frozenset[int]
    symbols: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.rows)

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(self.rows)), tuple(sorted(self.cols))

    def contains_cell(self, r: int, c: int) -> bool:
        return r in self.rows and c in self.cols

    def describe(self) -> str:
        fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}"
        return f"order {self.order} rows {fmt(self.rows)} cols {fmt(self.cols)} symbols {fmt(self.symbols)}"


@dataclass(frozen=True)
class ConjugationPattern:
    """Permutation of the roles (row, column, symbol).

    The output triple at position k takes the input triple's entry at perm[k].
    """

    perm: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"{self.perm} is not a permutation of the three roles")

    @classmethod
    def all(cls) -> list["ConjugationPattern"]:
        return [cls(p) for p in permutations(range(3))]


IDENTITY = ConjugationPattern((0, 1, 2))
TRANSPOSE = ConjugationPattern((1, 0, 2))
ROW_SYMBOL = ConjugationPattern((2, 1, 0))
COL_SYMBOL = ConjugationPattern((0, 2, 1))


def validate(grid: Sequence[Sequence[int]]) -> LatinSquare:
    return LatinSquare(grid)


def conjugate(L: LatinSquare, p: ConjugationPattern) -> LatinSquare:
    n = L.order
    out = [[0] * n for _ in range(n)]
    for t in L.triples():
        r, c, s = (t[p.perm[0]], t[p.perm[1]], t[p.perm[2]])
        out[r][c] = s
    return LatinSquare(out)


def reduce(L: LatinSquare) -> LatinSquare:
    """Permute columns so row 0 is 0..n-1, then rows so column 0 is 0..n-1."""
    g = L.grid
    n = L.order
    col_perm = [0] * n
    for c, s in enumerate(g[0]):
        col_perm[c] = s
    step = L.permuted(col_perm=col_perm)
    row_perm = [step.grid[r][0] for r in range(n)]
    return step.permuted(row_perm=row_perm)


def is_reduced(L: LatinSquare) -> bool:
    n = L.order
    return all(L.grid[0][j] == j and L.grid[j][0] == j for j in range(n))


def extract_subsquare(L: LatinSquare, rows: Iterable[int], cols: Iterable[int]) -> SubsquareHandle:
    rows, cols = frozenset(rows), frozenset(cols)
    n = L.order
    if not rows or len(rows) != len(cols):
        raise NotASubsquare(f"row set and column set must be nonempty and equal size ({len(rows)} vs {len(cols)})")
    if not all(0 <= i < n for i in rows | cols):
        raise NotASubsquare("index outside the square")
    symbols = frozenset(L.grid[r][c] for r in rows for c in cols)
    if len(symbols) != len(rows):
        raise NotASubsquare(f"restriction uses {len(symbols)} symbols, expected {len(rows)}")
    return SubsquareHandle(rows, cols, symbols)


def is_subsquare(L: LatinSquare, rows: Iterable[int], cols: Iterable[int]) -> bool:
    try:
        extract_subsquare(L, rows, cols)
    except NotASubsquare:
        return False
    return True


# -- standard tables ---------------------------------------------------------

def cyclic_square(n: int, offset: int = 0) -> LatinSquare:
    """Addition table of the integers mod n, symbols shifted by ``offset`` mod n."""
    return LatinSquare([[(i + j + offset) % n for j in range(n)] for i in range(n)])


def elementary_abelian_square(k: int) -> LatinSquare:
    """Cayley table of (Z_2)^k, i.e. bitwise xor on 0..2^k-1."""
    n = 1 << k
    return LatinSquare([[i ^ j for j in range(n)] for i in range(n)])


def product_square(A: LatinSquare, B: LatinSquare) -> LatinSquare:
    """Direct product table; element (x, y) is encoded as x * |B| + y."""
    a, b = A.order, B.order
    n = a * b
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = A.grid[i // b][j // b] * b + B.grid[i % b][j % b]
    return LatinSquare(out)


# -- text format -------------------------------------------------------------

def _lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline")
    return text[:-1].split("\n")


def _int_token(tok: str, where: str) -> int:
    if not _INT.match(tok):
        raise ParseError(f"bad token {tok!r} in {where}")
    return int(tok)


def parse_square(text: str) -> LatinSquare:
    lines = _lines(text)
    n = _int_token(lines[0], "header")
    if n == 0:
        raise ParseError("order 0 is not allowed")
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}")
    grid = []
    for i, line in enumerate(lines[1:], start=1):
        toks = line.split(" ")
        if len(toks) != n:
            raise ParseError(f"line {i + 1}: expected {n} tokens, found {len(toks)}")
        grid.append([_int_token(t, f"line {i + 1}") for t in toks])
    return LatinSquare(grid)


def format_square(L: LatinSquare) -> str:
    out = [str(L.order)]
    out.extend(" ".join(map(str, row)) for row in L.grid)
    return "\n".join(out) + "\n"


def parse_partial(text: str) -> PartialArray:
    lines = _lines(text)
    head = lines[0].split(" ")
    if len(head) != 3:
        raise ParseError("header must read 'r s n'")
    r, s, n = (_int_token(t, "header") for t in head)
    if len(lines) != r + 1:
        raise ParseError(f"expected {r} rows, found {len(lines) - 1}")
    cells = []
    for i, line in enumerate(lines[1:], start=1):
        toks = line.split(" ") if s else ([] if line == "" else [line])
        if len(toks) != s:
            raise ParseError(f"line {i + 1}: expected {s} tokens, found {len(toks)}")
        cells.append([None if t == "." else _int_token(t, f"line {i + 1}") for t in toks])
    return PartialArray(tuple(tuple(row) for row in cells), n)


def format_partial(R: PartialArray) -> str:
    out = [f"{R.rows} {R.cols} {R.n}"]
    for row in R.cells:
        out.append(" ".join("." if x is None else str(x) for x in row))
    return "\n".join(out) + "\n"


def partial_from_rows(rows: Sequence[Sequence[Optional[int]]], n: int) -> PartialArray:
    return PartialArray(tuple(tuple(r) for r in rows), n)
