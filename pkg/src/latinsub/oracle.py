"""Brute-force ground truth used to cross-check the deciders and fast paths.

Nothing here shares code with the algorithms it checks: subsquares are found
by scanning every column set, products by walking every ordering and every
bracketing, and squares by plain cell-by-cell enumeration.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Optional, Sequence

from .core import LatinSquare, PartialArray, SubsquareHandle


# -- square enumeration ------------------------------------------------------

def _fill(n: int, grid: list[list[int]], rmask: list[int], cmask: list[int], cells: list[tuple[int, int]], k: int):
    if k == len(cells):
        yield tuple(tuple(r) for r in grid)
        return
    r, c = cells[k]
    avail = ~(rmask[r] | cmask[c]) & ((1 << n) - 1)
    while avail:
        low = avail & -avail
        avail ^= low
        grid[r][c] = low.bit_length() - 1
        rmask[r] |= low
        cmask[c] |= low
        yield from _fill(n, grid, rmask, cmask, cells, k + 1)
        rmask[r] ^= low
        cmask[c] ^= low


def _enumerate(n: int, fixed: dict[tuple[int, int], int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    grid = [[-1] * n for _ in range(n)]
    rmask = [0] * n
    cmask = [0] * n
    for (r, c), s in fixed.items():
        grid[r][c] = s
        rmask[r] |= 1 << s
        cmask[c] |= 1 << s
    cells = [(r, c) for r in range(n) for c in range(n) if (r, c) not in fixed]
    yield from _fill(n, grid, rmask, cmask, cells, 0)


def _reduced_fixed(n: int) -> dict[tuple[int, int], int]:
    fixed = {(0, j): j for j in range(n)}
    fixed.update({(j, 0): j for j in range(n)})
    return fixed


def second_rows(n: int) -> list[tuple[int, ...]]:
    """Admissible row 1 of a reduced square; used to split work between processes."""
    if n < 2:
        return []
    return [p for p in permutations(range(n)) if p[0] == 1 and all(p[j] != j for j in range(n))]


def reduced_squares(n: int, second_row: Optional[Sequence[int]] = None) -> Iterator[LatinSquare]:
    """All reduced latin squares of order n (optionally only those with a given row 1)."""
    if n <= 2:
        fixed = _reduced_fixed(n)
        for g in _enumerate(n, fixed):
            yield LatinSquare(g)
        return
    rows = [tuple(second_row)] if second_row is not None else second_rows(n)
    for row in rows:
        fixed = _reduced_fixed(n)
        fixed.update({(1, j): s for j, s in enumerate(row)})
        for g in _enumerate(n, fixed):
            yield LatinSquare(g)


@lru_cache(maxsize=None)
def all_latin_squares(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Every latin square of order n (161280 of them at n = 5)."""
    return tuple(_enumerate(n, {}))


def extensions(R: PartialArray, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every order-n square agreeing with the filled cells of R (from the full list)."""
    fixed = list(R.filled_cells())
    for g in all_latin_squares(n):
        if all(g[r][c] == s for r, c, s in fixed):
            yield g


# -- subsquares --------------------------------------------------------------

def _scan(g: Sequence[Sequence[int]], n: int, m: int) -> list[tuple[int, int, int]]:
    """(row mask, column mask, symbol mask) of every order-m subsquare.

    For a fixed column set, a row set is a subsquare exactly when its rows
    carry one common m-symbol set there, so rows are grouped by that set.
    """
    out = []
    for cols in combinations(range(n), m):
        cmask = 0
        for c in cols:
            cmask |= 1 << c
        groups: dict[int, int] = {}
        for r in range(n):
            row = g[r]
            smask = 0
            for c in cols:
                smask |= 1 << row[c]
            if smask.bit_count() == m:
                groups[smask] = groups.get(smask, 0) | (1 << r)
        for smask, rmask in groups.items():
            k = rmask.bit_count()
            if k == m:
                out.append((rmask, cmask, smask))
            elif k > m:
                raise AssertionError("more rows than symbols in a column set")
    return out


def _bits(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def naive_subsquares(L: LatinSquare, m: int) -> list[SubsquareHandle]:
    """Order-m subsquares by scanning every column set."""
    found = _scan(L.grid, L.order, m)
    out = [SubsquareHandle(_bits(r), _bits(c), _bits(s)) for r, c, s in found]
    return sorted(out, key=lambda h: h.key())


def extract_based_subsquares(L: LatinSquare, m: int) -> list[SubsquareHandle]:
    """Order-m subsquares by testing all C(n, m)^2 row and column set pairs."""
    from .core import extract_subsquare
    from .errors import NotASubsquare

    n = L.order
    out = []
    for rows in combinations(range(n), m):
        for cols in combinations(range(n), m):
            try:
                out.append(extract_subsquare(L, rows, cols))
            except NotASubsquare:
                pass
    return sorted(out, key=lambda h: h.key())


@dataclass
class GroundTruth:
    n: int
    squares: int = 0
    pairs: set[tuple[int, int]] = field(default_factory=set)
    overlaps: set[tuple[int, int, int]] = field(default_factory=set)
    max_counts: dict[int, int] = field(default_factory=dict)

    def merge(self, other: "GroundTruth") -> None:
        self.squares += other.squares
        self.pairs |= other.pairs
        self.overlaps |= other.overlaps
        for m, k in other.max_counts.items():
            self.max_counts[m] = max(self.max_counts.get(m, 0), k)


def square_facts(L: LatinSquare, truth: GroundTruth, max_order: Optional[int] = None) -> None:
    """Record which subsquare-order pairs and overlap triples L realizes.

    ``max_order`` skips the scan for proper orders above it (recorded as 0);
    passing n // 2 loses nothing, since a proper subsquare has at most half
    the order of its host, and saves most of the work.
    """
    n = L.order
    g = L.grid
    top = n - 1 if max_order is None else min(max_order, n - 1)
    subs: list[tuple[int, int, int, int]] = []
    counts = truth.max_counts
    for m in range(1, n):
        found = _scan(g, n, m) if m <= top else []
        counts[m] = max(counts.get(m, 0), len(found))
        if m > 1:
            subs.extend((m, r, c, s) for r, c, s in found)
    counts.setdefault(n, 1)
    truth.squares += 1
    pairs, overlaps = truth.pairs, truth.overlaps
    for i, (ma, ra, ca, _) in enumerate(subs):
        for mb, rb, cb, _ in subs[i + 1:]:
            a, b = (ma, mb) if ma <= mb else (mb, ma)
            pairs.add((a, b))
            c_rows = (ra & rb).bit_count()
            if c_rows and c_rows == (ca & cb).bit_count() and c_rows < a:
                overlaps.add((a, b, c_rows))


def _truth_for_prefix(args) -> GroundTruth:
    n, row, max_order = args
    t = GroundTruth(n)
    for L in reduced_squares(n, row):
        square_facts(L, t, max_order)
    return t


def ground_truth(n: int, workers: int = 1, max_order: Optional[int] = None) -> GroundTruth:
    """Scan every reduced square of order n; work is split by row 1 across processes."""
    truth = GroundTruth(n)
    if n <= 2:
        for L in reduced_squares(n):
            square_facts(L, truth, max_order)
        return truth
    jobs = [(n, row, max_order) for row in second_rows(n)]
    if workers <= 1:
        for job in jobs:
            truth.merge(_truth_for_prefix(job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_truth_for_prefix, jobs):
                truth.merge(part)
    return truth


# -- full products -----------------------------------------------------------

class BracketOracle:
    """Products over every ordering and every bracketing, cached per ordered tuple."""

    def __init__(self, table: Sequence[Sequence[int]]):
        self.table = table
        self._cache: dict[tuple[int, ...], frozenset[int]] = {}

    def values(self, seq: tuple[int, ...]) -> frozenset[int]:
        got = self._cache.get(seq)
        if got is not None:
            return got
        if len(seq) == 1:
            out = frozenset(seq)
        else:
            acc = set()
            t = self.table
            for k in range(1, len(seq)):
                right = self.values(seq[k:])
                for x in self.values(seq[:k]):
                    row = t[x]
                    acc.update(row[y] for y in right)
            out = frozenset(acc)
        self._cache[seq] = out
        return out

    def products(self, ground: Sequence[int]) -> frozenset[int]:
        result: set[int] = set()
        for seq in permutations(ground):
            result |= self.values(seq)
        return frozenset(result)


def bracketed_products(table: Sequence[Sequence[int]], ground: Sequence[int]) -> frozenset[int]:
    return BracketOracle(table).products(ground)


# -- comparisons -------------------------------------------------------------

@dataclass
class Disagreement:
    kind: str  # "pair", "overlap" or "bound"
    params: tuple[int, ...]
    decided: object
    truth: object


def compare_with_deciders(truth: GroundTruth) -> list[Disagreement]:
    """Every place where a decider or the counting bound disagrees with the scan."""
    from .census import subsquare_upper_bound
    from .construct import overlap_conditions, two_subsquares_exist

    n = truth.n
    out = []
    for a in range(2, n):
        for b in range(a, n):
            got, want = two_subsquares_exist(n, a, b), (a, b) in truth.pairs
            if got != want:
                out.append(Disagreement("pair", (n, a, b), got, want))
            for c in range(1, a):
                got, want = overlap_conditions(n, a, b, c), (a, b, c) in truth.overlaps
                if got != want:
                    out.append(Disagreement("overlap", (n, a, b, c), got, want))
    for m, k in sorted(truth.max_counts.items()):
        bound = subsquare_upper_bound(n, m)
        if k > bound:
            out.append(Disagreement("bound", (n, m), bound, k))
    return out
