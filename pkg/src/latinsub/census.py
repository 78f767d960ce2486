"""Subsquare enumeration, row-strip blocks and the counting bounds."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb, isqrt
from typing import Iterable, Optional

from .core import LatinSquare, SubsquareHandle


def _handle(rows, cols, symbols) -> SubsquareHandle:
    return SubsquareHandle(frozenset(rows), frozenset(cols), frozenset(symbols))


class _Tables:
    def __init__(self, L: LatinSquare):
        n = L.order
        self.n = n
        self.g = L.grid
        self.col_of = [[0] * n for _ in range(n)]  # col_of[r][s]
        self.row_of = [[0] * n for _ in range(n)]  # row_of[c][s]
        for r, row in enumerate(self.g):
            for c, s in enumerate(row):
                self.col_of[r][s] = c
                self.row_of[c][s] = r


def _close(t: _Tables, R: set, C: set, S: set, new_col: int, r0: int, c0: int, limit: int):
    """Smallest subsquare containing (R, C + new_col, S), or None.

    Gives up as soon as the closure needs a row below r0, a column below c0,
    or more than ``limit`` of anything.
    """
    g, col_of, row_of = t.g, t.col_of, t.row_of
    R, C, S = set(R), set(C), set(S)
    todo = [("c", new_col)]
    C.add(new_col)
    while todo:
        kind, x = todo.pop()
        found = []
        if kind == "c":
            found += [("s", g[r][x]) for r in R]
            found += [("r", row_of[x][s]) for s in S]
        elif kind == "r":
            found += [("s", g[x][c]) for c in C]
            found += [("c", col_of[x][s]) for s in S]
        else:
            found += [("c", col_of[r][x]) for r in R]
            found += [("r", row_of[c][x]) for c in C]
        for kind2, y in found:
            if kind2 == "c":
                if y in C:
                    continue
                if y < c0 or len(C) >= limit:
                    return None
                C.add(y)
            elif kind2 == "r":
                if y in R:
                    continue
                if y < r0 or len(R) >= limit:
                    return None
                R.add(y)
            else:
                if y in S:
                    continue
                if len(S) >= limit:
                    return None
                S.add(y)
            todo.append((kind2, y))
    return R, C, S


def _proper_subsquares(L: LatinSquare, limit: int, lead_rows: Optional[Iterable[int]] = None) -> list[SubsquareHandle]:
    """All subsquares of orders 2..limit by closure search from each leading cell.

    A subsquare is reached from its lexicographically first cell (r0, c0) by
    adding its columns one at a time; each intermediate closure lies inside it.
    ``lead_rows`` restricts r0, which is how work is split between processes.
    """
    t = _Tables(L)
    n = t.n
    out = []
    for r0 in (range(n) if lead_rows is None else lead_rows):
        for c0 in range(n):
            start = ({r0}, {c0}, {t.g[r0][c0]})
            seen: set[frozenset] = set()
            stack = [start]
            while stack:
                R, C, S = stack.pop()
                if len(C) >= limit:
                    continue
                for c in range(c0 + 1, n):
                    if c in C:
                        continue
                    got = _close(t, R, C, S, c, r0, c0, limit)
                    if got is None:
                        continue
                    key = frozenset(got[1])
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(_handle(*got))
                    stack.append(got)
    return out


def intercalates(L: LatinSquare) -> list[SubsquareHandle]:
    g = L.grid
    n = L.order
    out = []
    for r1 in range(n):
        row1 = g[r1]
        for r2 in range(r1 + 1, n):
            row2 = g[r2]
            for c1 in range(n):
                x, y = row1[c1], row2[c1]
                for c2 in range(c1 + 1, n):
                    if row1[c2] == y and row2[c2] == x:
                        out.append(_handle((r1, r2), (c1, c2), (x, y)))
    return out


def _sort(handles: Iterable[SubsquareHandle]) -> list[SubsquareHandle]:
    return sorted(handles, key=lambda h: h.key())


def enumerate_subsquares(L: LatinSquare, m: int, workers: int = 1) -> list[SubsquareHandle]:
    """Every order-m subsquare of L, sorted by (row set, column set)."""
    n = L.order
    if not 1 <= m <= n:
        raise ValueError(f"order {m} outside 1..{n}")
    if m == n:
        return [_handle(range(n), range(n), range(n))]
    if m == 1:
        return [_handle((r,), (c,), (L.grid[r][c],)) for r in range(n) for c in range(n)]
    if 2 * m > n:
        # A proper subsquare has at most half the order of the square.
        return []
    if m == 2:
        return _sort(intercalates(L))
    return _sort(h for h in _search(L, m, workers) if h.order == m)


def _search_part(args) -> list[SubsquareHandle]:
    L, limit, rows = args
    return _proper_subsquares(L, limit, rows)


def _search(L: LatinSquare, limit: int, workers: int) -> list[SubsquareHandle]:
    if workers <= 1:
        return _proper_subsquares(L, limit)
    n = L.order
    jobs = [(L, limit, range(k, n, workers)) for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [h for part in pool.map(_search_part, jobs) for h in part]


def all_subsquares(L: LatinSquare, max_order: Optional[int] = None, workers: int = 1) -> dict[int, list[SubsquareHandle]]:
    """Subsquares of every order up to ``max_order`` (default n), keyed by order."""
    n = L.order
    top = n if max_order is None else max_order
    out: dict[int, list[SubsquareHandle]] = {m: [] for m in range(1, top + 1)}
    if top >= 1:
        out[1] = enumerate_subsquares(L, 1)
    if top >= 2 and n >= 4:
        for h in _search(L, min(top, n // 2), workers):
            out[h.order].append(h)
    for m in range(2, top + 1):
        out[m] = _sort(out[m])
    if top >= n:
        out[n] = [_handle(range(n), range(n), range(n))]
    return out


def subsquare_counts(L: LatinSquare) -> dict[int, int]:
    return {m: len(hs) for m, hs in all_subsquares(L).items()}


# -- bounds ------------------------------------------------------------------

def half_plus(m: int) -> int:
    """The smallest h with h > m/2, i.e. ceil((m + 1) / 2)."""
    return m // 2 + 1


@dataclass(frozen=True)
class BoundQuery:
    n: int
    m: int

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m} n={self.n}")

    @property
    def h(self) -> int:
        return half_plus(self.m)

    @property
    def bound(self) -> int:
        return subsquare_upper_bound(self.n, self.m)


def subsquare_upper_bound(n: int, m: int) -> int:
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m} n={n}")
    h = half_plus(m)
    return (n * comb(n, h)) // (m * comb(m, h))


def psi(m: int, t: int) -> int:
    if not 1 <= t <= m:
        raise ValueError(f"need 1 <= t <= m, got t={t} m={m}")
    if m % 2 == 0:
        return m // (2 * t) + 1
    return -(-(m // t) // 2)


def best_strip_height(m: int) -> int:
    """ceil(sqrt(m / 2)) in exact arithmetic: least t >= 1 with 2 t^2 >= m."""
    t = max(1, isqrt(m // 2))
    while 2 * t * t < m:
        t += 1
    while t > 1 and 2 * (t - 1) ** 2 >= m:
        t -= 1
    return t


def exponent_ok(m: int, t: int) -> bool:
    """psi(m, t) + t <= sqrt(2m) + 2, compared exactly."""
    v = psi(m, t) + t - 2
    return v <= 0 or v * v <= 2 * m


@dataclass
class ExponentReport:
    m_max: int
    checked: int
    violations: list[tuple[int, int, int]]
    table: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def exponent_check(m_max: int, keep_table: Optional[bool] = None) -> ExponentReport:
    """Check psi(m, t*) + t* <= sqrt(2m) + 2 for all m <= m_max.

    The table of (m, t*, psi + t*) is kept only for small ranges unless asked.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    keep = m_max <= 10_000 if keep_table is None else keep_table
    violations, table = [], []
    t = 1
    for m in range(1, m_max + 1):
        while 2 * t * t < m:
            t += 1
        if m % 2 == 0:
            e = m // (2 * t) + 1 + t
        else:
            e = -(-(m // t) // 2) + t
        v = e - 2
        if v > 0 and v * v > 2 * m:
            violations.append((m, t, e))
        if keep:
            table.append((m, t, e))
    return ExponentReport(m_max, m_max, violations, table)


# -- blocks ------------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    rows: tuple[int, ...]
    blocks: tuple[frozenset[int], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


def block_decomposition(L: LatinSquare, rows: Iterable[int]) -> BlockDecomposition:
    """Split the columns of a row strip into minimal latin subrectangles.

    Two columns are joined whenever some symbol occurs in both within the
    strip; components of that relation are exactly the minimal blocks.
    """
    rows = tuple(sorted(set(rows)))
    if not rows:
        raise ValueError("need at least one row")
    n = L.order
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first_col: dict[int, int] = {}
    for r in rows:
        for c, s in enumerate(L.grid[r]):
            if s in first_col:
                a, b = find(c), find(first_col[s])
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first_col[s] = c
    groups: dict[int, set[int]] = {}
    for c in range(n):
        groups.setdefault(find(c), set()).add(c)
    blocks = tuple(sorted((frozenset(g) for g in groups.values()), key=min))
    return BlockDecomposition(rows, blocks)
