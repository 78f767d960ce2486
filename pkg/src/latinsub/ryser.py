"""Ryser's embedding condition and constructive completion of latin arrays."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import LatinSquare, PartialArray
from .errors import ConditionViolated, EmptyCellPresent, SearchBudgetExceeded


@dataclass(frozen=True)
class DeficiencyReport:
    counts: dict[int, int]
    threshold: int
    violating: frozenset[int]

    @property
    def ok(self) -> bool:
        return not self.violating


def ryser_check(R: PartialArray) -> DeficiencyReport:
    if not R.is_filled():
        raise EmptyCellPresent("ryser_check needs a fully filled array")
    counts = {i: 0 for i in range(R.n)}
    for _, _, s in R.filled_cells():
        counts[s] += 1
    threshold = R.rows + R.cols - R.n
    violating = frozenset(i for i, g in counts.items() if g < threshold)
    return DeficiencyReport(counts, threshold, violating)


class _Matcher:
    """Augmenting-path bipartite matching between ``left`` and ``right`` vertices.

    Neighbour lists are scanned in the order given, so sorted lists give the
    lowest-numbered choices.
    """

    def __init__(self, adj: dict[int, Sequence[int]]):
        self.adj = adj
        self.radj: dict[int, list[int]] = {}
        for u in sorted(adj):
            for v in adj[u]:
                self.radj.setdefault(v, []).append(u)
        self.l2r: dict[int, int] = {}
        self.r2l: dict[int, int] = {}

    def augment_left(self, u: int) -> bool:
        seen: set[int] = set()

        def dfs(x: int) -> bool:
            for v in self.adj[x]:
                if v in seen:
                    continue
                seen.add(v)
                if v not in self.r2l or dfs(self.r2l[v]):
                    self.l2r[x] = v
                    self.r2l[v] = x
                    return True
            return False

        return dfs(u)

    def augment_right(self, v: int) -> bool:
        seen: set[int] = set()

        def dfs(y: int) -> bool:
            for u in self.radj.get(y, ()):
                if u in seen:
                    continue
                seen.add(u)
                if u not in self.l2r or dfs(self.l2r[u]):
                    self.l2r[u] = y
                    self.r2l[y] = u
                    return True
            return False

        return dfs(v)


def _extend_by_column(rows: list[list[int]], n: int, gamma: list[int]) -> None:
    r, width = len(rows), len(rows[0])
    need = r + width + 1 - n
    forced = [i for i in range(n) if gamma[i] < need]
    adj = {i: [s for s in range(n) if s not in set(rows[i])] for i in range(r)}
    m = _Matcher(adj)
    # Forced symbols are matched first; later augmentations from rows never unmatch them.
    for s in forced:
        if not m.augment_right(s):
            raise AssertionError(f"no room for deficient symbol {s}")
    for i in range(r):
        if i not in m.l2r and not m.augment_left(i):
            raise AssertionError(f"row {i} cannot be extended")
    for i in range(r):
        s = m.l2r[i]
        rows[i].append(s)
        gamma[s] += 1


def _extend_by_row(rows: list[list[int]], n: int) -> None:
    used = [set(rows[i][c] for i in range(len(rows))) for c in range(n)]
    adj = {c: [s for s in range(n) if s not in used[c]] for c in range(n)}
    m = _Matcher(adj)
    for c in range(n):
        if not m.augment_left(c):
            raise AssertionError("latin rectangle row extension failed")
    rows.append([m.l2r[c] for c in range(n)])


def complete_to_square(R: PartialArray, n: Optional[int] = None) -> LatinSquare:
    """Embed a filled r x s array in the top-left corner of an order-n square.

    Columns are added one at a time as systems of distinct representatives
    that must absorb every symbol at its deficiency limit; rows are then added
    as perfect matchings between columns and their missing symbols.
    """
    n = R.n if n is None else n
    if n != R.n:
        R = PartialArray(R.cells, n)
    report = ryser_check(R)
    if report.violating:
        raise ConditionViolated(
            f"symbols {sorted(report.violating)} occur fewer than {report.threshold} times"
        )
    if R.rows == 0 or R.cols == 0:
        rows: list[list[int]] = [list(range(n))]
    else:
        rows = [list(row) for row in R.cells]
    gamma = [0] * n
    for row in rows:
        for s in row:
            gamma[s] += 1
    while len(rows[0]) < n:
        _extend_by_column(rows, n, gamma)
    while len(rows) < n:
        _extend_by_row(rows, n)
    return LatinSquare(rows)


def square_from_block(block: Sequence[Sequence[int]], n: int) -> LatinSquare:
    return complete_to_square(PartialArray(tuple(tuple(r) for r in block), n))


# -- backtracking ----------------------------------------------------------

def complete_partial(
    R: PartialArray,
    n: Optional[int] = None,
    budget: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Optional[LatinSquare]:
    """Exhaustive most-constrained-cell backtracking.

    Returns None when no order-n square agrees with the filled cells of R.
    With ``rng`` ties between cells and the order of candidate symbols are
    randomized at every node.
    """
    n = R.n if n is None else n
    full = (1 << n) - 1
    grid = [[-1] * n for _ in range(n)]
    rmask = [0] * n
    cmask = [0] * n
    for r, c, s in R.filled_cells():
        if s >= n:
            return None
        bit = 1 << s
        if rmask[r] & bit or cmask[c] & bit:
            return None
        grid[r][c] = s
        rmask[r] |= bit
        cmask[c] |= bit
    empty = [(r, c) for r in range(n) for c in range(n) if grid[r][c] < 0]
    order = list(range(n))
    if rng is not None:
        rng.shuffle(empty)
    nodes = 0

    def solve(k: int) -> bool:
        nonlocal nodes
        if k == len(empty):
            return True
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(f"node budget {budget} exhausted")
        best_i, best_avail, best_cnt = -1, 0, n + 1
        for i in range(k, len(empty)):
            r, c = empty[i]
            avail = full & ~(rmask[r] | cmask[c])
            cnt = avail.bit_count()
            if cnt < best_cnt:
                best_i, best_avail, best_cnt = i, avail, cnt
                if cnt <= 1:
                    break
        if best_cnt == 0:
            return False
        empty[k], empty[best_i] = empty[best_i], empty[k]
        r, c = empty[k]
        if rng is not None:
            rng.shuffle(order)
        for s in list(order):
            bit = 1 << s
            if not best_avail & bit:
                continue
            grid[r][c] = s
            rmask[r] |= bit
            cmask[c] |= bit
            if solve(k + 1):
                return True
            rmask[r] ^= bit
            cmask[c] ^= bit
        grid[r][c] = -1
        empty[k], empty[best_i] = empty[best_i], empty[k]
        return False

    if solve(0):
        return LatinSquare(grid)
    return None


def random_latin_square(n: int, rng: random.Random) -> LatinSquare:
    """A latin square from randomized backtracking; not uniformly distributed."""
    sq = complete_partial(PartialArray((), n), n, rng=rng)
    assert sq is not None
    return sq
