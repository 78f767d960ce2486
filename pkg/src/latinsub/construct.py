"""Deciders and builders for latin squares with two prescribed subsquares.

Every builder places the subsquares in a fixed canonical position, fills the
cross regions that must avoid the subsquares' symbols, and hands the
resulting block to the Ryser completion. Results carry their witnesses so
callers can re-check them with :func:`latinsub.core.extract_subsquare`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import LatinSquare, PartialArray, SubsquareHandle, cyclic_square, extract_subsquare
from .errors import ConditionViolated, DomainError
from .ryser import complete_to_square

Cell = tuple[int, int]
Block = list[list[int]]


# -- decisions ---------------------------------------------------------------

def _check_overlap_domain(n: int, a: int, b: int, c: int) -> None:
    if not 0 < c < a <= b < n:
        raise DomainError(f"need 0 < c < a <= b < n, got n={n} a={a} b={b} c={c}")


def overlap_conditions(n: int, a: int, b: int, c: int) -> bool:
    _check_overlap_domain(n, a, b, c)
    easy = n - 2 * b >= a - 2 * c >= 0
    hard = (n - 2 * a) * (n - 2 * b) >= c * c - (n - 2 * a - 2 * b + 3 * c) ** 2
    return easy and hard


def corollary_sufficient(n: int, a: int, b: int, c: int) -> bool:
    _check_overlap_domain(n, a, b, c)
    return n - 2 * b >= a - 2 * c and 2 * a >= 5 * c


def disjoint_share_rows_exists(n: int, a: int, b: int, c: int) -> bool:
    if not 0 <= c < a <= b < n:
        raise DomainError(f"need 0 <= c < a <= b < n, got n={n} a={a} b={b} c={c}")
    return n >= a + 2 * b


def share_all_rows_exists(n: int, a: int, b: int) -> bool:
    if not 0 < a <= b < n:
        raise DomainError(f"need 0 < a <= b < n, got n={n} a={a} b={b}")
    return (a == b and 2 * a == n) or n >= max(2 * a + b, 2 * b)


def existence_verdict(n: int, a: int, b: int) -> tuple[bool, str]:
    """Decide whether an order-n square can hold two distinct subsquares of orders a, b.

    The second item names the governing condition: the first one that fails,
    or ``"conditions a-c"`` when all hold.
    """
    if not 1 < a <= b < n:
        raise DomainError(f"need 1 < a <= b < n, got n={n} a={a} b={b}")
    if n < 2 * b:
        return False, "condition a"
    if n == 2 * b + 1 and a % 2 == 0 and 3 * a > 2 * (b + 1):
        return False, "condition b"
    if n == 2 * b and a % 2 == 1 and a != b and 2 * a > b:
        return False, "condition c"
    return True, "conditions a-c"


def two_subsquares_exist(n: int, a: int, b: int) -> bool:
    return existence_verdict(n, a, b)[0]


# -- results -----------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionRequest:
    n: int
    a: int
    b: int
    c: Optional[int] = None
    configuration: str = "any"

    CONFIGURATIONS = ("overlap", "disjoint-share-c-rows", "share-all-rows", "nested", "any")

    def __post_init__(self):
        if self.configuration not in self.CONFIGURATIONS:
            raise DomainError(f"unknown configuration {self.configuration!r}")
        if not 0 < self.a <= self.b < self.n:
            raise DomainError("need 0 < a <= b < n")
        if self.configuration == "overlap" and not (self.c is not None and 0 < self.c < self.a):
            raise DomainError("overlap needs 0 < c < a")


@dataclass(frozen=True)
class ConstructionResult:
    square: LatinSquare
    witnesses: list[SubsquareHandle]
    case: str

    def verify(self) -> None:
        """Raise NotASubsquare/AssertionError unless every witness is genuine."""
        for w in self.witnesses:
            got = extract_subsquare(self.square, w.rows, w.cols)
            if got.symbols != w.symbols:
                raise AssertionError(f"witness symbols differ: {w.describe()}")
        keys = [w.key() for w in self.witnesses]
        if len(set(keys)) != len(keys):
            raise AssertionError("witnesses are not distinct")


def _handle(rows, cols, symbols) -> SubsquareHandle:
    return SubsquareHandle(frozenset(rows), frozenset(cols), frozenset(symbols))


# -- cross-region filling ----------------------------------------------------

def _diagonals(rows: Sequence[int], cols: Sequence[int]) -> list[list[Cell]]:
    h, w = len(rows), len(cols)
    if h == 0 or w == 0:
        return []
    if h <= w:
        return [[(rows[i], cols[(i + d) % w]) for i in range(h)] for d in range(w)]
    return [[(rows[(j + d) % h], cols[j]) for j in range(w)] for d in range(h)]


def cross_sequence(x_rows, x_cols, y_rows, y_cols) -> list[Cell]:
    """Broken diagonals of X and Y, alternating one of each while both last."""
    dx = _diagonals(x_rows, x_cols)
    dy = _diagonals(y_rows, y_cols)
    seq: list[Cell] = []
    for k in range(max(len(dx), len(dy))):
        if k < len(dx):
            seq.extend(dx[k])
        if k < len(dy):
            seq.extend(dy[k])
    return seq


def symbol_counts(total: int, symbols: Sequence[int]) -> list[int]:
    """Split ``total`` cells as evenly as possible; lowest symbols take the ceilings."""
    k = len(symbols)
    q, rem = divmod(total, k)
    return [q + 1 if i < rem else q for i in range(k)]


def _is_partial_transversal(cells: Sequence[Cell]) -> bool:
    return len({r for r, _ in cells}) == len(cells) == len({c for _, c in cells})


def fill_sequence(seq: Sequence[Cell], symbols: Sequence[int]) -> dict[Cell, int]:
    """Fill cells in sequence order, exhausting one symbol before the next."""
    counts = symbol_counts(len(seq), symbols)
    out: dict[Cell, int] = {}
    pos = 0
    for s, k in zip(symbols, counts):
        run = seq[pos:pos + k]
        if not _is_partial_transversal(run):
            raise AssertionError(f"symbol {s} would repeat in a row or column: {run}")
        for cell in run:
            out[cell] = s
        pos += k
    return out


def equitable_fill(cells: Sequence[Cell], symbols: Sequence[int]) -> dict[Cell, int]:
    """Colour cells so no symbol repeats in a row or column and counts differ by at most 1.

    Treats cells as edges of the row/column bipartite graph: a proper edge
    colouring is built with Kempe-chain swaps, then colour classes are evened
    out by swapping along alternating paths. Needs len(symbols) >= max degree.
    """
    k = len(symbols)
    degree = Counter(("r", r) for r, _ in cells) + Counter(("c", c) for _, c in cells)
    if max(degree.values(), default=0) > k:
        raise ConditionViolated("more cells in a line than available symbols")
    at: dict[tuple[str, int], dict[int, tuple[str, int]]] = {u: {} for u in degree}

    def free(u):
        return next(col for col in range(k) if col not in at[u])

    def swap_path(start, x, y):
        # Swap colours x and y along the alternating path leaving ``start`` by an x-edge.
        path = []
        u, want = start, x
        while want in at[u]:
            v = at[u][want]
            path.append((u, v, want))
            u, want = v, (y if want == x else x)
        for u, v, col in path:
            del at[u][col]
            del at[v][col]
        for u, v, col in path:
            new = y if col == x else x
            at[u][new] = v
            at[v][new] = u

    for r, c in cells:
        u, v = ("r", r), ("c", c)
        alpha, beta = free(u), free(v)
        if alpha in at[v]:
            swap_path(v, alpha, beta)
        at[u][alpha] = v
        at[v][alpha] = u

    def classes():
        sizes = [0] * k
        for u, m in at.items():
            if u[0] == "r":
                for col in m:
                    sizes[col] += 1
        return sizes

    sizes = classes()
    while max(sizes) - min(sizes) > 1:
        x = sizes.index(max(sizes))
        y = sizes.index(min(sizes))
        # A path component with x-edges at both ends exists because |x| > |y|.
        for u in list(at):
            if x in at[u] and y not in at[u]:
                end, want = u, x
                count = 0
                while want in at[end]:
                    end = at[end][want]
                    want = y if want == x else x
                    count += 1
                if count % 2 == 1:
                    swap_path(u, x, y)
                    break
        else:
            raise AssertionError("no alternating path to balance colour classes")
        sizes = classes()

    order = sorted(range(k), key=lambda col: (-sizes[col], col))
    relabel = {col: symbols[i] for i, col in enumerate(order)}
    out: dict[Cell, int] = {}
    for u, m in at.items():
        if u[0] == "r":
            for col, v in m.items():
                out[(u[1], v[1])] = relabel[col]
    return out


def fill_regions(seq: Sequence[Cell], symbols: Sequence[int]) -> dict[Cell, int]:
    """Diagonal-sequence fill, or an equitable colouring when a run would collide."""
    try:
        return fill_sequence(seq, symbols)
    except AssertionError:
        return equitable_fill(seq, symbols)


@dataclass(frozen=True)
class OverlapLayout:
    """Canonical placement of A, B and their intersection C inside an order-n square.

    A covers rows/cols 0..a-1 with symbols 0..a-1; C is the last c of those;
    B covers rows/cols a-c..a+b-c-1 with symbols a-c..a+b-c-1. X sits in
    A's private rows and B's private columns, Y the other way round.
    """

    n: int
    a: int
    b: int
    c: int
    A: SubsquareHandle = field(init=False)
    B: SubsquareHandle = field(init=False)
    C: SubsquareHandle = field(init=False)
    x_rows: tuple[int, ...] = field(init=False)
    x_cols: tuple[int, ...] = field(init=False)
    y_rows: tuple[int, ...] = field(init=False)
    y_cols: tuple[int, ...] = field(init=False)
    outside: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n, a, b, c = self.n, self.a, self.b, self.c
        span = a + b - c
        setattr_ = lambda k, v: object.__setattr__(self, k, v)
        setattr_("A", _handle(range(a), range(a), range(a)))
        setattr_("B", _handle(range(a - c, span), range(a - c, span), range(a - c, span)))
        setattr_("C", _handle(range(a - c, a), range(a - c, a), range(a - c, a)))
        setattr_("x_rows", tuple(range(a - c)))
        setattr_("x_cols", tuple(range(a, span)))
        setattr_("y_rows", tuple(range(a, span)))
        setattr_("y_cols", tuple(range(a - c)))
        setattr_("outside", tuple(range(span, n)))

    def cross_cells(self) -> list[Cell]:
        return cross_sequence(self.x_rows, self.x_cols, self.y_rows, self.y_cols)


def fill_cross_blocks(layout: OverlapLayout) -> dict[Cell, int]:
    return fill_sequence(layout.cross_cells(), layout.outside)


# -- small square helpers ----------------------------------------------------

def _relabel(block: Sequence[Sequence[int]], sym) -> Block:
    return [[sym(x) for x in row] for row in block]


def square_with_corner(sub: Sequence[Sequence[int]], order: int, corner: str = "top-left") -> Block:
    """An order-``order`` latin square containing ``sub`` (symbols 0..k-1) as a corner block.

    ``corner="bottom-right"`` moves the block to the last k rows and columns.
    """
    k = len(sub)
    if order < 2 * k and order != k:
        raise ConditionViolated(f"a subsquare of order {k} does not fit in order {order}")
    sq = complete_to_square(PartialArray(tuple(tuple(r) for r in sub), order))
    g = [list(r) for r in sq.grid]
    if corner == "top-left":
        return g
    move = lambda i: i + order - k if i < k else i - k
    out = [[0] * order for _ in range(order)]
    for r in range(order):
        for c in range(order):
            out[move(r)][move(c)] = g[r][c]
    return out


def _cyclic_block(k: int) -> Block:
    return [list(r) for r in cyclic_square(k).grid]


def _assemble(rows: int, cols: int, pieces: list[tuple[int, int, Sequence[Sequence[int]]]],
              cells: dict[Cell, int], n: int) -> LatinSquare:
    grid: list[list[Optional[int]]] = [[None] * cols for _ in range(rows)]
    for r0, c0, blk in pieces:
        for i, row in enumerate(blk):
            for j, s in enumerate(row):
                grid[r0 + i][c0 + j] = s
    for (r, c), s in cells.items():
        grid[r][c] = s
    if any(x is None for row in grid for x in row):
        raise AssertionError("assembled block has holes")
    return complete_to_square(PartialArray(tuple(tuple(r) for r in grid), n))


# -- builders ----------------------------------------------------------------

def overlap_blocks(a: int, b: int, c: int) -> tuple[Block, Block]:
    """Default contents for A and B sharing a cyclic C, in layout coordinates."""
    C = _cyclic_block(c)
    A = _relabel(square_with_corner(C, a, "bottom-right"), lambda s: a - c + s if s < c else s - c)
    B = _relabel(square_with_corner(C, b), lambda s: a - c + s)
    return A, B


def build_overlapping(n: int, a: int, b: int, c: int,
                      A: Optional[Block] = None, B: Optional[Block] = None) -> ConstructionResult:
    """Order-n square with subsquares of orders a and b meeting in one of order c.

    ``A`` and ``B`` may be supplied in layout coordinates (A's symbols 0..a-1,
    B's symbols a-c..a+b-c-1, agreeing on the shared corner).
    """
    if not overlap_conditions(n, a, b, c):
        raise ConditionViolated(f"no order-{n} square has subsquares {a}, {b} meeting in order {c}")
    layout = OverlapLayout(n, a, b, c)
    if A is None or B is None:
        A, B = overlap_blocks(a, b, c)
    for i in range(c):
        for j in range(c):
            if A[a - c + i][a - c + j] != B[i][j]:
                raise DomainError("A and B disagree on their common corner")
    cross = fill_cross_blocks(layout)
    span = a + b - c
    sq = _assemble(span, span, [(0, 0, A), (a - c, a - c, B)], cross, n)
    res = ConstructionResult(sq, [layout.A, layout.B, layout.C], "overlap")
    res.verify()
    return res


def build_disjoint_share_rows(n: int, a: int, b: int, c: int) -> ConstructionResult:
    """Subsquares of orders a, b sharing exactly c rows but no columns or symbols."""
    if not disjoint_share_rows_exists(n, a, b, c):
        raise ConditionViolated(f"need n >= a + 2b for disjoint subsquares ({n} < {a + 2 * b})")
    A = _cyclic_block(a)
    B = _relabel(_cyclic_block(b), lambda s: s + a)
    rows, cols = a + b - c, a + b
    seq = cross_sequence(range(a - c), range(a, a + b), range(a, rows), range(a))
    cross = fill_regions(seq, list(range(a + b, n)))
    sq = _assemble(rows, cols, [(0, 0, A), (a - c, a, B)], cross, n)
    wa = _handle(range(a), range(a), range(a))
    wb = _handle(range(a - c, rows), range(a, a + b), range(a, a + b))
    res = ConstructionResult(sq, [wa, wb], "disjoint-share-rows")
    res.verify()
    return res


def _four_block(B: Sequence[Sequence[int]]) -> LatinSquare:
    b = len(B)
    top = [list(r) + [s + b for s in r] for r in B]
    bottom = [[s + b for s in r] + list(r) for r in B]
    return LatinSquare(top + bottom)


def build_share_all_rows(n: int, a: int, b: int) -> ConstructionResult:
    """Subsquares of orders a <= b where A's rows lie inside B's rows; no shared columns or symbols."""
    if not share_all_rows_exists(n, a, b):
        raise ConditionViolated(f"no order-{n} square has order {a} and {b} subsquares sharing all {a} rows")
    wb = _handle(range(b), range(b), range(b))
    wa = _handle(range(a), range(b, b + a), range(b, b + a))
    if n == a + b:
        sq = _four_block(_cyclic_block(b))
        res = ConstructionResult(sq, [wa, wb], "share-all-rows-four-block")
        res.verify()
        return res
    # Rows 0..b-1 right of B form a latin rectangle on symbols b..n-1 holding A.
    side = square_with_corner(_cyclic_block(a), n - b)
    strip = [list(r) + [s + b for s in side[i]] for i, r in enumerate(_cyclic_block(b))]
    sq = complete_to_square(PartialArray(tuple(tuple(r) for r in strip), n))
    res = ConstructionResult(sq, [wa, wb], "share-all-rows")
    res.verify()
    return res


def build_two_subsquares(n: int, a: int, b: int) -> ConstructionResult:
    """Follow the case split of the existence proof to build a witness square."""
    ok, why = existence_verdict(n, a, b)
    if not ok:
        raise ConditionViolated(f"no order-{n} square has two subsquares of orders {a}, {b} ({why})")

    def overlap(c: int, tag: str) -> ConstructionResult:
        if c == 0:
            return build_disjoint_share_rows(n, a, b, 0)
        res = build_overlapping(n, a, b, c)
        return ConstructionResult(res.square, res.witnesses[:2], tag)

    if n >= 2 * b + a:
        res = build_disjoint_share_rows(n, a, b, 0)
        return ConstructionResult(res.square, res.witnesses, "disjoint")
    if (n - a) % 2 == 0:
        return overlap((a + 2 * b - n) // 2, "overlap-same-parity")
    if n >= 2 * b + 2:
        return overlap((a + 2 * b - n + 1) // 2, "overlap-shifted")
    if n == 2 * b + 1:
        return overlap(a // 2, "overlap-half")
    # n == 2b: the square splits into four order-b subsquares.
    if a == b:
        sq = _four_block(_cyclic_block(b))
        ws = [_handle(range(b), range(b), range(b)), _handle(range(b), range(b, n), range(b, n))]
        res = ConstructionResult(sq, ws, "four-block")
    else:
        inner = square_with_corner(_cyclic_block(a), b)
        sq = _four_block(inner)
        ws = [_handle(range(a), range(a), range(a)), _handle(range(b), range(b), range(b))]
        res = ConstructionResult(sq, ws, "nested-four-block")
    res.verify()
    return res
