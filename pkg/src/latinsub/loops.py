"""Loops, full products, and full-product loops of every admissible order.

A loop here is a normalized latin square: element 0 is the identity, so row
0 and column 0 of the table read 0, 1, ..., n-1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence

from .construct import build_overlapping
from .core import LatinSquare, PartialArray, format_square, parse_square
from .errors import (
    BudgetExhausted,
    CapacityExceeded,
    ImpossibleOrder,
    IntervalViolated,
    ParseError,
    WitnessMissing,
)
from .ryser import complete_partial

DEFAULT_CAPACITY = 13


@dataclass(frozen=True)
class Loop:
    table: LatinSquare

    def __post_init__(self):
        g = self.table.grid
        n = len(g)
        if any(g[0][j] != j or g[j][0] != j for j in range(n)):
            raise ValueError("loop table must have identity row 0 and column 0")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Loop":
        return cls(LatinSquare(rows))

    @property
    def order(self) -> int:
        return self.table.order

    def mul(self, x: int, y: int) -> int:
        return self.table.grid[x][y]

    def elements(self) -> range:
        return range(self.order)


# Tables from the literature, relabelled 1..5 -> 0..4.
Q1 = Loop.from_rows([
    [0, 1, 2, 3, 4],
    [1, 0, 4, 2, 3],
    [2, 3, 0, 4, 1],
    [3, 4, 1, 0, 2],
    [4, 2, 3, 1, 0],
])
Q2 = Loop.from_rows([
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 3, 4, 1, 0],
    [3, 4, 0, 2, 1],
    [4, 2, 1, 0, 3],
])


def trivial_loop() -> Loop:
    return Loop.from_rows([[0]])


def group_loop(n: int) -> Loop:
    """The cyclic group of order n."""
    return Loop.from_rows([[(i + j) % n for j in range(n)] for i in range(n)])


# -- full products -----------------------------------------------------------

@dataclass(frozen=True)
class FullProductSet:
    ground: frozenset[int]
    products: frozenset[int]


class _SetProduct:
    """Memoized product of element sets encoded as bit masks."""

    def __init__(self, Q: Loop):
        self.g = Q.table.grid
        self.n = Q.order
        self.memo: dict[tuple[int, int], int] = {}
        self.left: Optional[list[list[int]]] = None
        if self.n <= 14:
            size = 1 << self.n
            self.left = []
            for x in range(self.n):
                row = self.g[x]
                img = [0] * size
                for mask in range(1, size):
                    low = mask & -mask
                    img[mask] = img[mask ^ low] | (1 << row[low.bit_length() - 1])
                self.left.append(img)

    def __call__(self, P: int, R: int) -> int:
        key = (P, R)
        got = self.memo.get(key)
        if got is not None:
            return got
        out = 0
        p = P
        while p:
            low = p & -p
            x = low.bit_length() - 1
            p ^= low
            if self.left is not None:
                out |= self.left[x][R]
            else:
                row = self.g[x]
                r = R
                while r:
                    lb = r & -r
                    out |= 1 << row[lb.bit_length() - 1]
                    r ^= lb
        self.memo[key] = out
        return out


def _mask_elements(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def full_products(Q: Loop, S: Iterable[int], capacity: int = DEFAULT_CAPACITY) -> FullProductSet:
    """Every product of all elements of S, each used once, in any order and bracketing.

    Subset dynamic programming: the value set of a subset T is the union,
    over ordered splits T = U + (T - U), of value(U) * value(T - U).
    """
    ground = sorted(set(S))
    k = len(ground)
    if k == 0:
        raise ValueError("ground set must be nonempty")
    if k > capacity:
        raise CapacityExceeded(f"|S| = {k} exceeds subset-DP capacity {capacity}")
    if any(not 0 <= x < Q.order for x in ground):
        raise ValueError("ground set contains a non-element")
    full = (1 << Q.order) - 1
    prod = _SetProduct(Q)
    f = [0] * (1 << k)
    for i, x in enumerate(ground):
        f[1 << i] = 1 << x
    for T in range(1, 1 << k):
        if T & (T - 1) == 0:
            continue
        acc = 0
        U = (T - 1) & T
        while U:
            acc |= prod(f[U], f[T ^ U])
            if acc == full:
                break
            U = (U - 1) & T
        f[T] = acc
    return FullProductSet(frozenset(ground), _mask_elements(f[-1]))


def is_full(Q: Loop, capacity: int = DEFAULT_CAPACITY) -> bool:
    return full_products(Q, Q.elements(), capacity).products == frozenset(Q.elements())


# -- base loops --------------------------------------------------------------

def random_loop(n: int, rng: random.Random) -> Loop:
    cells = [[None] * n for _ in range(n)]
    for j in range(n):
        cells[0][j] = j
        cells[j][0] = j
    sq = complete_partial(PartialArray(tuple(tuple(r) for r in cells), n), n, rng=rng)
    assert sq is not None
    return Loop(sq)


def search_full_loop(n: int, seed: int = 0, budget: int = 1000) -> Loop:
    """Randomized search for a loop of order n (5..12) with P(Q) = Q."""
    if not 5 <= n <= 12:
        raise ValueError(f"search covers orders 5..12, got {n}")
    if n == 5:
        return Q2
    rng = random.Random(seed)
    for _ in range(budget):
        Q = random_loop(n, rng)
        if is_full(Q):
            return Q
    raise BudgetExhausted(f"no full loop of order {n} in {budget} attempts")


@lru_cache(maxsize=None)
def base_loop(n: int) -> Loop:
    """Stored full-product loop of order n (5..12), searched for if the file is missing."""
    if n == 5:
        return Q2
    try:
        text = resources.files("latinsub").joinpath(f"data/full_loops/order_{n}.txt").read_text()
    except FileNotFoundError:
        return search_full_loop(n)
    return Loop(parse_square(text))


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    x: int
    y: int
    ybar: int
    side: str  # "AB": x = y * ybar, "BA": x = ybar * y


@dataclass(frozen=True)
class BaseStage:
    loop: Loop

    @property
    def order(self) -> int:
        return self.loop.order


@dataclass(frozen=True)
class TriplingStage:
    loop: Loop
    prev_order: int
    a_set: frozenset[int]
    b_set: frozenset[int]
    iso_a: tuple[int, ...]  # element q of the previous loop -> iso_a[q]
    iso_b: tuple[int, ...]
    witnesses: tuple[Witness, ...]

    @property
    def order(self) -> int:
        return self.loop.order


@dataclass
class FullLoopCertificate:
    stages: list = field(default_factory=list)

    @property
    def loop(self) -> Loop:
        return self.stages[-1].loop

    def orders(self) -> list[int]:
        return [s.order for s in self.stages]


def _normalize_at(L: LatinSquare, e: int) -> Loop:
    """Principal isotope of L through row e and column e, identity relabelled to 0."""
    n = L.order
    g = L.grid
    u = g[e][e]
    rho_inv = [0] * n
    kappa_inv = [0] * n
    for i in range(n):
        rho_inv[g[i][e]] = i
        kappa_inv[g[e][i]] = i
    tau = list(range(n))
    # u -> 0, 0..u-1 shift up by one, everything above u stays.
    for k in range(u):
        tau[k] = k + 1
    tau[u] = 0
    out = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            out[tau[x]][tau[y]] = tau[g[rho_inv[x]][kappa_inv[y]]]
    return Loop(LatinSquare(out))


def _find_witness(H: Loop, x: int, A: Sequence[int], B: Sequence[int]) -> Optional[Witness]:
    g = H.table.grid
    for y in A:
        for yb in B:
            if g[y][yb] == x:
                return Witness(x, y, yb, "AB")
            if g[yb][y] == x:
                return Witness(x, y, yb, "BA")
    return None


def tripling(Q: Loop, n: int) -> tuple[Loop, TriplingStage]:
    """Glue two copies of a full loop of order m into a full loop of order n in [3m-2, 4m-3]."""
    m = Q.order
    if m < 5:
        raise IntervalViolated(f"base loop must have order >= 5, got {m}")
    if not 3 * m - 2 <= n <= 4 * m - 3:
        raise IntervalViolated(f"order {n} outside [{3 * m - 2}, {4 * m - 3}]")
    q = Q.table.grid
    # In layout coordinates the shared cell is index m-1; copy A puts Q's identity there.
    phi = [m - 1] + list(range(m - 1))
    phi_inv = [0] * m
    for k, v in enumerate(phi):
        phi_inv[v] = k
    A = [[phi[q[phi_inv[i]][phi_inv[j]]] for j in range(m)] for i in range(m)]
    B = [[q[i][j] + m - 1 for j in range(m)] for i in range(m)]
    res = build_overlapping(n, m, m, 1, A, B)
    H = _normalize_at(res.square, m - 1)
    # After normalisation A's elements are 0..m-1 and B's are 0, m..2m-2.
    iso_a = tuple(range(m))
    iso_b = tuple([0] + list(range(m, 2 * m - 1)))
    a_set, b_set = frozenset(iso_a), frozenset(iso_b)
    A_el = sorted(a_set - {0})
    B_el = sorted(b_set - {0})
    witnesses = []
    for x in range(n):
        if x in a_set or x in b_set:
            continue
        w = _find_witness(H, x, A_el, B_el)
        if w is None:
            raise WitnessMissing(f"element {x} is not a product across the two copies")
        witnesses.append(w)
    return H, TriplingStage(H, m, a_set, b_set, iso_a, iso_b, tuple(witnesses))


def _pick_base_order(n: int) -> int:
    return max(5, -(-(n + 3) // 4))


def build_full_loop(n: int, seed: int = 0) -> tuple[Loop, FullLoopCertificate]:
    """A loop of order n with P(Q) = Q, together with a certificate chain.

    Seed 0 uses the stored base loops (which are what a seed-0 search finds);
    any other seed searches afresh for base loops of order 6..12.
    """
    if n < 1:
        raise ImpossibleOrder(f"order {n} is not positive")
    if n == 1:
        L = trivial_loop()
        return L, FullLoopCertificate([BaseStage(L)])
    if n < 5:
        raise ImpossibleOrder(f"every loop of order {n} is an abelian group, so P(Q) is a single element")
    if n <= 12:
        L = base_loop(n) if seed == 0 else search_full_loop(n, seed)
        return L, FullLoopCertificate([BaseStage(L)])
    m = _pick_base_order(n)
    prev, cert = build_full_loop(m, seed)
    H, stage = tripling(prev, n)
    cert.stages.append(stage)
    return H, cert


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_embedding(prev: Loop, H: Loop, iso: Sequence[int], image: frozenset[int]) -> Optional[str]:
    m = prev.order
    if len(iso) != m or len(set(iso)) != m or frozenset(iso) != image:
        return "embedding is not a bijection onto the stated subloop"
    if any(not 0 <= v < H.order for v in iso):
        return "embedding leaves the loop"
    p, h = prev.table.grid, H.table.grid
    for x in range(m):
        for y in range(m):
            if h[iso[x]][iso[y]] != iso[p[x][y]]:
                return f"embedding is not multiplicative at ({x}, {y})"
    return None


def verify_certificate(H: Loop, cert: FullLoopCertificate, capacity: int = DEFAULT_CAPACITY) -> CertificateCheck:
    if not cert.stages:
        return CertificateCheck(False, "empty certificate")
    if not isinstance(cert.stages[0], BaseStage):
        return CertificateCheck(False, "chain must start with a base loop")
    if cert.stages[-1].loop.table != H.table:
        return CertificateCheck(False, "final stage does not describe this loop")
    for i, st in enumerate(cert.stages):
        if isinstance(st, BaseStage):
            if i != 0:
                return CertificateCheck(False, f"stage {i}: base stage after the start")
            if st.order > capacity:
                return CertificateCheck(False, f"stage {i}: base order {st.order} above capacity")
            if not is_full(st.loop, capacity):
                return CertificateCheck(False, f"stage {i}: base loop is not full")
            continue
        prev = cert.stages[i - 1].loop
        m, n = prev.order, st.order
        if st.prev_order != m or m < 5 or not 3 * m - 2 <= n <= 4 * m - 3:
            return CertificateCheck(False, f"stage {i}: order {n} not in [3m-2, 4m-3] for m={m}")
        if st.a_set & st.b_set != {0}:
            return CertificateCheck(False, f"stage {i}: copies must meet exactly in the identity")
        for name, iso, image in (("A", st.iso_a, st.a_set), ("B", st.iso_b, st.b_set)):
            err = _check_embedding(prev, st.loop, iso, image)
            if err:
                return CertificateCheck(False, f"stage {i}: copy {name}: {err}")
        g = st.loop.table.grid
        covered = set(st.a_set | st.b_set)
        for w in st.witnesses:
            if w.y not in st.a_set or w.ybar not in st.b_set:
                return CertificateCheck(False, f"stage {i}: witness for {w.x} uses elements outside the copies")
            got = g[w.y][w.ybar] if w.side == "AB" else g[w.ybar][w.y] if w.side == "BA" else None
            if got != w.x:
                return CertificateCheck(False, f"stage {i}: witness for {w.x} is wrong")
            covered.add(w.x)
        if len(covered) != n:
            return CertificateCheck(False, f"stage {i}: elements without witnesses: {sorted(set(range(n)) - covered)}")
    return CertificateCheck(True, "ok")


# -- certificate text format -------------------------------------------------

def _ints(xs: Iterable[int]) -> str:
    return " ".join(map(str, xs))


def format_certificate(cert: FullLoopCertificate) -> str:
    out = ["full-loop-certificate", f"stages {len(cert.stages)}"]
    for st in cert.stages:
        if isinstance(st, BaseStage):
            out.append(f"stage base {st.order}")
        else:
            out.append(f"stage tripling {st.order} {st.prev_order}")
            out.append(f"A {_ints(sorted(st.a_set))}")
            out.append(f"B {_ints(sorted(st.b_set))}")
            out.append(f"iso-A {_ints(st.iso_a)}")
            out.append(f"iso-B {_ints(st.iso_b)}")
            out.append(f"witnesses {len(st.witnesses)}")
            out.extend(f"{w.x} {w.y} {w.ybar} {w.side}" for w in st.witnesses)
        out.append(format_square(st.loop.table).rstrip("\n"))
    out.append("end")
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> FullLoopCertificate:
    lines = text.split("\n")
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError("certificate ends early")
        pos += 1
        return lines[pos - 1]

    def ints(line: str, tag: str) -> list[int]:
        parts = line.split(" ")
        if parts[0] != tag:
            raise ParseError(f"expected {tag!r}, got {line!r}")
        try:
            return [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise ParseError(f"bad integer in {line!r}") from exc

    def table() -> Loop:
        head = take()
        k = int(head)
        body = [take() for _ in range(k)]
        return Loop(parse_square("\n".join([head] + body) + "\n"))

    if take() != "full-loop-certificate":
        raise ParseError("not a full-loop certificate")
    (count,) = ints(take(), "stages")
    stages = []
    for _ in range(count):
        head = take().split(" ")
        if head[:2] == ["stage", "base"]:
            stages.append(BaseStage(table()))
        elif head[:2] == ["stage", "tripling"]:
            prev_order = int(head[3])
            a_set = frozenset(ints(take(), "A"))
            b_set = frozenset(ints(take(), "B"))
            iso_a = tuple(ints(take(), "iso-A"))
            iso_b = tuple(ints(take(), "iso-B"))
            (k,) = ints(take(), "witnesses")
            ws = []
            for _ in range(k):
                x, y, yb, side = take().split(" ")
                ws.append(Witness(int(x), int(y), int(yb), side))
            stages.append(TriplingStage(table(), prev_order, a_set, b_set, iso_a, iso_b, tuple(ws)))
        else:
            raise ParseError(f"unknown stage header {' '.join(head)!r}")
    if take() != "end":
        raise ParseError("missing 'end'")
    return FullLoopCertificate(stages)
