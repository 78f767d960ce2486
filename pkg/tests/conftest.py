import random

from hypothesis import strategies as st

from latinsub.ryser import random_latin_square


@st.composite
def latin_squares(draw, min_order=1, max_order=7):
    n = draw(st.integers(min_order, max_order))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_latin_square(n, random.Random(seed))


def brute_is_latin(block):
    """Every row and column of ``block`` holds the same symbol set, each once."""
    syms = set(block[0])
    if len(syms) != len(block) or len(block[0]) != len(block):
        return False
    for row in block:
        if set(row) != syms or len(set(row)) != len(row):
            return False
    for col in zip(*block):
        if set(col) != syms or len(set(col)) != len(col):
            return False
    return True


def random_filled_array(rng, max_side=6, max_n=9):
    """A random fully filled r x s array with no repeats, r, s <= max_side, n <= max_n.

    Half the arrays are corners of a random square on a w-symbol subset,
    w <= n, which fail the embedding condition whenever r + s > n and w < n.
    The other half are filled cell by cell.
    """
    while True:
        r = rng.randint(1, min(max_side, max_n))
        s = rng.randint(1, min(max_side, max_n))
        n = rng.randint(max(r, s), min(max_n, max(r, s) + 3))
        if rng.random() < 0.5:
            w = rng.randint(max(r, s), n)
            sq = random_latin_square(w, rng)
            names = rng.sample(range(n), w)
            return [[names[sq.grid[i][j]] for j in range(s)] for i in range(r)], n
        rows = []
        ok = True
        for i in range(r):
            row = []
            for j in range(s):
                used = set(row) | {rows[k][j] for k in range(i)}
                free = [x for x in range(n) if x not in used]
                if not free:
                    ok = False
                    break
                row.append(rng.choice(free))
            if not ok:
                break
            rows.append(row)
        if ok:
            return rows, n


# Acceptance criteria append "PASS ..."/"FAIL ..." lines here; they are
# repeated at the end of the pytest run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
