import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latinsub.core import LatinSquare, PartialArray, cyclic_square, partial_from_rows
from latinsub.errors import ConditionViolated, EmptyCellPresent, SearchBudgetExceeded
from latinsub.oracle import all_latin_squares, extensions
from latinsub.ryser import (
    complete_partial,
    complete_to_square,
    random_latin_square,
    ryser_check,
    square_from_block,
)

from conftest import random_filled_array


def agrees(L, R):
    return all(L.grid[r][c] == s for r, c, s in R.filled_cells())


def test_check_examples():
    rep = ryser_check(partial_from_rows([[0, 1], [1, 2]], 3))
    assert rep.threshold == 1
    assert [rep.counts[i] for i in range(3)] == [1, 2, 1]
    assert rep.ok
    rep = ryser_check(partial_from_rows([[0, 1], [1, 0]], 3))
    assert rep.counts[2] == 0 and rep.violating == {2}


def test_check_small_arrays_always_pass():
    rng = random.Random(5)
    for _ in range(200):
        rows, n = random_filled_array(rng)
        R = partial_from_rows(rows, n)
        if R.rows + R.cols <= n:
            assert ryser_check(R).ok


def test_check_rejects_empty_cells():
    with pytest.raises(EmptyCellPresent):
        ryser_check(partial_from_rows([[0, None]], 3))


def test_report_invariants():
    rng = random.Random(11)
    for _ in range(100):
        rows, n = random_filled_array(rng)
        R = partial_from_rows(rows, n)
        rep = ryser_check(R)
        assert sum(rep.counts.values()) == R.rows * R.cols
        assert rep.violating == {i for i, g in rep.counts.items() if g < rep.threshold}


def test_complete_examples():
    R = partial_from_rows([[0, 1], [1, 2]], 3)
    L = complete_to_square(R)
    assert agrees(L, R)
    Z = cyclic_square(5)
    assert complete_to_square(PartialArray(Z.grid, 5)) == Z
    L = complete_to_square(partial_from_rows([[0]], 2))
    assert L.grid == ((0, 1), (1, 0))
    with pytest.raises(ConditionViolated):
        complete_to_square(partial_from_rows([[0, 1], [1, 0]], 3))


def test_complete_is_deterministic():
    R = partial_from_rows([[0, 1, 2], [2, 0, 3]], 6)
    assert complete_to_square(R) == complete_to_square(R)


def test_complete_with_larger_order():
    L = square_from_block([[0, 1], [1, 0]], 4)
    assert L.order == 4 and L.grid[0][:2] == (0, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_complete_iff_condition(seed):
    rows, n = random_filled_array(random.Random(seed))
    R = partial_from_rows(rows, n)
    if ryser_check(R).ok:
        L = complete_to_square(R)
        assert L.order == n and agrees(L, R)
    else:
        with pytest.raises(ConditionViolated):
            complete_to_square(R)


def test_failures_unsatisfiable_at_small_order():
    rng = random.Random(2024)
    seen = 0
    while seen < 40:
        rows, n = random_filled_array(rng, max_side=5, max_n=5)
        R = partial_from_rows(rows, n)
        if ryser_check(R).ok:
            continue
        seen += 1
        assert complete_partial(R) is None
        assert next(extensions(R, n), None) is None


def test_complete_partial_examples():
    L = complete_partial(PartialArray((), 3))
    assert L is not None and L.order == 3
    Z = cyclic_square(4)
    assert complete_partial(PartialArray(Z.grid, 4)) == Z
    assert complete_partial(partial_from_rows([[0, 1], [1, 0]], 3)) is None


def test_complete_partial_respects_filled_cells():
    R = partial_from_rows([[None, 2, None], [1, None, None], [None, None, 0]], 5)
    L = complete_partial(R)
    assert L is not None and agrees(L, R)


def test_complete_partial_matches_exhaustive_at_order_4():
    rng = random.Random(7)
    squares = all_latin_squares(4)
    for _ in range(150):
        cells = [[None] * 4 for _ in range(4)]
        for _ in range(rng.randint(0, 7)):
            r, c, s = rng.randrange(4), rng.randrange(4), rng.randrange(4)
            if s in cells[r] or s in [cells[i][c] for i in range(4)]:
                continue
            cells[r][c] = s
        R = partial_from_rows(cells, 4)
        want = any(all(g[r][c] == s for r, c, s in R.filled_cells()) for g in squares)
        got = complete_partial(R)
        assert (got is not None) == want
        if got is not None:
            assert agrees(got, R)


def test_budget():
    # Filling an empty order-9 square visits one node per cell at least.
    with pytest.raises(SearchBudgetExceeded):
        complete_partial(PartialArray((), 9), budget=30)
    assert complete_partial(PartialArray((), 9), budget=10_000) is not None


def test_random_squares_vary_with_seed():
    A = random_latin_square(6, random.Random(1))
    B = random_latin_square(6, random.Random(2))
    assert isinstance(A, LatinSquare) and A != B
    assert random_latin_square(6, random.Random(1)) == A
