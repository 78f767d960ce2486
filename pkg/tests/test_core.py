import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latinsub.census import subsquare_counts
from latinsub.core import (
    COL_SYMBOL,
    IDENTITY,
    ROW_SYMBOL,
    TRANSPOSE,
    ConjugationPattern,
    LatinSquare,
    PartialArray,
    conjugate,
    cyclic_square,
    elementary_abelian_square,
    extract_subsquare,
    format_partial,
    format_square,
    is_reduced,
    is_subsquare,
    parse_partial,
    parse_square,
    product_square,
    reduce,
    validate,
)
from latinsub.errors import (
    ColumnDuplicate,
    NotASubsquare,
    ParseError,
    RowDuplicate,
    SymbolOutOfRange,
)
from latinsub.ryser import random_latin_square

from conftest import brute_is_latin, latin_squares


def test_validate_small_examples():
    assert validate([[0]]).order == 1
    assert validate(cyclic_square(3).grid).order == 3


def test_validate_reports_first_column_duplicate():
    with pytest.raises(ColumnDuplicate) as e:
        validate([[0, 1], [0, 1]])
    assert (e.value.row, e.value.col) == (1, 0)


def test_validate_row_duplicate_and_range():
    with pytest.raises(RowDuplicate) as e:
        validate([[0, 0], [1, 0]])
    assert (e.value.row, e.value.col) == (0, 1)
    with pytest.raises(SymbolOutOfRange):
        validate([[0, 2], [1, 0]])
    with pytest.raises(SymbolOutOfRange):
        validate([[0, -1], [1, 0]])


def test_order_zero_rejected():
    with pytest.raises(ParseError):
        LatinSquare(())
    with pytest.raises(ParseError):
        parse_square("0\n")


def test_non_square_grid_rejected():
    with pytest.raises(ParseError):
        LatinSquare([[0, 1]])


def test_conjugate_examples():
    L = random_latin_square(5, random.Random(3))
    assert conjugate(L, IDENTITY) == L
    Z = cyclic_square(6)
    assert conjugate(Z, TRANSPOSE) == Z
    assert conjugate(conjugate(L, ROW_SYMBOL), ROW_SYMBOL) == L
    assert conjugate(conjugate(L, COL_SYMBOL), COL_SYMBOL) == L


def test_conjugate_maps_triples():
    L = random_latin_square(4, random.Random(8))
    for p in ConjugationPattern.all():
        M = conjugate(L, p)
        want = {tuple(t[i] for i in p.perm) for t in L.triples()}
        assert set(M.triples()) == want


def test_bad_pattern():
    with pytest.raises(ValueError):
        ConjugationPattern((0, 0, 1))


@settings(max_examples=60, deadline=None)
@given(latin_squares(max_order=7))
def test_conjugates_are_latin_and_keep_subsquare_counts(L):
    counts = subsquare_counts(L)
    for p in ConjugationPattern.all():
        M = conjugate(L, p)
        validate(M.grid)
        assert subsquare_counts(M) == counts


def test_reduce_examples():
    Z = cyclic_square(5)
    assert reduce(Z) == Z
    Z3 = cyclic_square(3)
    for perm in [(1, 2, 0), (2, 0, 1), (0, 2, 1)]:
        assert reduce(Z3.permuted(col_perm=perm)) == Z3


@settings(max_examples=100, deadline=None)
@given(latin_squares(max_order=8))
def test_reduce_properties(L):
    R = reduce(L)
    assert is_reduced(R)
    assert reduce(R) == R
    # R's rows are L's rows with columns relabelled: recover L by permuting back.
    n = L.order
    col_perm = list(L.grid[0])
    step = L.permuted(col_perm=col_perm)
    rows_by_first = {step.grid[r][0]: r for r in range(n)}
    back = [None] * n
    for r in range(n):
        back[r] = rows_by_first[r]
    assert R.permuted(row_perm=back) == step
    inv_cols = [0] * n
    for c, target in enumerate(col_perm):
        inv_cols[target] = c
    assert step.permuted(col_perm=inv_cols) == L


def test_extract_examples():
    Z4 = cyclic_square(4)
    full = extract_subsquare(Z4, range(4), range(4))
    assert full.order == 4 and full.symbols == frozenset(range(4))
    h = extract_subsquare(Z4, {0, 2}, {0, 2})
    assert h.order == 2 and h.symbols == {0, 2}
    with pytest.raises(NotASubsquare):
        extract_subsquare(cyclic_square(3), {0, 1}, {0, 1})
    with pytest.raises(NotASubsquare):
        extract_subsquare(Z4, {0, 1}, {0})
    with pytest.raises(NotASubsquare):
        extract_subsquare(Z4, set(), set())


@settings(max_examples=40, deadline=None)
@given(latin_squares(min_order=2, max_order=6), st.data())
def test_extract_matches_brute_force(L, data):
    n = L.order
    m = data.draw(st.integers(1, n))
    rows = data.draw(st.sampled_from(list(combinations(range(n), m))))
    cols = data.draw(st.sampled_from(list(combinations(range(n), m))))
    block = [[L.grid[r][c] for c in cols] for r in rows]
    assert is_subsquare(L, rows, cols) == brute_is_latin(block)


def test_standard_tables():
    E = elementary_abelian_square(3)
    assert E.order == 8 and is_reduced(E)
    P = product_square(cyclic_square(2), cyclic_square(3))
    assert P.order == 6
    # Cosets of the second factor are order-3 subsquares.
    assert is_subsquare(P, {0, 1, 2}, {3, 4, 5})


def test_square_text_round_trip():
    L = random_latin_square(6, random.Random(1))
    text = format_square(L)
    assert text.endswith("\n") and text.startswith("6\n")
    assert parse_square(text) == L


@pytest.mark.parametrize("text", [
    "2\n0 1\n1 0",          # no trailing newline
    "2\n0 1\n1  0\n",       # double space
    "2\n0 1\n1 x\n",        # bad token
    "2\n0 1\n",             # missing row
    "2\n0 1 0\n1 0 1\n",    # wrong width
    "2\n+0 1\n1 0\n",       # sign
    "2\n0 1\n0 1\n",        # not latin
])
def test_square_parse_errors(text):
    with pytest.raises(ValueError):
        parse_square(text)


def test_partial_round_trip():
    R = PartialArray(((0, None, 2), (None, 0, None)), 4)
    text = format_partial(R)
    assert text == "2 3 4\n0 . 2\n. 0 .\n"
    assert parse_partial(text) == R
    assert not R.is_filled()
    assert sorted(R.filled_cells()) == [(0, 0, 0), (0, 2, 2), (1, 1, 0)]


def test_partial_rejects_bad_arrays():
    with pytest.raises(RowDuplicate):
        PartialArray(((0, 0),), 3)
    with pytest.raises(ParseError):
        PartialArray(((0, 1, 2),), 2)
    with pytest.raises(ParseError):
        parse_partial("1 2 3\n0 ,\n")
