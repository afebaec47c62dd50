"""Exact elimination core: traces, slacks, permutation, reconstruction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pivotgrowth import (
    PivotStrategy,
    RationalMatrix,
    eliminate,
    eliminate_block,
    is_pivoted,
    permute_for_strategy,
    pivot_slack,
    reconstruct,
    sylvester_hadamard,
    to_fraction,
)
from pivotgrowth.errors import ParseError, Singular, ZeroPivot
from pivotgrowth.rational import format_fraction

from conftest import random_rational_matrix


# -- rationals ---------------------------------------------------------------


def test_to_fraction_forms():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction("1.25") == Fraction(5, 4)
    assert to_fraction(0.5) == Fraction(1, 2)
    assert to_fraction(7) == Fraction(7)
    with pytest.raises(TypeError):
        to_fraction(True)
    with pytest.raises(TypeError):
        to_fraction([1])


def test_format_fraction_round_trip():
    for v in (Fraction(3, 4), Fraction(-7), Fraction(0), Fraction(22, 7)):
        assert to_fraction(format_fraction(v)) == v


def test_matrix_json_round_trip():
    m = RationalMatrix([[1, "1/3"], ["-2/7", "0.5"]])
    assert RationalMatrix.from_json(m.to_json()) == m


def test_matrix_validation():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2]])
    with pytest.raises(ParseError):
        RationalMatrix.from_json_dict({"n": 2, "entries": [["1", "2"]]})
    with pytest.raises(ParseError):
        RationalMatrix.from_json("not json")


def test_matrix_operations():
    m = RationalMatrix([[1, 2], [3, -4]])
    assert m.max_abs() == 4
    assert m.scale(Fraction(1, 2))[1, 1] == -2
    assert m.transpose()[0, 1] == 3
    assert m.permuted([1, 0], [0, 1]).rows[0] == (3, -4)
    assert m.matmul(RationalMatrix.identity(2)) == m


# -- elimination -------------------------------------------------------------


def test_eliminate_hand_computed():
    # oracle: worked by hand. One step on [[2,1],[1,2]] gives 2 - 1/2 = 3/2.
    trace = eliminate(RationalMatrix([[2, 1], [1, 2]]))
    assert trace.pivots == (2, Fraction(3, 2))
    assert trace.entry(2, 2, 2) == Fraction(3, 2)
    assert trace.growth == 1  # 3/2 never exceeds the initial max of 2
    assert trace.multipliers[1][0] == Fraction(1, 2)


def test_hadamard_growth_doubles():
    # oracle: known closed form, growth of the 2^k Sylvester matrix is 2^k
    for k in range(4):
        trace = eliminate(sylvester_hadamard(k))
        assert trace.growth == 2 ** k


def test_zero_pivot_raises_with_step():
    with pytest.raises(ZeroPivot) as exc:
        eliminate(RationalMatrix([[0, 1], [1, 0]]))
    assert exc.value.k == 1


def test_eliminate_block_matches_trace_levels(rng):
    m = random_rational_matrix(rng, 5)
    trace = eliminate(m)
    for steps in range(5):
        block = eliminate_block(m, steps)
        assert block.rows == trace.level(steps + 1)
    with pytest.raises(ValueError):
        eliminate_block(m, 5)


def test_pivot_slack_signs():
    h = sylvester_hadamard(2)
    assert all(s <= 0 for s in pivot_slack(h, PivotStrategy.COMPLETE))
    # oracle: [[1,2],[0,1]] has slack 2/1 - 1 = 1 under CP
    bad = RationalMatrix([[1, 2], [0, 1]])
    assert pivot_slack(bad, PivotStrategy.COMPLETE) == (Fraction(1),)
    assert pivot_slack(bad, PivotStrategy.PARTIAL) == (Fraction(-1),)
    assert not is_pivoted(bad, PivotStrategy.COMPLETE)
    assert is_pivoted(bad, PivotStrategy.PARTIAL)


def test_permute_for_strategy_all_strategies(rng):
    for strategy in PivotStrategy:
        for n in (2, 3, 5):
            m = random_rational_matrix(rng, n)
            try:
                out, rp, cp = permute_for_strategy(m, strategy)
            except Singular:
                continue
            assert is_pivoted(out, strategy)
            assert out == m.permuted(rp, cp)
            assert sorted(rp) == list(range(n)) and sorted(cp) == list(range(n))


def test_permute_singular_raises():
    with pytest.raises(Singular):
        permute_for_strategy(
            RationalMatrix([[1, 1], [1, 1]]), PivotStrategy.NONE
        )


def test_strategy_parse_aliases():
    assert PivotStrategy.parse("cp") is PivotStrategy.COMPLETE
    assert PivotStrategy.parse("RP") is PivotStrategy.ROOK
    assert PivotStrategy.parse("partial") is PivotStrategy.PARTIAL
    with pytest.raises(ValueError):
        PivotStrategy.parse("gauss")


# -- reconstruction (property-based) -----------------------------------------


@st.composite
def small_matrices(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    grid = draw(st.lists(
        st.lists(st.integers(-8, 8), min_size=n, max_size=n),
        min_size=n, max_size=n,
    ))
    return RationalMatrix([[Fraction(v, 4) for v in row] for row in grid])


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_reconstruct_is_exact_inverse(m):
    # oracle: L*U must reproduce the input bit-for-bit whenever
    # elimination completes
    try:
        trace = eliminate(m)
    except ZeroPivot:
        return
    assert reconstruct(trace) == m


@settings(max_examples=100, deadline=None)
@given(small_matrices(), st.fractions(min_value="-8", max_value="8"))
def test_growth_and_slack_are_scale_invariant(m, c):
    if c == 0:
        return
    try:
        trace = eliminate(m)
    except ZeroPivot:
        return
    scaled = eliminate(m.scale(c))
    assert scaled.growth == trace.growth
    for strategy in (PivotStrategy.COMPLETE, PivotStrategy.ROOK):
        assert pivot_slack(scaled, strategy) == pivot_slack(trace, strategy)
