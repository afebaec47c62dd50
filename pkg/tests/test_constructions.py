"""Named constructions, closure operations, and the binary embedding."""

from fractions import Fraction

import mpmath
import pytest

from pivotgrowth import (
    PivotStrategy,
    RationalMatrix,
    binary_embed,
    border,
    cp_kron_h1,
    eliminate,
    eliminate_block,
    embedded_trailing_block,
    embedding_error,
    is_pivoted,
    kron,
    rp_kron,
    sylvester_hadamard,
    tornheim_complex3,
    wilkinson_pp_matrix,
)
from pivotgrowth.errors import NotCP, NotNormalized, NotRookPivoted

from conftest import random_pivoted_matrix


def test_kron_hand_computed():
    a = RationalMatrix([[1, 2], [3, 4]])
    b = RationalMatrix([[0, 1], [1, 0]])
    got = kron(a, b)
    assert got.rows[0] == (0, 1, 0, 2)
    assert got.rows[3] == (3, 0, 4, 0)


def test_sylvester_hadamard_is_cp_with_growth_2k():
    for k in range(4):
        h = sylvester_hadamard(k)
        assert h.n == 2 ** k
        assert all(abs(v) == 1 for row in h.rows for v in row)
        assert is_pivoted(h, PivotStrategy.COMPLETE)
        assert eliminate(h).growth == 2 ** k


def test_wilkinson_pp_matrix():
    for n in (2, 5, 9):
        w = wilkinson_pp_matrix(n)
        assert is_pivoted(w, PivotStrategy.PARTIAL)
        assert eliminate(w).growth == 2 ** (n - 1)
    assert wilkinson_pp_matrix(1) == RationalMatrix([[1]])


def test_tornheim_complex3():
    # oracle: closed-form growth 16 / (3 * sqrt(3))
    res = tornheim_complex3(precision=256)
    with mpmath.workprec(300):
        expected = mpmath.mpf(16) / (3 * mpmath.sqrt(3))
        assert abs(res.growth - expected) < mpmath.mpf(2) ** -200
    assert res.is_complete_pivoted(mpmath.mpf(2) ** -200)
    assert res.entries[0][0] == 1


def test_cp_kron_h1(rng):
    with pytest.raises(NotCP):
        cp_kron_h1(RationalMatrix([[1, 2], [0, 1]]))
    a = random_pivoted_matrix(rng, 3, PivotStrategy.COMPLETE)
    out = cp_kron_h1(a)
    assert out.n == 6
    assert is_pivoted(out, PivotStrategy.COMPLETE)
    assert eliminate(out).growth >= 2 * eliminate(a).growth


def test_rp_kron(rng):
    bad = RationalMatrix([[1, 2], [0, 1]])
    good = random_pivoted_matrix(rng, 2, PivotStrategy.ROOK)
    with pytest.raises(NotRookPivoted) as exc:
        rp_kron(bad, good)
    assert exc.value.which == "first"
    with pytest.raises(NotRookPivoted) as exc:
        rp_kron(good, bad)
    assert exc.value.which == "second"

    a = random_pivoted_matrix(rng, 3, PivotStrategy.ROOK)
    b = random_pivoted_matrix(rng, 2, PivotStrategy.ROOK)
    out = rp_kron(a, b)
    assert is_pivoted(out, PivotStrategy.ROOK)
    ta = eliminate(a)
    assert eliminate(out).growth >= ta.growth
    assert eliminate(out).growth >= \
        abs(ta.pivots[-1]) / a.max_abs() * eliminate(b).growth
    # the iterate after b.n steps is exactly (second level of a) tensor b
    a2 = RationalMatrix(ta.level(2))
    assert eliminate_block(out, b.n) == kron(a2, b)


def test_border(rng):
    a = random_pivoted_matrix(rng, 4, PivotStrategy.COMPLETE)
    out = border(a)
    assert out.n == 5
    assert out[0, 0] == 1 and all(out[0, j] == 0 for j in range(1, 5))
    assert is_pivoted(out, PivotStrategy.COMPLETE)
    assert eliminate(out).growth == eliminate(a).growth


# -- binary embedding --------------------------------------------------------


def _assert_binary(B):
    assert all(v in (0, 1) for row in B.rows for v in row)


def test_binary_embed_preconditions():
    with pytest.raises(NotNormalized):
        binary_embed(RationalMatrix([[2]]))
    with pytest.raises(NotNormalized):
        binary_embed(RationalMatrix([[1, 0], [0, 2]]))
    with pytest.raises(NotCP):
        # level-2 pivot 1/4 is dominated by its neighbor 1/2
        binary_embed(RationalMatrix([
            [1, 0, 0], [0, "1/4", "1/2"], [0, "1/2", "1/4"]
        ]))


def test_binary_embed_shapes_and_error_bound():
    for A in (RationalMatrix([[1]]), sylvester_hadamard(1)):
        B, plan = binary_embed(A)
        n = A.n
        assert plan.m == 4 * n * (3 * n + 1) + 1
        assert B.n == plan.m
        _assert_binary(B)
        err = embedding_error(A, B, plan)
        assert err <= Fraction(1, 2 ** (3 * n))
        # the realized trailing block equals the plan's exact target
        assert embedded_trailing_block(B, plan) == plan.target_block()


def test_binary_embed_dyadic_is_exact():
    # dyadic entries with short expansions reproduce -A exactly
    A = RationalMatrix([["1", "1/2"], ["-1/2", "3/4"]])
    assert is_pivoted(A, PivotStrategy.COMPLETE)
    B, plan = binary_embed(A)
    _assert_binary(B)
    assert embedding_error(A, B, plan) == 0


def test_binary_embed_negative_one_entry():
    A = RationalMatrix([["1", "-1"], ["-1", "1/2"]])
    assert is_pivoted(A, PivotStrategy.COMPLETE)
    B, plan = binary_embed(A)
    assert embedding_error(A, B, plan) <= Fraction(1, 2 ** (3 * A.n))
