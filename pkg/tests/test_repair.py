"""Exact repair of nearly-pivoted matrices and its guarantees."""

from fractions import Fraction

import pytest

from pivotgrowth import (
    PivotStrategy,
    RationalMatrix,
    cp_repair,
    eliminate,
    is_pivoted,
    perturbation_margin,
    repair_degradation_bound,
    rook_repair,
    sylvester_hadamard,
)
from pivotgrowth.errors import NotCP
from pivotgrowth.repair import rational_sqrt_up

from conftest import random_pivoted_matrix


def perturb(matrix, rng, scale=10 ** 10, width=100):
    deltas = rng.integers(-width, width + 1, size=(matrix.n, matrix.n))
    return RationalMatrix(
        [[matrix[i, j] + Fraction(int(deltas[i, j]), scale)
          for j in range(matrix.n)] for i in range(matrix.n)]
    )


def test_rational_sqrt_up():
    assert rational_sqrt_up(Fraction(9, 4)) == Fraction(3, 2)  # exact square
    x = Fraction(2)
    r = rational_sqrt_up(x)
    assert r * r >= x
    assert r * r - x <= x * Fraction(1, 2 ** 40)


def test_already_pivoted_is_unchanged():
    h = sylvester_hadamard(2)
    cert = cp_repair(h)
    assert cert.matrix == h
    assert cert.growth == 4
    assert cert.source["inflation"] == "0"


def test_cp_repair_perturbed(rng):
    for n in (3, 5, 7):
        base = random_pivoted_matrix(rng, n, PivotStrategy.COMPLETE)
        noisy = perturb(base, rng)
        cert = cp_repair(noisy)
        assert is_pivoted(cert.matrix, PivotStrategy.COMPLETE)
        # the final-pivot trajectory of the input is preserved exactly
        before, after = eliminate(noisy), eliminate(cert.matrix)
        for k in range(1, n + 1):
            assert after.entry(n, n, k) == before.entry(n, n, k)
        assert cert.growth == after.growth


def test_rook_repair_perturbed(rng):
    for n in (3, 5):
        base = random_pivoted_matrix(rng, n, PivotStrategy.ROOK)
        noisy = perturb(base, rng)
        cert = rook_repair(noisy)
        assert is_pivoted(cert.matrix, PivotStrategy.ROOK)
        before, after = eliminate(noisy), eliminate(cert.matrix)
        for k in range(1, n + 1):
            assert after.entry(n, n, k) == before.entry(n, n, k)


def test_degradation_bound_properties(rng):
    assert repair_degradation_bound([Fraction(0)], [1, 1]) == 1
    assert repair_degradation_bound([], [1]) == 1
    b = repair_degradation_bound([Fraction(1, 100)], [2, 1, 1])
    assert b > 1
    # monotone in the slack
    b2 = repair_degradation_bound([Fraction(1, 10)], [2, 1, 1])
    assert b2 > b


def test_growth_loss_within_degradation_bound(rng):
    for n in (3, 4, 6):
        base = random_pivoted_matrix(rng, n, PivotStrategy.COMPLETE)
        noisy = perturb(base, rng)
        trace = eliminate(noisy)
        from pivotgrowth import pivot_slack
        slacks = pivot_slack(trace, PivotStrategy.COMPLETE)
        bound = repair_degradation_bound(slacks, trace.pivots)
        cert = cp_repair(noisy)
        assert cert.growth >= trace.growth / bound


def test_perturbation_margin():
    with pytest.raises(NotCP):
        perturbation_margin(RationalMatrix([[1, 2], [0, 1]]))
    # ties make the margin exactly zero
    assert perturbation_margin(RationalMatrix.identity(3)) == 0
    assert perturbation_margin(sylvester_hadamard(1)) == 0
    # strict dominance gives a positive margin
    m = RationalMatrix([[4, 1], [1, 2]])
    margin = perturbation_margin(m)
    assert margin > 0
    # perturbing every entry by the margin keeps the matrix CP
    worst = RationalMatrix([
        [m[0, 0] - margin, m[0, 1] + margin],
        [m[1, 0] + margin, m[1, 1] + margin],
    ])
    assert is_pivoted(worst, PivotStrategy.COMPLETE)


def test_perturbation_margin_n1():
    assert perturbation_margin(RationalMatrix([[6]])) == 3
