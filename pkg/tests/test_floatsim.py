"""Bit-exact rounded-arithmetic elimination and the shadow construction."""

from fractions import Fraction

import pytest

from pivotgrowth import (
    FloatFormat,
    PivotStrategy,
    RationalMatrix,
    eliminate,
    float_eliminate,
    float_vs_exact_report,
    round_to,
    shadow_deviation_bound,
    shadow_matrix,
)
from pivotgrowth.errors import ZeroFloatPivot

from conftest import random_rational_matrix

FMT10 = FloatFormat(beta=2, t=10)


def _representable(fmt, lo, hi):
    """All format values in [lo, hi], brute force."""
    out = set()
    e = -fmt.t - 4
    while fmt.beta ** e <= hi:
        for q in range(fmt.beta ** (fmt.t - 1), fmt.beta ** fmt.t):
            for s in (1, -1):
                v = s * q * Fraction(fmt.beta) ** (e - fmt.t + 1)
                if lo <= v <= hi:
                    out.add(v)
        e += 1
    out.add(Fraction(0))
    return out


def test_round_to_is_nearest_with_even_ties():
    fmt = FloatFormat(beta=2, t=3)
    grid = sorted(_representable(fmt, Fraction(-4), Fraction(4)))
    for num in range(-64, 65):
        x = Fraction(num, 16)
        got = round_to(x, fmt)
        best = min(abs(x - v) for v in grid)
        assert abs(x - got) == best
        # ties resolve to the even mantissa
        candidates = [v for v in grid if abs(x - v) == best]
        if len(candidates) > 1:
            assert got in candidates
            gap = abs(candidates[0] - candidates[1])
            assert (abs(got) / gap) % 2 == 0


def test_round_to_fixed_points_and_boundary():
    fmt = FloatFormat(beta=2, t=4)
    for v in (Fraction(0), Fraction(1), Fraction(-15, 8), Fraction(3, 4)):
        assert round_to(v, fmt) == v
    # rounding across a power boundary: 1.9999 -> 2, not mantissa overflow
    assert round_to(Fraction(31999, 16000), fmt) == 2
    assert round_to(Fraction(-31999, 16000), fmt) == -2


def test_unit_roundoff_and_validation():
    assert FloatFormat(2, 10).unit_roundoff == Fraction(1, 2 ** 10)
    assert FloatFormat(10, 3).unit_roundoff == Fraction(1, 200)
    with pytest.raises(ValueError):
        FloatFormat(1, 10)


def test_recorded_perturbations_bounded_by_u(rng):
    m = random_rational_matrix(rng, 5, denominator=997)
    trace = float_eliminate(m, FMT10, PivotStrategy.PARTIAL)
    u = FMT10.unit_roundoff
    for grid in (trace.input_phis,) + trace.thetas + trace.phis:
        for row in grid:
            for p in (row if isinstance(row, tuple) else (row,)):
                assert abs(p) <= u
    for vp in trace.varphis:
        for p in vp:
            assert abs(p) <= u


def test_rounded_recurrence_identity(rng):
    # the recorded perturbations reproduce the rounded iterates exactly
    m = random_rational_matrix(rng, 4, denominator=997)
    trace = float_eliminate(m, FMT10, PivotStrategy.NONE)
    n = trace.n
    for k in range(1, n):
        piv = trace.entry(k, k, k)
        for i in range(k + 1, n + 1):
            s = trace.multipliers[i - 1][k - 1]
            exact_quot = trace.entry(i, k, k) / piv
            assert s == exact_quot * (1 + trace.varphis[k - 1][i - k - 1])
            for j in range(k + 1, n + 1):
                theta = trace.thetas[k - 1][i - k - 1][j - k - 1]
                phi = trace.phis[k - 1][i - k - 1][j - k - 1]
                prod = s * trace.entry(k, j, k) * (1 + theta)
                new = (trace.entry(i, j, k) - prod) * (1 + phi)
                assert trace.entry(i, j, k + 1) == new


def test_float_pivoting_follows_rounded_values():
    # 1 + 2^-11 is below half an ulp at t=10, so it rounds to exactly 1 and
    # the rounded column has a two-way pivot tie the exact column does not
    m = RationalMatrix([[1, 1], [Fraction(2 ** 11 + 1, 2 ** 11), 2]])
    trace = float_eliminate(m, FloatFormat(2, 10), PivotStrategy.PARTIAL)
    # 1 + 2^-11 rounds to 1, tying with row 0; the tie is recorded
    assert trace.ties == (1,)
    assert trace.row_perm == (0, 1)


def test_zero_float_pivot():
    with pytest.raises(ZeroFloatPivot):
        float_eliminate(RationalMatrix([[0, 1], [1, 0]]), FMT10,
                        PivotStrategy.NONE)


def test_shadow_matrix_matches_trace(rng):
    for _ in range(5):
        m = random_rational_matrix(rng, 6, denominator=997)
        trace = float_eliminate(m, FMT10, PivotStrategy.PARTIAL)
        exact = eliminate(shadow_matrix(trace))
        n = trace.n
        for k in range(1, n + 1):
            for j in range(k, n + 1):
                assert exact.entry(k, j, k) == trace.entry(k, j, k)
            for i in range(k + 1, n + 1):
                assert exact.entry(i, k, k) == trace.entry(i, k, k)
        # interior deviations obey the certified bound
        for k in range(1, n + 1):
            for i in range(k, n + 1):
                for j in range(k, n + 1):
                    dev = abs(exact.entry(i, j, k) - trace.entry(i, j, k))
                    assert dev <= shadow_deviation_bound(trace, i, j, k)


def test_float_vs_exact_report(rng):
    m = random_rational_matrix(rng, 4, denominator=997)
    rep = float_vs_exact_report(m, FMT10, PivotStrategy.NONE, C=Fraction(1, 2))
    assert rep.ratio == rep.float_growth / rep.exact_growth
    assert rep.within_factor == (rep.ratio <= Fraction(3, 2))
    doc = rep.to_json_dict()
    assert doc["beta"] == 2 and doc["t"] == 10
    assert float_vs_exact_report(m, FMT10).within_factor is None
