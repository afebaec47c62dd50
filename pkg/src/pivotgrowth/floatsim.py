"""Base-beta, t-digit floating-point Gaussian elimination, bit-exactly.

Rounded values are represented as exact rationals constrained to the
format, so the simulator is base-generic and reproducible without relying
on hardware float semantics. Every rounding's implied relative
perturbation (theta for products, phi for subtractions/input rounding,
varphi for multipliers) is recorded exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .elimination import PivotStrategy
from .errors import ZeroFloatPivot
from .rational import RationalMatrix, to_fraction


@dataclass(frozen=True)
class FloatFormat:
    """Base-beta floating point with a t-digit mantissa, round-to-nearest-even."""

    beta: int = 2
    t: int = 53

    def __post_init__(self):
        if self.beta < 2 or self.t < 1:
            raise ValueError("need beta >= 2 and t >= 1")

    @property
    def unit_roundoff(self) -> Fraction:
        return Fraction(1, 2 * self.beta ** (self.t - 1))


def round_to(x, fmt: FloatFormat) -> Fraction:
    """Nearest value with a t-digit base-beta mantissa; ties to even mantissa."""
    x = to_fraction(x)
    if x == 0:
        return Fraction(0)
    sign = -1 if x < 0 else 1
    mag = abs(x)
    beta, t = fmt.beta, fmt.t
    # exponent e with beta^e <= mag < beta^(e+1)
    e = math.floor(math.log(mag.numerator, beta) - math.log(mag.denominator, beta))
    while beta ** e > mag:
        e -= 1
    while beta ** (e + 1) <= mag:
        e += 1
    shift = e - t + 1  # mantissa = mag / beta^shift in [beta^(t-1), beta^t)
    scaled = mag * Fraction(beta) ** -shift
    q = scaled.numerator // scaled.denominator
    rem = scaled - q
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and q % 2 == 1):
        q += 1
    if q == beta ** t:  # rounded up across a power boundary
        q, shift = beta ** (t - 1), shift + 1
    return sign * q * Fraction(beta) ** shift


@dataclass(frozen=True)
class FloatTrace:
    """One simulated floating-point elimination run.

    pyramid[k-1][i-k][j-k] is the rounded iterate at step k (1-based
    global indices, like EliminationTrace); perturbations are keyed the
    same way. row_perm/col_perm map trace positions back to the input.
    """

    n: int
    fmt: FloatFormat
    pyramid: tuple
    multipliers: tuple          # s_{i,k} grid, strictly lower
    input_phis: tuple           # phi^(0): relative input-rounding perturbations
    thetas: tuple               # thetas[k-1][i][j] for the step-k update
    phis: tuple                 # phis[k-1][i][j]
    varphis: tuple              # varphis[k-1][i] for s_{i,k}
    row_perm: tuple
    col_perm: tuple
    ties: tuple                 # steps where the float pivot choice was a tie
    growth: Fraction
    max_abs_entry: Fraction

    def level(self, k: int):
        return self.pyramid[k - 1]

    def entry(self, i: int, j: int, k: int) -> Fraction:
        return self.pyramid[k - 1][i - k][j - k]

    @property
    def pivots(self):
        return tuple(self.pyramid[k][0][0] for k in range(self.n))


def _rel(observed: Fraction, exact: Fraction) -> Fraction:
    """Perturbation p with observed = exact * (1 + p)."""
    if exact == 0:
        return Fraction(0)
    return observed / exact - 1


def _float_select(level, strategy):
    """Pivot choice made on the rounded values; returns (i, j, tie?)."""
    size = len(level)
    if strategy is PivotStrategy.PARTIAL:
        best, best_i, tie = abs(level[0][0]), 0, False
        for i in range(1, size):
            a = abs(level[i][0])
            if a > best:
                best, best_i, tie = a, i, False
            elif a == best and a != 0:
                tie = True
        return best_i, 0, tie
    if strategy is PivotStrategy.COMPLETE:
        best, best_ij, tie = Fraction(-1), (0, 0), False
        for i in range(size):
            for j in range(size):
                a = abs(level[i][j])
                if a > best:
                    best, best_ij, tie = a, (i, j), False
                elif a == best:
                    tie = True
        return best_ij[0], best_ij[1], tie
    if strategy is PivotStrategy.ROOK:
        row_max = [max(abs(v) for v in row) for row in level]
        col_max = [max(abs(level[i][j]) for i in range(size)) for j in range(size)]
        for i in range(size):
            for j in range(size):
                a = abs(level[i][j])
                if a == row_max[i] and a == col_max[j]:
                    tie = sum(
                        1 for p in range(size) for q in range(size)
                        if abs(level[p][q]) == a
                    ) > 1
                    return i, j, tie
    return 0, 0, False


def _float_perms(level, fmt, strategy):
    """Run the rounded elimination once, only to fix the pivot order.

    Returns (row_perm, col_perm, ties). The recording pass then eliminates
    the fully permuted matrix without pivoting, so all trace levels share
    one coordinate system; the arithmetic is identical because each row's
    update sequence is independent of the other non-pivot rows.
    """
    n = len(level)
    level = [list(row) for row in level]
    row_perm, col_perm = list(range(n)), list(range(n))
    ties = []
    for k in range(n - 1):
        i0, j0, tie = _float_select(level, strategy)
        if tie:
            ties.append(k + 1)
        if i0:
            level[0], level[i0] = level[i0], level[0]
            row_perm[k], row_perm[k + i0] = row_perm[k + i0], row_perm[k]
        if j0:
            for row in level:
                row[0], row[j0] = row[j0], row[0]
            col_perm[k], col_perm[k + j0] = col_perm[k + j0], col_perm[k]
        pivot = level[0][0]
        if pivot == 0:
            raise ZeroFloatPivot(k + 1)
        size = n - k
        nxt = []
        for i in range(1, size):
            s = round_to(level[i][0] / pivot, fmt)
            nxt.append([
                round_to(level[i][j] - round_to(s * level[0][j], fmt), fmt)
                for j in range(1, size)
            ])
        level = nxt
    return tuple(row_perm), tuple(col_perm), tuple(ties)


def float_eliminate(A: RationalMatrix, fmt: FloatFormat,
                    strategy: PivotStrategy = PivotStrategy.NONE) -> FloatTrace:
    """Simulate elimination in the rounded model: each multiplication,
    division, and subtraction is individually rounded to the format.

    Pivot decisions (for non-NONE strategies) follow the rounded values --
    the float branch -- with index tie-breaking, and ties are recorded.
    The trace is expressed in the permuted coordinates, so every level is
    consistent with the final pivot order.
    """
    n = A.n
    rounded = [[round_to(v, fmt) for v in row] for row in A.rows]
    if strategy is PivotStrategy.NONE:
        row_perm, col_perm = tuple(range(n)), tuple(range(n))
        ties = ()
    else:
        row_perm, col_perm, ties = _float_perms(rounded, fmt, strategy)
        A = A.permuted(row_perm, col_perm)
    level = [[rounded[r][c] for c in col_perm] for r in row_perm]
    input_phis = tuple(
        tuple(_rel(level[i][j], A[i, j]) for j in range(n)) for i in range(n)
    )
    pyramid, thetas, phis, varphis = [], [], [], []
    multipliers = [[Fraction(0)] * n for _ in range(n)]
    max_abs = max(abs(v) for row in level for v in row)
    first_max = max_abs

    for k in range(n - 1):
        pyramid.append(tuple(tuple(row) for row in level))
        pivot = level[0][0]
        if pivot == 0:
            raise ZeroFloatPivot(k + 1)
        size = n - k
        nxt, th_k, ph_k, vp_k = [], [], [], []
        for i in range(1, size):
            exact_quot = level[i][0] / pivot
            s = round_to(exact_quot, fmt)
            vp_k.append(_rel(s, exact_quot))
            multipliers[i + k][k] = s
            row, th_row, ph_row = [], [], []
            for j in range(1, size):
                prod = round_to(s * level[0][j], fmt)
                th_row.append(_rel(prod, s * level[0][j]))
                diff = level[i][j] - prod
                new = round_to(diff, fmt)
                ph_row.append(_rel(new, diff))
                row.append(new)
                if abs(new) > max_abs:
                    max_abs = abs(new)
            nxt.append(row)
            th_k.append(tuple(th_row))
            ph_k.append(tuple(ph_row))
        thetas.append(tuple(th_k))
        phis.append(tuple(ph_k))
        varphis.append(tuple(vp_k))
        level = nxt
    pyramid.append(tuple(tuple(row) for row in level))
    if level[0][0] == 0:
        raise ZeroFloatPivot(n)

    return FloatTrace(
        n=n,
        fmt=fmt,
        pyramid=tuple(pyramid),
        multipliers=tuple(tuple(row) for row in multipliers),
        input_phis=input_phis,
        thetas=tuple(thetas),
        phis=tuple(phis),
        varphis=tuple(varphis),
        row_perm=row_perm,
        col_perm=col_perm,
        ties=ties,
        growth=max_abs / first_max,
        max_abs_entry=max_abs,
    )


def shadow_matrix(trace: FloatTrace) -> RationalMatrix:
    """Exact matrix B whose exact elimination reproduces the float trace on
    every pivot row and column.

    Built backwards: B^(n) is the final float iterate, and each earlier
    level keeps the float pivot row/column while correcting the interior by
    the exact rank-one update col * row / pivot.
    """
    n = trace.n
    B = [[trace.entry(n, n, n)]]
    for k in range(n - 1, 0, -1):
        lvl = trace.level(k)
        pivot = lvl[0][0]
        size = n - k + 1
        top = [lvl[0][j] for j in range(size)]
        col = [lvl[i][0] for i in range(1, size)]
        B = [top] + [
            [col[i]] + [B[i][j] + col[i] * top[j + 1] / pivot
                        for j in range(size - 1)]
            for i in range(size - 1)
        ]
    return RationalMatrix(B)


def shadow_deviation_bound(trace: FloatTrace, i: int, j: int, k: int) -> Fraction:
    """The lemma bound u * sum_{l=k}^{min(i,j)-1} [|a^(l)_{i,j}| +
    |a^(l)_{l,j}| (3+u)] on |shadow - float| at (i, j, k); 1-based indices."""
    u = trace.fmt.unit_roundoff
    total = Fraction(0)
    for ell in range(k, min(i, j)):
        total += abs(trace.entry(i, j, ell)) \
            + abs(trace.entry(ell, j, ell)) * (3 + u)
    return u * total


@dataclass(frozen=True)
class FloatComparison:
    """Exact vs rounded growth of one matrix."""

    n: int
    fmt: FloatFormat
    strategy: PivotStrategy
    exact_growth: Fraction
    float_growth: Fraction
    ratio: Fraction
    within_factor: bool | None = None
    C: Fraction | None = None
    ties: tuple = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        from .rational import format_fraction
        return {
            "n": self.n,
            "beta": self.fmt.beta,
            "t": self.fmt.t,
            "strategy": self.strategy.value,
            "exact_growth": format_fraction(self.exact_growth),
            "float_growth": format_fraction(self.float_growth),
            "ratio": format_fraction(self.ratio),
            "within_factor": self.within_factor,
            "C": None if self.C is None else format_fraction(self.C),
            "ties": list(self.ties),
        }


def float_vs_exact_report(A: RationalMatrix, fmt: FloatFormat,
                          strategy: PivotStrategy = PivotStrategy.NONE,
                          C=None) -> FloatComparison:
    """Compare g(A) (exact) with G(A) (rounded model); A must eliminate
    without hitting a zero pivot in its given order."""
    from .elimination import eliminate
    exact = eliminate(A).growth
    trace = float_eliminate(A, fmt, strategy)
    ratio = trace.growth / exact
    C = None if C is None else to_fraction(C)
    return FloatComparison(
        n=A.n,
        fmt=fmt,
        strategy=strategy,
        exact_growth=exact,
        float_growth=trace.growth,
        ratio=ratio,
        within_factor=None if C is None else ratio <= 1 + C,
        C=C,
        ties=trace.ties,
    )
