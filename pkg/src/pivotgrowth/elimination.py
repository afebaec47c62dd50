"""Exact rational Gaussian elimination.

The elimination recurrence

    a[i,j] at step k+1  =  a[i,j] - a[i,k] * a[k,j] / a[k,k]   (all at step k)

is evaluated in exact rational arithmetic, keeping the full pyramid of
iterates so growth and pivoting slack can be measured without tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import Singular, ZeroPivot
from .rational import RationalMatrix


class PivotStrategy(enum.Enum):
    NONE = "none"
    PARTIAL = "partial"
    ROOK = "rook"
    COMPLETE = "complete"

    @classmethod
    def parse(cls, name: str) -> "PivotStrategy":
        aliases = {
            "cp": cls.COMPLETE, "complete": cls.COMPLETE,
            "rp": cls.ROOK, "rook": cls.ROOK,
            "pp": cls.PARTIAL, "partial": cls.PARTIAL,
            "none": cls.NONE,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown pivot strategy {name!r}") from None


@dataclass(frozen=True)
class EliminationTrace:
    """Everything one exact elimination run produces.

    pyramid[k-1] is the (n-k+1)-square block of iterates at step k, so
    pyramid[k-1][i-k][j-k] holds the (i,j) entry at step k (1-based i,j,k).
    """

    n: int
    pyramid: tuple
    pivots: tuple
    multipliers: tuple          # strictly-lower entries of L, full n-by-n grid
    max_abs_entry: Fraction
    growth: Fraction
    max_bits: int               # largest numerator/denominator bit length seen

    def level(self, k: int):
        """Iterates at step k (1-based)."""
        return self.pyramid[k - 1]

    def entry(self, i: int, j: int, k: int) -> Fraction:
        """a^(k)_{i,j} with 1-based indices, k <= min(i, j)."""
        return self.pyramid[k - 1][i - k][j - k]


def eliminate(matrix: RationalMatrix) -> EliminationTrace:
    """Run exact Gaussian elimination without pivoting.

    Raises ZeroPivot(k) if a zero pivot is hit at step k < n; the caller is
    expected to permute first (see permute_for_strategy).
    """
    n = matrix.n
    level = [list(row) for row in matrix.rows]
    max_level1 = matrix.max_abs()
    if max_level1 == 0:
        raise ZeroPivot(1)

    pyramid = [tuple(tuple(row) for row in level)]
    pivots = [level[0][0]]
    multipliers = [[Fraction(0)] * n for _ in range(n)]
    max_abs = max_level1
    max_bits = matrix.max_bit_length()

    for k in range(n - 1):
        pivot = level[0][0]
        if pivot == 0:
            raise ZeroPivot(k + 1)
        size = n - k
        nxt = []
        for i in range(1, size):
            mult = level[i][0] / pivot
            multipliers[i + k][k] = mult
            nxt.append([level[i][j] - mult * level[0][j] for j in range(1, size)])
        for row in nxt:
            for v in row:
                a = abs(v)
                if a > max_abs:
                    max_abs = a
                bits = max(v.numerator.bit_length(), v.denominator.bit_length())
                if bits > max_bits:
                    max_bits = bits
        pivots.append(nxt[0][0])
        pyramid.append(tuple(tuple(row) for row in nxt))
        level = nxt

    return EliminationTrace(
        n=n,
        pyramid=tuple(pyramid),
        pivots=tuple(pivots),
        multipliers=tuple(tuple(row) for row in multipliers),
        max_abs_entry=max_abs,
        growth=max_abs / max_level1,
        max_bits=max_bits,
    )


def eliminate_block(matrix: RationalMatrix, steps: int) -> RationalMatrix:
    """Remaining (n-steps)-square block after `steps` elimination steps.

    Memory-light variant of eliminate() for large structured matrices.
    """
    n = matrix.n
    if not 0 <= steps < n:
        raise ValueError("steps must be in [0, n)")
    level = [list(row) for row in matrix.rows]
    for k in range(steps):
        pivot = level[0][0]
        if pivot == 0:
            raise ZeroPivot(k + 1)
        size = n - k
        level = [
            [level[i][j] - level[i][0] * level[0][j] / pivot for j in range(1, size)]
            for i in range(1, size)
        ]
    return RationalMatrix(level)


def _constrained_entries(level, k0, strategy):
    """Magnitude-constrained entries at step k0+1 (0-based k0), excluding the pivot."""
    size = len(level)
    if strategy is PivotStrategy.COMPLETE:
        return [level[i][j] for i in range(size) for j in range(size)
                if (i, j) != (0, 0)]
    if strategy is PivotStrategy.ROOK:
        return [level[0][j] for j in range(1, size)] + \
               [level[i][0] for i in range(1, size)]
    if strategy is PivotStrategy.PARTIAL:
        return [level[i][0] for i in range(1, size)]
    return []


def pivot_slack(matrix, strategy: PivotStrategy):
    """Per-step slack eps_k = max constrained magnitude / pivot magnitude - 1.

    The matrix is strategy-pivoted iff every eps_k <= 0 (exact comparison).
    Steps with no constrained entries (strategy NONE) report -1. Accepts a
    RationalMatrix or a precomputed EliminationTrace.
    """
    trace = matrix if isinstance(matrix, EliminationTrace) else eliminate(matrix)
    slacks = []
    for k in range(trace.n - 1):
        pivot = trace.pivots[k]
        if pivot == 0:
            raise ZeroPivot(k + 1)
        entries = _constrained_entries(trace.pyramid[k], k, strategy)
        if not entries:
            slacks.append(Fraction(-1))
        else:
            slacks.append(max(abs(v) for v in entries) / abs(pivot) - 1)
    return tuple(slacks)


def is_pivoted(matrix, strategy: PivotStrategy) -> bool:
    """True iff elimination runs to completion and every slack is <= 0."""
    try:
        slacks = pivot_slack(matrix, strategy)
    except ZeroPivot:
        return False
    return all(s <= 0 for s in slacks)


def _select_pivot(level, strategy):
    """Pivot position for the current sub-block, with (row, col) tie-breaking
    by smallest row index then smallest column index."""
    size = len(level)
    if strategy is PivotStrategy.PARTIAL:
        best, best_i = abs(level[0][0]), 0
        for i in range(1, size):
            a = abs(level[i][0])
            if a > best:
                best, best_i = a, i
        return best_i, 0, best
    if strategy is PivotStrategy.COMPLETE:
        best, best_ij = Fraction(-1), (0, 0)
        for i in range(size):
            for j in range(size):
                a = abs(level[i][j])
                if a > best:
                    best, best_ij = a, (i, j)
        return best_ij[0], best_ij[1], best
    if strategy is PivotStrategy.ROOK:
        row_max = [max(abs(v) for v in row) for row in level]
        col_max = [max(abs(level[i][j]) for i in range(size)) for j in range(size)]
        for i in range(size):
            for j in range(size):
                a = abs(level[i][j])
                if a == row_max[i] and a == col_max[j]:
                    return i, j, a
        raise AssertionError("rook pivot search cannot come up empty")
    return 0, 0, abs(level[0][0])


def permute_for_strategy(matrix: RationalMatrix, strategy: PivotStrategy):
    """Permute rows/columns so the matrix needs no pivoting under `strategy`.

    Returns (permuted matrix, row_perm, col_perm) with
    out[i][j] = matrix[row_perm[i]][col_perm[j]]; the output satisfies
    is_pivoted(out, strategy). Raises Singular when no nonzero pivot exists
    at some step.
    """
    n = matrix.n
    row_perm = list(range(n))
    col_perm = list(range(n))
    level = [list(row) for row in matrix.rows]

    for k in range(n - 1):
        i, j, mag = _select_pivot(level, strategy)
        if mag == 0:
            raise Singular(f"no nonzero pivot available at step {k + 1}")
        if i != 0:
            level[0], level[i] = level[i], level[0]
            row_perm[k], row_perm[k + i] = row_perm[k + i], row_perm[k]
        if j != 0:
            for row in level:
                row[0], row[j] = row[j], row[0]
            col_perm[k], col_perm[k + j] = col_perm[k + j], col_perm[k]
        pivot = level[0][0]
        size = n - k
        level = [
            [level[r][c] - level[r][0] * level[0][c] / pivot for c in range(1, size)]
            for r in range(1, size)
        ]
    if level[0][0] == 0:
        raise Singular(f"no nonzero pivot available at step {n}")

    return matrix.permuted(row_perm, col_perm), tuple(row_perm), tuple(col_perm)


def reconstruct(trace: EliminationTrace) -> RationalMatrix:
    """Exact L*U product of a trace; equals the eliminated matrix bit-for-bit."""
    n = trace.n
    lower = [[Fraction(1) if i == j else trace.multipliers[i][j]
              for j in range(i + 1)] + [Fraction(0)] * (n - i - 1)
             for i in range(n)]
    upper = [[Fraction(0)] * i + [trace.entry(i + 1, j + 1, i + 1)
                                  for j in range(i, n)]
             for i in range(n)]
    return RationalMatrix(lower).matmul(RationalMatrix(upper))
