"""Turn nearly-pivoted matrices into exactly pivoted ones with certified growth.

The core routine walks the exact elimination pyramid backwards, scaling the
pivot row and column at each step just enough that the pivot dominates, and
propagates those scalings to every earlier iterate. The final-pivot
trajectory is preserved exactly, so the certified growth stays within an
explicit degradation factor of the input's growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .elimination import (
    EliminationTrace,
    PivotStrategy,
    eliminate,
    is_pivoted,
    pivot_slack,
)
from .errors import NotCP, ParseError, SlackTooLarge
from .rational import RationalMatrix, format_fraction, to_fraction


def rational_sqrt_up(x: Fraction, rel_tol_bits: int = 40) -> Fraction:
    """A rational r >= sqrt(x) with r*r - x <= 2**-rel_tol_bits * x.

    Exact when x is a perfect rational square. Any upper bound works for the
    repair; tightness only affects the inflation of the output matrix.
    """
    if x < 0:
        raise ValueError("negative argument")
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    # Scale so the integer square root carries ~2*rel_tol_bits significant bits.
    shift = max(0, (2 * rel_tol_bits + 4 - num.bit_length() - den.bit_length()) // 2 + 1)
    target = num * den << (2 * shift)
    root = math.isqrt(target)
    if root * root == target:
        return Fraction(root, den << shift)
    return Fraction(root + 1, den << shift)


@dataclass(frozen=True)
class GrowthCertificate:
    """An exactly pivoted rational matrix with its exactly computed growth."""

    matrix: RationalMatrix
    strategy: PivotStrategy
    growth: Fraction
    source: dict = field(default_factory=dict)
    verified_at_bits: int = 0

    def to_json_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "matrix": self.matrix.to_json_dict(),
            "growth": format_fraction(self.growth),
            "source": self.source,
            "verified_at_bits": self.verified_at_bits,
        }

    @classmethod
    def from_json_dict(cls, doc) -> "GrowthCertificate":
        try:
            strategy = PivotStrategy.parse(doc["strategy"])
            matrix = RationalMatrix.from_json_dict(doc["matrix"])
            growth = to_fraction(doc["growth"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad certificate document: {exc}") from exc
        return cls(
            matrix=matrix,
            strategy=strategy,
            growth=growth,
            source=dict(doc.get("source", {})),
            verified_at_bits=int(doc.get("verified_at_bits", 0)),
        )


class _Pyramid:
    """Mutable copy of an elimination pyramid with global-index access."""

    def __init__(self, trace: EliminationTrace):
        self.n = trace.n
        self.levels = [[list(row) for row in level] for level in trace.pyramid]

    def get(self, i, j, k):
        return self.levels[k - 1][i - k][j - k]

    def add(self, i, j, k, delta):
        self.levels[k - 1][i - k][j - k] += delta

    def scale(self, i, j, k, factor):
        self.levels[k - 1][i - k][j - k] *= factor

    def propagate(self, i, j, k, delta):
        """Add `delta` to entry (i, j) at every level before k."""
        for kk in range(1, k):
            self.add(i, j, kk, delta)

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.levels[0])


def _scale_pivot_row_col(pyr: _Pyramid, k: int, factor: Fraction):
    """Scale the step-k pivot by factor**2 and its row/column by factor,
    propagating the resulting entry changes to all earlier iterates."""
    n = pyr.n
    pivot_delta = (factor * factor - 1) * pyr.get(k, k, k)
    pyr.add(k, k, k, pivot_delta)
    pyr.propagate(k, k, k, pivot_delta)
    for j in range(k + 1, n + 1):
        delta = (factor - 1) * pyr.get(k, j, k)
        pyr.add(k, j, k, delta)
        pyr.propagate(k, j, k, delta)
    for i in range(k + 1, n + 1):
        delta = (factor - 1) * pyr.get(i, k, k)
        pyr.add(i, k, k, delta)
        pyr.propagate(i, k, k, delta)


def _repair(matrix: RationalMatrix, strategy: PivotStrategy,
            source=None) -> GrowthCertificate:
    trace = eliminate(matrix)
    input_slacks = pivot_slack(trace, strategy)
    if any(s < -1 for s in input_slacks):
        raise SlackTooLarge("pivot slack below -1")

    pyr = _Pyramid(trace)
    n = pyr.n
    for k in range(n - 1, 0, -1):
        pivot = abs(pyr.get(k, k, k))
        line_sq = max(
            [(pyr.get(k, j, k) / pivot) ** 2 for j in range(k + 1, n + 1)]
            + [(pyr.get(i, k, k) / pivot) ** 2 for i in range(k + 1, n + 1)]
        )
        if strategy is PivotStrategy.COMPLETE:
            block = max(
                abs(pyr.get(i, j, k)) / pivot
                for i in range(k + 1, n + 1) for j in range(k + 1, n + 1)
            )
            needed = max(line_sq, block)
            if needed > 1:
                _scale_pivot_row_col(pyr, k, rational_sqrt_up(needed))
        else:  # rook: only the pivot's row and column are constrained
            if line_sq > 1:
                # exact rational scale, no square root needed
                eps = max(
                    [abs(pyr.get(k, j, k)) / pivot for j in range(k + 1, n + 1)]
                    + [abs(pyr.get(i, k, k)) / pivot for i in range(k + 1, n + 1)]
                ) - 1
                _scale_pivot_row_col(pyr, k, 1 + eps)

    repaired = pyr.matrix()
    out_trace = eliminate(repaired)
    out_slacks = pivot_slack(out_trace, strategy)
    if any(s > 0 for s in out_slacks):
        raise AssertionError("repair failed to produce a pivoted matrix")

    info = dict(source or {})
    info.setdefault("kind", "local-search")
    info["input_growth"] = format_fraction(trace.growth)
    info["input_max_slack"] = format_fraction(max(input_slacks, default=Fraction(-1)))
    inflation = abs(repaired[0, 0] / matrix[0, 0]) - 1
    info["inflation"] = format_fraction(inflation)
    return GrowthCertificate(
        matrix=repaired,
        strategy=strategy,
        growth=out_trace.growth,
        source=info,
        verified_at_bits=out_trace.max_bits,
    )


def cp_repair(matrix: RationalMatrix, source=None) -> GrowthCertificate:
    """Convert a nearly completely pivoted matrix to an exactly CP one.

    The final-pivot trajectory is preserved exactly; an already-CP matrix
    comes back unchanged. Raises ZeroPivot if the exact elimination of the
    input hits a zero pivot.
    """
    return _repair(matrix, PivotStrategy.COMPLETE, source)


def rook_repair(matrix: RationalMatrix, source=None) -> GrowthCertificate:
    """Rook-pivoting analogue of cp_repair."""
    return _repair(matrix, PivotStrategy.ROOK, source)


def repair_degradation_bound(slacks, pivot_trajectory) -> Fraction:
    """Worst-case growth inflation 1 + gamma_1 of the repair.

    `slacks` are the per-step slacks of the input, `pivot_trajectory` the
    exact pivots a^(k)_{k,k}. The certified growth of the repaired matrix is
    at least the input growth divided by the returned value.
    """
    eps = max([Fraction(0)] + [to_fraction(s) for s in slacks])
    pivots = [abs(to_fraction(p)) for p in pivot_trajectory]
    if not pivots:
        raise ValueError("empty pivot trajectory")
    if eps == 0:
        return Fraction(1)
    first = pivots[0]
    gamma1 = Fraction(0)
    running = Fraction(0)
    for ell in range(len(pivots) - 1):
        candidate = eps * (2 + eps) * pivots[ell] + eps * running
        gamma1 = max(gamma1, candidate / first)
        running += pivots[ell]
    return 1 + gamma1


def perturbation_margin(matrix: RationalMatrix) -> Fraction:
    """Largest eps* such that every entrywise perturbation of magnitude at
    most eps* keeps the matrix completely pivoted.

    Requires the input to be exactly CP; ties in the pivot condition give a
    margin of exactly 0.
    """
    if not is_pivoted(matrix, PivotStrategy.COMPLETE):
        raise NotCP("perturbation margin needs an exactly CP matrix")
    trace = eliminate(matrix)
    n = trace.n
    if n == 1:
        return abs(matrix[0, 0]) / 2
    margin = None
    for k in range(1, n):
        level = trace.level(k)
        pivot = abs(level[0][0])
        max_off = max(
            abs(level[i][j])
            for i in range(len(level)) for j in range(len(level))
            if (i, j) != (0, 0)
        )
        step = (pivot - max_off) / (2 * Fraction(4) ** (k - 1))
        margin = step if margin is None else min(margin, step)
    return max(margin, Fraction(0))
