"""The elimination pyramid as a flat optimization variable vector.

Variables are x_{i,j,k} for 1 <= k <= n, k <= i,j <= n, stored level by
level (level k holds the (n-k+1)-square iterate, row-major), so the single
level-n entry -- the final pivot, the search objective -- sits last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..elimination import PivotStrategy
from ..errors import DegenerateDraw

_PIVOT_EPS = 1e-10


def pyramid_size(n: int) -> int:
    return n * (n + 1) * (2 * n + 1) // 6


def level_offset(n: int, k: int) -> int:
    """Flat offset of level k (1-based); levels are stored k = 1..n."""
    return pyramid_size(n) - pyramid_size(n - k + 1)


def var_index(n: int, i: int, j: int, k: int) -> int:
    """Flat index of x_{i,j,k}, all 1-based."""
    size = n - k + 1
    return level_offset(n, k) + (i - k) * size + (j - k)


@dataclass
class PyramidCandidate:
    """A point in pyramid space with its constraint residual."""

    n: int
    x: np.ndarray
    residual: float
    restart: int = -1
    outer_iterations: int = 0
    converged: bool = True

    @property
    def objective(self) -> float:
        return float(self.x[-1])

    def level(self, k: int) -> np.ndarray:
        size = self.n - k + 1
        off = level_offset(self.n, k)
        return self.x[off:off + size * size].reshape(size, size)

    def matrix(self) -> np.ndarray:
        """The level-1 iterate, i.e. the candidate matrix itself."""
        return self.level(1)


def _float_cp_pyramid(A: np.ndarray):
    """Levels of the complete-pivoting float elimination of A, as the
    no-pivoting pyramid of the fully permuted matrix; None on a degenerate
    pivot."""
    n = A.shape[0]
    work = A.copy()
    row_perm, col_perm = list(range(n)), list(range(n))
    for k in range(n - 1):
        size = n - k
        i0, j0 = divmod(int(np.argmax(np.abs(work))), size)
        work[[0, i0], :] = work[[i0, 0], :]
        work[:, [0, j0]] = work[:, [j0, 0]]
        row_perm[k], row_perm[k + i0] = row_perm[k + i0], row_perm[k]
        col_perm[k], col_perm[k + j0] = col_perm[k + j0], col_perm[k]
        pivot = work[0, 0]
        if not np.isfinite(pivot) or abs(pivot) < _PIVOT_EPS:
            return None
        work = work[1:, 1:] - np.outer(work[1:, 0], work[0, 1:]) / pivot

    permuted = A[np.ix_(row_perm, col_perm)]
    levels = []
    work = permuted.copy()
    for k in range(n):
        levels.append(work.copy())
        pivot = work[0, 0]
        if not np.isfinite(pivot) or abs(pivot) < _PIVOT_EPS:
            return None
        if n - k > 1:
            work = work[1:, 1:] - np.outer(work[1:, 0], work[0, 1:]) / pivot
    return levels


def pyramid_from_matrix(A: np.ndarray) -> np.ndarray:
    """Flat pyramid vector from a float matrix eliminated in place (no
    pivoting); raises DegenerateDraw on a tiny pivot."""
    n = A.shape[0]
    x = np.empty(pyramid_size(n))
    work = np.array(A, dtype=float)
    for k in range(n):
        off = level_offset(n, k + 1)
        size = n - k
        x[off:off + size * size] = work.ravel()
        pivot = work[0, 0]
        if not np.isfinite(pivot) or abs(pivot) < _PIVOT_EPS:
            raise DegenerateDraw(f"pivot underflow at step {k + 1}")
        if size > 1:
            work = work[1:, 1:] - np.outer(work[1:, 0], work[0, 1:]) / pivot
    return x


def random_cp_start(n: int, rng: np.random.Generator) -> PyramidCandidate:
    """Pyramid of a random standard-normal matrix, permuted to be completely
    pivoted, normalized so x_{1,1,1} = 1, with all pivots flipped positive
    (a WLOG row-sign normalization)."""
    if n == 1:
        return PyramidCandidate(n=1, x=np.ones(1), residual=0.0)
    A = rng.standard_normal((n, n))
    levels = _float_cp_pyramid(A)
    if levels is None:
        raise DegenerateDraw("pivot underflow in starting elimination")
    scale = 1.0 / levels[0][0, 0]
    levels = [lvl * scale for lvl in levels]
    # row sign flips r_i make every pivot positive without touching |x|
    signs = np.ones(n)
    for k in range(n):
        if levels[k][0, 0] * signs[k] < 0:
            signs[k] = -1.0
    for k in range(n):
        levels[k] *= signs[k:, None]
    x = np.concatenate([lvl.ravel() for lvl in levels])
    cand = PyramidCandidate(n=n, x=x, residual=0.0)
    cand.residual = pyramid_residual(cand, PivotStrategy.COMPLETE)
    return cand


def pyramid_residual(candidate: PyramidCandidate,
                     strategy: PivotStrategy) -> float:
    """Max violation of the recurrence equalities and the strategy's
    pivoting inequalities (positive parts), plus pivot negativity."""
    n = candidate.n
    worst = 0.0
    for k in range(1, n + 1):
        lvl = candidate.level(k)
        pivot = lvl[0, 0]
        worst = max(worst, -pivot)
        if k < n:
            nxt = candidate.level(k + 1)
            if pivot != 0:
                update = lvl[1:, 1:] - np.outer(lvl[1:, 0], lvl[0, 1:]) / pivot
                worst = max(worst, float(np.max(np.abs(nxt - update))))
            else:
                worst = np.inf
        size = n - k + 1
        if size > 1 and strategy in (PivotStrategy.COMPLETE, PivotStrategy.ROOK):
            if strategy is PivotStrategy.COMPLETE or k == 1:
                # rook searches also anchor the scale at level 1
                constrained = np.abs(lvl).ravel()[1:]
            else:
                constrained = np.abs(np.concatenate([lvl[0, 1:], lvl[1:, 0]]))
            worst = max(worst, float(np.max(constrained) - pivot))
    return float(worst)
