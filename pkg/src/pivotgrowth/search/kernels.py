"""Augmented-Lagrangian value/gradient kernels over the pyramid.

The hot loop exists twice: a numba @njit version and a pure-numpy
fallback. Selection is automatic (numba if importable) and can be forced
to numpy by setting the PIVOTGROWTH_NO_NUMBA environment variable; both
paths compute identical values (same operation order per constraint).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..elimination import PivotStrategy
from .pyramid import level_offset, pyramid_size, var_index


@dataclass(frozen=True)
class ConstraintSystem:
    """Index arrays describing the recurrence equalities and pivoting
    inequalities of the pyramid for one (n, strategy) pair."""

    n: int
    strategy: PivotStrategy
    nvars: int
    # equality c = x[out] - x[cur] + x[left] * x[right] / x[piv] = 0
    eq_out: np.ndarray
    eq_cur: np.ndarray
    eq_left: np.ndarray
    eq_right: np.ndarray
    eq_piv: np.ndarray
    # inequality g = sign * x[ent] - x[piv] <= 0
    ineq_ent: np.ndarray
    ineq_piv: np.ndarray
    ineq_sign: np.ndarray
    pivot_indices: np.ndarray   # flat indices of x_{k,k,k}

    @property
    def n_eq(self) -> int:
        return len(self.eq_out)

    @property
    def n_ineq(self) -> int:
        return len(self.ineq_ent)


def build_system(n: int, strategy: PivotStrategy) -> ConstraintSystem:
    eq = [[], [], [], [], []]
    ineq = [[], [], []]
    for k in range(1, n):
        piv = var_index(n, k, k, k)
        for i in range(k + 1, n + 1):
            for j in range(k + 1, n + 1):
                eq[0].append(var_index(n, i, j, k + 1))
                eq[1].append(var_index(n, i, j, k))
                eq[2].append(var_index(n, i, k, k))
                eq[3].append(var_index(n, k, j, k))
                eq[4].append(piv)
        if strategy is PivotStrategy.COMPLETE or \
                (strategy is PivotStrategy.ROOK and k == 1):
            # rook level 1 is fully bounded by the corner pivot: a scale
            # normalization that keeps the objective equal to the growth
            entries = [(i, j) for i in range(k, n + 1) for j in range(k, n + 1)
                       if (i, j) != (k, k)]
        elif strategy is PivotStrategy.ROOK:
            entries = [(k, j) for j in range(k + 1, n + 1)] \
                + [(i, k) for i in range(k + 1, n + 1)]
        else:
            entries = []
        for (i, j) in entries:
            idx = var_index(n, i, j, k)
            for sign in (1.0, -1.0):
                ineq[0].append(idx)
                ineq[1].append(piv)
                ineq[2].append(sign)
    return ConstraintSystem(
        n=n,
        strategy=strategy,
        nvars=pyramid_size(n),
        eq_out=np.asarray(eq[0], dtype=np.int64),
        eq_cur=np.asarray(eq[1], dtype=np.int64),
        eq_left=np.asarray(eq[2], dtype=np.int64),
        eq_right=np.asarray(eq[3], dtype=np.int64),
        eq_piv=np.asarray(eq[4], dtype=np.int64),
        ineq_ent=np.asarray(ineq[0], dtype=np.int64),
        ineq_piv=np.asarray(ineq[1], dtype=np.int64),
        ineq_sign=np.asarray(ineq[2], dtype=np.float64),
        pivot_indices=np.asarray(
            [var_index(n, k, k, k) for k in range(1, n + 1)], dtype=np.int64
        ),
    )


def _al_numpy(x, eq_out, eq_cur, eq_left, eq_right, eq_piv,
              lam_eq, ineq_ent, ineq_piv, ineq_sign, lam_ineq, mu, grad):
    """Augmented Lagrangian of -x[-1]; writes the gradient in place."""
    grad[:] = 0.0
    value = -x[-1]
    grad[-1] = -1.0

    xl, xr, xp = x[eq_left], x[eq_right], x[eq_piv]
    c = x[eq_out] - x[eq_cur] + xl * xr / xp
    value += float(np.dot(lam_eq, c) + 0.5 * mu * np.dot(c, c))
    w = lam_eq + mu * c
    np.add.at(grad, eq_out, w)
    np.add.at(grad, eq_cur, -w)
    np.add.at(grad, eq_left, w * xr / xp)
    np.add.at(grad, eq_right, w * xl / xp)
    np.add.at(grad, eq_piv, -w * xl * xr / (xp * xp))

    g = ineq_sign * x[ineq_ent] - x[ineq_piv]
    t = np.maximum(0.0, lam_ineq + mu * g)
    value += float(np.dot(t, t) - np.dot(lam_ineq, lam_ineq)) / (2.0 * mu)
    np.add.at(grad, ineq_ent, t * ineq_sign)
    np.add.at(grad, ineq_piv, -t)
    return value


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True, fastmath=False)
    def _al_numba(x, eq_out, eq_cur, eq_left, eq_right, eq_piv,
                  lam_eq, ineq_ent, ineq_piv, ineq_sign, lam_ineq, mu, grad):
        grad[:] = 0.0
        value = -x[-1]
        grad[-1] = -1.0
        for e in range(eq_out.shape[0]):
            xl = x[eq_left[e]]
            xr = x[eq_right[e]]
            xp = x[eq_piv[e]]
            c = x[eq_out[e]] - x[eq_cur[e]] + xl * xr / xp
            w = lam_eq[e] + mu * c
            value += lam_eq[e] * c + 0.5 * mu * c * c
            grad[eq_out[e]] += w
            grad[eq_cur[e]] -= w
            grad[eq_left[e]] += w * xr / xp
            grad[eq_right[e]] += w * xl / xp
            grad[eq_piv[e]] -= w * xl * xr / (xp * xp)
        for q in range(ineq_ent.shape[0]):
            g = ineq_sign[q] * x[ineq_ent[q]] - x[ineq_piv[q]]
            t = lam_ineq[q] + mu * g
            if t > 0.0:
                value += (t * t - lam_ineq[q] * lam_ineq[q]) / (2.0 * mu)
                grad[ineq_ent[q]] += t * ineq_sign[q]
                grad[ineq_piv[q]] -= t
            else:
                value -= lam_ineq[q] * lam_ineq[q] / (2.0 * mu)
        return value

    return _al_numba


_KERNEL = None
_KERNEL_NAME = None


def get_kernel():
    """(kernel, name): numba njit unless unavailable or disabled via the
    PIVOTGROWTH_NO_NUMBA environment variable."""
    global _KERNEL, _KERNEL_NAME
    if _KERNEL is None:
        if os.environ.get("PIVOTGROWTH_NO_NUMBA"):
            _KERNEL, _KERNEL_NAME = _al_numpy, "numpy"
        else:
            try:
                _KERNEL, _KERNEL_NAME = _make_numba_kernel(), "numba"
            except ImportError:
                _KERNEL, _KERNEL_NAME = _al_numpy, "numpy"
    return _KERNEL, _KERNEL_NAME


def al_value_grad(x: np.ndarray, system: ConstraintSystem,
                  lam_eq: np.ndarray, lam_ineq: np.ndarray,
                  mu: float):
    """Value and gradient of the augmented Lagrangian at x."""
    kernel, _ = get_kernel()
    grad = np.empty_like(x)
    value = kernel(
        x, system.eq_out, system.eq_cur, system.eq_left, system.eq_right,
        system.eq_piv, lam_eq, system.ineq_ent, system.ineq_piv,
        system.ineq_sign, lam_ineq, mu, grad,
    )
    return value, grad


def constraint_values(x: np.ndarray, system: ConstraintSystem):
    """(equality residuals c, inequality values g) at x."""
    c = x[system.eq_out] - x[system.eq_cur] \
        + x[system.eq_left] * x[system.eq_right] / x[system.eq_piv]
    g = system.ineq_sign * x[system.ineq_ent] - x[system.ineq_piv]
    return c, g
