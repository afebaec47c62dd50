"""Augmented-Lagrangian growth maximization and the multistart driver.

The inner subproblem is solved with L-BFGS-B (bounds pin x_{1,1,1} = 1 and
keep pivots above a floor); outer iterations update the multipliers. The
winning float candidate is converted to exact rationals -- including
snapped low-denominator variants -- permuted into exact pivot order, and
passed through the exact repair, so the reported growth is always a
certificate value, never the float objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from ..elimination import PivotStrategy, eliminate, permute_for_strategy
from ..errors import (
    AllRestartsFailed,
    DegenerateDraw,
    Diverged,
    PivotGrowthError,
    Stalled,
)
from ..rational import RationalMatrix
from ..repair import GrowthCertificate, cp_repair, rook_repair
from .kernels import al_value_grad, build_system, constraint_values
from .pyramid import PyramidCandidate, pyramid_residual, random_cp_start


@dataclass(frozen=True)
class OptimizerOptions:
    max_outer: int = 40
    max_inner: int = 300
    feasibility_tol: float = 1e-9
    feasibility_start: float = 1e-6
    pivot_floor: float = 1e-4
    mu0: float = 10.0
    mu_growth: float = 5.0
    mu_max: float = 1e10
    objective_stall_tol: float = 1e-11
    stall_patience: int = 4


@dataclass(frozen=True)
class SearchConfig:
    n: int
    strategy: PivotStrategy = PivotStrategy.COMPLETE
    restarts: int = 64
    seed: int = 0
    jobs: int = 1
    options: OptimizerOptions = field(default_factory=OptimizerOptions)

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.options.feasibility_tol <= 0:
            raise ValueError("feasibility tolerance must be positive")


def optimize_growth(start: PyramidCandidate, strategy: PivotStrategy,
                    options: OptimizerOptions = OptimizerOptions()
                    ) -> PyramidCandidate:
    """Maximize the final pivot over the pyramid manifold from one start."""
    n = start.n
    if n == 1:
        return replace(start, converged=True)
    if start.residual > options.feasibility_start:
        raise Stalled(start, "starting point is too infeasible")
    system = build_system(n, strategy)
    bounds = [(None, None)] * system.nvars
    bounds[0] = (1.0, 1.0)
    for idx in system.pivot_indices[1:]:
        bounds[int(idx)] = (options.pivot_floor, None)

    x = start.x.astype(float).copy()
    lam_eq = np.zeros(system.n_eq)
    lam_ineq = np.zeros(system.n_ineq)
    mu = options.mu0
    prev_infeas = np.inf
    best_obj = -np.inf
    stall = 0
    outer_done = 0

    for outer in range(options.max_outer):
        res = minimize(
            al_value_grad, x, args=(system, lam_eq, lam_ineq, mu),
            jac=True, method="L-BFGS-B", bounds=bounds,
            options={"maxiter": options.max_inner, "ftol": 1e-14,
                     "gtol": 1e-10},
        )
        x = res.x
        outer_done = outer + 1
        if not np.all(np.isfinite(x)):
            raise Diverged("optimizer produced non-finite iterates")
        c, g = constraint_values(x, system)
        infeas = max(
            float(np.max(np.abs(c))) if len(c) else 0.0,
            float(np.max(g)) if len(g) else 0.0,
            0.0,
        )
        lam_eq = lam_eq + mu * c
        lam_ineq = np.maximum(0.0, lam_ineq + mu * g)
        if infeas <= options.feasibility_tol:
            if x[-1] <= best_obj + options.objective_stall_tol:
                stall += 1
                if stall >= options.stall_patience:
                    break
            else:
                stall = 0
            best_obj = max(best_obj, float(x[-1]))
        elif infeas > 0.25 * prev_infeas:
            mu = min(mu * options.mu_growth, options.mu_max)
        prev_infeas = min(prev_infeas, max(infeas, 1e-300))

    cand = PyramidCandidate(
        n=n, x=x, residual=0.0, restart=start.restart,
        outer_iterations=outer_done,
    )
    cand.residual = pyramid_residual(cand, strategy)
    cand.converged = cand.residual <= options.feasibility_tol
    if not cand.converged:
        raise Stalled(cand, f"stopped at residual {cand.residual:.3g}")
    return cand


_SNAP_DENOMINATORS = (
    1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 256, 1024,
    10 ** 4, 10 ** 6, 10 ** 9,
)


def _certify(matrix_floats: np.ndarray, strategy: PivotStrategy,
             source: dict) -> GrowthCertificate:
    """Exact certificate from a float candidate matrix.

    Tries the exact float entries plus low-denominator snapped variants
    (converged optima usually sit at simple rationals); each variant is
    permuted into exact pivot order and repaired. The best exact growth
    wins.
    """
    n = matrix_floats.shape[0]
    repair = cp_repair if strategy is PivotStrategy.COMPLETE else rook_repair
    exact = RationalMatrix.from_floats(matrix_floats)
    variants = [(None, exact)]
    for d in _SNAP_DENOMINATORS:
        snapped = RationalMatrix(
            [[exact[i, j].limit_denominator(d) for j in range(n)]
             for i in range(n)]
        )
        if snapped not in (v for _, v in variants):
            variants.append((d, snapped))
    best = None
    for d, M in variants:
        try:
            permuted, _, _ = permute_for_strategy(M, strategy)
            cert = repair(permuted, dict(source, snap_denominator=d))
        except PivotGrowthError:
            continue
        if best is None or cert.growth > best.growth:
            best = cert
    if best is None:
        raise AllRestartsFailed("no candidate could be certified")
    return best


def multistart_search(config: SearchConfig, progress=None):
    """Run `restarts` independent optimizations and certify the winner.

    Each restart draws from the substream (seed, restart index), so results
    are independent of worker count. Returns (best candidate, certificate);
    the certificate's exact growth is the reported value.
    """
    if progress is None:
        def progress(msg):
            pass
    best = None
    failures = 0
    for r in range(config.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, r]))
        try:
            start = None
            for _ in range(8):  # retry degenerate draws within the substream
                try:
                    start = random_cp_start(config.n, rng)
                    break
                except DegenerateDraw:
                    continue
            if start is None:
                raise DegenerateDraw("all draws degenerate")
            start.restart = r
            cand = optimize_growth(start, config.strategy, config.options)
        except (DegenerateDraw, Diverged, Stalled) as exc:
            failures += 1
            progress(f"restart {r}: failed ({exc})")
            continue
        if best is None or cand.objective > best.objective:
            best = cand
            progress(f"restart {r}: objective {cand.objective:.12g} (new best)")
        else:
            progress(f"restart {r}: objective {cand.objective:.12g}")
    if best is None:
        raise AllRestartsFailed(f"all {config.restarts} restarts failed")
    source = {
        "kind": "local-search",
        "n": config.n,
        "strategy": config.strategy.value,
        "restarts": config.restarts,
        "seed": config.seed,
        "winning_restart": best.restart,
        "float_objective": best.objective,
    }
    certificate = _certify(best.matrix(), config.strategy, source)
    progress(
        f"winner: restart {best.restart}, certified growth "
        f"{float(certificate.growth):.12g}"
    )
    return best, certificate
