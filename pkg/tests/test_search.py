"""Pyramid encoding, AL kernels, and the multistart search."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pivotgrowth import PivotStrategy, SearchConfig, multistart_search
from pivotgrowth.search import optimize_growth, random_cp_start
from pivotgrowth.search.kernels import (
    al_value_grad,
    build_system,
    constraint_values,
    get_kernel,
)
from pivotgrowth.search.pyramid import (
    PyramidCandidate,
    level_offset,
    pyramid_from_matrix,
    pyramid_residual,
    pyramid_size,
    var_index,
)


def test_pyramid_indexing():
    assert pyramid_size(1) == 1
    assert pyramid_size(3) == 9 + 4 + 1
    n = 4
    seen = set()
    for k in range(1, n + 1):
        for i in range(k, n + 1):
            for j in range(k, n + 1):
                seen.add(var_index(n, i, j, k))
    assert seen == set(range(pyramid_size(n)))
    assert var_index(n, n, n, n) == pyramid_size(n) - 1
    assert level_offset(n, 1) == 0


def test_pyramid_from_matrix_levels(rng):
    A = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    x = pyramid_from_matrix(A)
    cand = PyramidCandidate(n=4, x=x, residual=0.0)
    assert np.allclose(cand.matrix(), A)
    assert pyramid_residual(cand, PivotStrategy.NONE) < 1e-10


def test_random_cp_start_properties(rng):
    for n in (2, 4, 6):
        cand = random_cp_start(n, rng)
        assert cand.x[0] == 1.0
        for k in range(1, n + 1):
            assert cand.level(k)[0, 0] > 0  # pivots flipped positive
        assert cand.residual < 1e-9


def test_gradient_matches_finite_differences(rng):
    os.environ.pop("PIVOTGROWTH_NO_NUMBA", None)
    n = 4
    system = build_system(n, PivotStrategy.COMPLETE)
    x = random_cp_start(n, rng).x + 0.01 * rng.standard_normal(pyramid_size(n))
    lam_eq = rng.standard_normal(system.n_eq)
    lam_ineq = np.abs(rng.standard_normal(system.n_ineq))
    value, grad = al_value_grad(x, system, lam_eq, lam_ineq, 10.0)
    h = 1e-6
    for idx in rng.choice(len(x), size=10, replace=False):
        xp, xm = x.copy(), x.copy()
        xp[idx] += h
        xm[idx] -= h
        vp, _ = al_value_grad(xp, system, lam_eq, lam_ineq, 10.0)
        vm, _ = al_value_grad(xm, system, lam_eq, lam_ineq, 10.0)
        fd = (vp - vm) / (2 * h)
        assert grad[idx] == pytest.approx(fd, rel=1e-4, abs=1e-6)


def test_numpy_numba_kernels_agree(rng):
    pytest.importorskip("numba")
    from pivotgrowth.search.kernels import _al_numpy, _make_numba_kernel
    numba_kernel = _make_numba_kernel()
    for strategy in (PivotStrategy.COMPLETE, PivotStrategy.ROOK):
        system = build_system(5, strategy)
        x = random_cp_start(5, rng).x
        lam_eq = rng.standard_normal(system.n_eq)
        lam_ineq = np.abs(rng.standard_normal(system.n_ineq))
        args = (system.eq_out, system.eq_cur, system.eq_left, system.eq_right,
                system.eq_piv, lam_eq, system.ineq_ent, system.ineq_piv,
                system.ineq_sign, lam_ineq, 7.0)
        g1, g2 = np.empty_like(x), np.empty_like(x)
        v1 = _al_numpy(x, *args, g1)
        v2 = numba_kernel(x, *args, g2)
        assert v1 == pytest.approx(v2, rel=1e-12, abs=1e-12)
        assert np.allclose(g1, g2, rtol=1e-12, atol=1e-12)


def test_kernel_env_flag_forces_numpy():
    code = (
        "import os; os.environ['PIVOTGROWTH_NO_NUMBA'] = '1'\n"
        "from pivotgrowth.search.kernels import get_kernel\n"
        "print(get_kernel()[1])\n"
    )
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    # the in-process default (numba when importable)
    assert get_kernel()[1] in ("numba", "numpy")


def test_constraint_values_zero_on_exact_pyramid(rng):
    cand = random_cp_start(5, rng)
    system = build_system(5, PivotStrategy.COMPLETE)
    c, g = constraint_values(cand.x, system)
    assert np.max(np.abs(c)) < 1e-9
    assert np.max(g) < 1e-9


def test_optimize_growth_improves_objective(rng):
    start = random_cp_start(3, rng)
    out = optimize_growth(start, PivotStrategy.COMPLETE)
    assert out.converged
    assert out.objective >= start.objective - 1e-9


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=3, restarts=0)


def test_multistart_deterministic_and_exact_n2():
    config = SearchConfig(n=2, restarts=4, seed=7)
    best1, cert1 = multistart_search(config)
    best2, cert2 = multistart_search(config)
    assert cert1.growth == 2  # the known optimum
    assert cert1.matrix == cert2.matrix
    assert best1.restart == best2.restart
    assert np.array_equal(best1.x, best2.x)


def test_rook_search_certifies(rng):
    config = SearchConfig(n=3, strategy=PivotStrategy.ROOK, restarts=8, seed=1)
    best, cert = multistart_search(config)
    assert cert.strategy is PivotStrategy.ROOK
    assert cert.growth >= 2  # rook growth of 3x3 reaches 3
