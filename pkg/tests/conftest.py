"""Shared generators for random exactly-pivoted rational matrices."""

from fractions import Fraction

import numpy as np
import pytest

from pivotgrowth import PivotStrategy, RationalMatrix, permute_for_strategy
from pivotgrowth.errors import PivotGrowthError


def random_rational_matrix(rng: np.random.Generator, n: int,
                           denominator: int = 64) -> RationalMatrix:
    """Random matrix with entries p/denominator, p in [-denominator, denominator]."""
    p = rng.integers(-denominator, denominator + 1, size=(n, n))
    return RationalMatrix(
        [[Fraction(int(p[i, j]), denominator) for j in range(n)]
         for i in range(n)]
    )


def random_pivoted_matrix(rng: np.random.Generator, n: int,
                          strategy: PivotStrategy,
                          denominator: int = 64) -> RationalMatrix:
    """Random exactly strategy-pivoted matrix (retry singular draws)."""
    for _ in range(50):
        try:
            out, _, _ = permute_for_strategy(
                random_rational_matrix(rng, n, denominator), strategy
            )
            return out
        except PivotGrowthError:
            continue
    raise AssertionError("could not draw a nonsingular matrix")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
