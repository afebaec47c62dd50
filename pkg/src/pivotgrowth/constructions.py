"""Named matrices and growth-preserving closure constructions.

Covers the Sylvester Hadamard family, Wilkinson's partial-pivoting matrix,
Tornheim's complex 3x3 example, Kronecker-product closures for complete and
rook pivoting, bordering, and the binary {0,1} embedding that reproduces an
arbitrary completely pivoted matrix (up to error 2^-3n) deep inside the
elimination of a much larger binary matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .elimination import PivotStrategy, eliminate, eliminate_block, is_pivoted
from .errors import NotCP, NotNormalized, NotRookPivoted
from .rational import RationalMatrix

H1 = RationalMatrix([[1, 1], [1, -1]])


def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    na, nb = a.n, b.n
    return RationalMatrix([
        [a[i // nb, j // nb] * b[i % nb, j % nb]
         for j in range(na * nb)]
        for i in range(na * nb)
    ])


def sylvester_hadamard(k: int) -> RationalMatrix:
    """2^k Sylvester Hadamard matrix; completely pivoted with growth 2^k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = RationalMatrix([[1]])
    for _ in range(k):
        out = kron(out, H1)
    return out


def wilkinson_pp_matrix(n: int) -> RationalMatrix:
    """Lower triangle -1, diagonal 1, last column 1; partial-pivoting growth
    2^(n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return RationalMatrix([
        [1 if j == i or j == n - 1 else (-1 if j < i else 0)
         for j in range(n)]
        for i in range(n)
    ])


@dataclass(frozen=True)
class ComplexGrowthResult:
    """High-precision complex matrix with its numerically evaluated growth."""

    entries: tuple            # tuple of tuples of mpmath.mpc
    growth: object            # mpmath.mpf
    max_slack: object         # mpmath.mpf, complete-pivoting slack

    def is_complete_pivoted(self, tol) -> bool:
        return self.max_slack <= tol


def tornheim_complex3(precision: int = 256) -> ComplexGrowthResult:
    """Tornheim's 3x3 complex matrix with z = (-1 + 2*sqrt(2)*i)/3.

    Its growth under complete pivoting is 16/(3*sqrt(3)); evaluated in
    high-precision complex arithmetic at the requested bit precision.
    """
    with mpmath.workprec(precision + 32):
        z = (-1 + 2 * mpmath.sqrt(2) * mpmath.mpc(0, 1)) / 3
        zi = 1 / z
        rows = [[mpmath.mpc(1), mpmath.mpc(1), mpmath.mpc(1)],
                [mpmath.mpc(1), z, zi],
                [mpmath.mpc(1), zi, z]]
        level = [row[:] for row in rows]
        max_abs = max(abs(v) for row in level for v in row)
        first_max = max_abs
        max_slack = mpmath.mpf(-1)
        for k in range(2):
            pivot = level[0][0]
            size = len(level)
            slack = max(abs(level[i][j]) for i in range(size)
                        for j in range(size) if (i, j) != (0, 0)) / abs(pivot) - 1
            max_slack = max(max_slack, slack)
            level = [
                [level[i][j] - level[i][0] * level[0][j] / pivot
                 for j in range(1, size)]
                for i in range(1, size)
            ]
            max_abs = max(max_abs, max(abs(v) for row in level for v in row))
        growth = max_abs / first_max
    return ComplexGrowthResult(
        entries=tuple(tuple(row) for row in rows),
        growth=growth,
        max_slack=max_slack,
    )


def cp_kron_h1(A: RationalMatrix) -> RationalMatrix:
    """A tensor H_1: doubles dimension and growth while staying exactly CP."""
    if not is_pivoted(A, PivotStrategy.COMPLETE):
        raise NotCP("cp_kron_h1 needs an exactly completely pivoted input")
    out = kron(A, H1)
    assert is_pivoted(out, PivotStrategy.COMPLETE)
    return out


def rp_kron(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    """A tensor B for rook-pivoted inputs: exactly rook pivoted, growth at
    least the product, and the iterate after B.n steps equals A^(2) x B."""
    if not is_pivoted(A, PivotStrategy.ROOK):
        raise NotRookPivoted("first")
    if not is_pivoted(B, PivotStrategy.ROOK):
        raise NotRookPivoted("second")
    return kron(A, B)


def border(A: RationalMatrix,
           strategy: PivotStrategy = PivotStrategy.COMPLETE) -> RationalMatrix:
    """[[1, 0],[0, A/max|A|]]: dimension + 1, same growth, same pivotedness.

    The input is normalized by its largest magnitude so the corner 1 is a
    valid first pivot.
    """
    scaled = A.scale(1 / A.max_abs())
    n = A.n
    return RationalMatrix(
        [[1] + [0] * n]
        + [[0] + list(scaled.rows[i]) for i in range(n)]
    )


# -- binary embedding --------------------------------------------------------


def _bits(a: Fraction, depth: int):
    """(integer part r_0, fractional bits r_1..r_depth) of a in [-1, 1].

    r_0 = ceil(a) in {0, 1}; the bits expand ceil(a) - a, truncated at
    `depth` bits; a = -1 uses the all-ones expansion of -0.111... .
    """
    if a == -1:
        return 0, [1] * depth
    r0 = -((-a.numerator) // a.denominator)  # ceil
    frac = r0 - a
    bits = []
    for _ in range(depth):
        frac *= 2
        if frac >= 1:
            bits.append(1)
            frac -= 1
        else:
            bits.append(0)
    return int(r0), bits


@dataclass(frozen=True)
class EmbeddingPlan:
    """Layout of the {0,1} embedding of an n x n matrix.

    The target matrix has size m = 4n(3n+1)+1. One border step reduces it to
    the negated gadget matrix; ell = 3n^2 + n three-step gadgets then expose
    the ell x ell inner matrix (blocks of I and I/2 over the bit matrices
    R_1..R_3n, R_0); 3n^2 further steps collapse it to the trailing n x n
    block -(R_0 - R_1/2 - ... - R_3n/2^3n), within 2^-3n of -A.
    """

    n: int
    m: int
    ell: int
    bit_depth: int
    steps: int                  # eliminations needed to expose the trailing block
    gadget_targets: tuple       # gadget j (rows 3j-2..3j) targets inner column j
    r_matrices: tuple           # (R_0, R_1, ..., R_3n), each an n x n 0/1 grid

    def target_block(self) -> RationalMatrix:
        """-(R_0 - sum_k 2^-k R_k), the exact value of the trailing block."""
        r0 = self.r_matrices[0]
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                v = Fraction(r0[i][j])
                for k in range(1, self.bit_depth + 1):
                    v -= Fraction(self.r_matrices[k][i][j], 2 ** k)
                row.append(-v)
            rows.append(row)
        return RationalMatrix(rows)


def _inner_matrix(n: int, r_matrices) -> list:
    """The ell x ell {0, 1/2, 1} matrix whose elimination yields the
    bit-expansion block: identity diagonal blocks, 1/2 I below the diagonal
    and in the last block column, R_1..R_3n, R_0 along the bottom."""
    depth = 3 * n
    ell = (depth + 1) * n
    half = Fraction(1, 2)
    T = [[Fraction(0)] * ell for _ in range(ell)]
    for p in range(depth):              # block rows of I / I/2
        for q in range(depth):
            if q == p:
                for r in range(n):
                    T[p * n + r][q * n + r] = Fraction(1)
            elif q < p:
                for r in range(n):
                    T[p * n + r][q * n + r] = half
        for r in range(n):              # last block column
            T[p * n + r][depth * n + r] = half
    base = depth * n
    for q in range(depth):              # bottom block row: R_1 .. R_3n, R_0
        rk = r_matrices[q + 1]
        for i in range(n):
            for j in range(n):
                T[base + i][q * n + j] = Fraction(rk[i][j])
    r0 = r_matrices[0]
    for i in range(n):
        for j in range(n):
            T[base + i][base + j] = Fraction(r0[i][j])
    return T


def binary_embed(A: RationalMatrix):
    """Embed an exactly CP matrix A (a_11 = 1, entries in [-1, 1]) into a
    {0,1} matrix B of size m = 4n(3n+1)+1.

    Eliminating B for the plan's `steps` steps leaves an n x n block within
    2^-3n of -A (exactly equal to the plan's target_block()).
    """
    n = A.n
    if A[0, 0] != 1:
        raise NotNormalized("corner entry must be exactly 1")
    if A.max_abs() > 1:
        raise NotNormalized("entries must lie in [-1, 1]")
    if not is_pivoted(A, PivotStrategy.COMPLETE):
        raise NotCP("binary_embed needs an exactly CP input")

    depth = 3 * n
    ell = (depth + 1) * n
    m = 4 * ell + 1

    r_matrices = [[[0] * n for _ in range(n)] for _ in range(depth + 1)]
    for i in range(n):
        for j in range(n):
            r0, bits = _bits(A[i, j], depth)
            r_matrices[0][i][j] = r0
            for k in range(1, depth + 1):
                r_matrices[k][i][j] = bits[k - 1]

    T = _inner_matrix(n, r_matrices)

    # Gadget matrix C, size 4*ell: ell three-row gadgets over an ell x ell
    # binary base. Gadget j targets inner column j: three elimination steps
    # with pivots 1, -1, 2 subtract x_j/2 (the 1/2-mask of T's column j)
    # from the base's column j, turning ceil(T) into T.
    size = 4 * ell
    C = [[0] * size for _ in range(size)]
    base = 3 * ell
    for j in range(ell):
        r = 3 * j
        C[r][r] = C[r][r + 1] = 1
        C[r + 1][r] = C[r + 1][r + 2] = 1
        C[r + 2][r + 1] = C[r + 2][r + 2] = 1
        C[r + 2][base + j] = 1
        for i in range(ell):
            if T[i][j] == Fraction(1, 2):
                C[base + i][r + 2] = 1          # x_j entries
    for i in range(ell):
        for j in range(ell):
            if T[i][j] != 0:
                C[base + i][base + j] = 1       # ceil of {0, 1/2, 1}

    # Outer border with (s_1, s_2) = (0, 1): one step reduces B to -C.
    B = RationalMatrix(
        [[1] * (size + 1)]
        + [[1] + [1 - C[i][j] for j in range(size)] for i in range(size)]
    )
    plan = EmbeddingPlan(
        n=n,
        m=m,
        ell=ell,
        bit_depth=depth,
        steps=1 + 3 * ell + 3 * n * n,
        gadget_targets=tuple(range(1, ell + 1)),
        r_matrices=tuple(
            tuple(tuple(row) for row in rk) for rk in r_matrices
        ),
    )
    return B, plan


def embedded_trailing_block(B: RationalMatrix, plan: EmbeddingPlan) -> RationalMatrix:
    """Run the plan's prescribed elimination steps on B and return the
    trailing n x n block."""
    return eliminate_block(B, plan.steps)


def embedding_error(A: RationalMatrix, B: RationalMatrix,
                    plan: EmbeddingPlan) -> Fraction:
    """Exact max-norm distance between the trailing block and -A."""
    block = embedded_trailing_block(B, plan)
    return max(
        abs(block[i, j] + A[i, j])
        for i in range(plan.n) for j in range(plan.n)
    )
