"""Dense square matrices of exact arbitrary-precision rationals.

This is the ground-truth representation: every growth value and pivoting
predicate in the toolkit bottoms out in exact ``fractions.Fraction``
arithmetic on these matrices.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError


def to_fraction(value) -> Fraction:
    """Convert a value to an exact Fraction.

    Accepts Fractions, ints, binary floats (converted exactly -- every finite
    float is rational), "p/q" strings, and decimal strings like "1.25"
    (converted via exact decimal fractions).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def format_fraction(x: Fraction) -> str:
    """Render a Fraction as a canonical reduced "p/q" string ("p" if q == 1)."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RationalMatrix:
    """An immutable n-by-n matrix of exact rationals."""

    __slots__ = ("_rows", "n")

    def __init__(self, rows):
        rows = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("matrix must have at least one row")
        for row in rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
        self._rows = rows
        self.n = n

    @property
    def rows(self):
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        if self.n <= 6:
            body = "; ".join(
                " ".join(format_fraction(v) for v in row) for row in self._rows
            )
            return f"RationalMatrix([{body}])"
        return f"RationalMatrix(n={self.n})"

    def max_abs(self) -> Fraction:
        return max(abs(v) for row in self._rows for v in row)

    def scale(self, c) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix([[c * v for v in row] for row in self._rows])

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._rows)))

    def permuted(self, row_perm, col_perm) -> "RationalMatrix":
        """Return the matrix with out[i][j] = self[row_perm[i]][col_perm[j]]."""
        return RationalMatrix(
            [[self._rows[r][c] for c in col_perm] for r in row_perm]
        )

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        a, b = self._rows, other._rows
        return RationalMatrix(
            [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        )

    def max_bit_length(self) -> int:
        """Largest numerator/denominator bit length over all entries."""
        return max(
            max(v.numerator.bit_length(), v.denominator.bit_length())
            for row in self._rows for v in row
        )

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_floats(cls, array) -> "RationalMatrix":
        """Exact conversion of a square array of binary floats."""
        return cls([[Fraction(float(v)) for v in row] for row in array])

    # -- JSON wire format -------------------------------------------------
    #
    # { "n": int, "entries": [["p/q", ...], ...] }; entries may also be
    # decimal strings, which convert exactly.

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [[format_fraction(v) for v in row] for row in self._rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc) -> "RationalMatrix":
        try:
            n = doc["n"]
            entries = doc["entries"]
        except (TypeError, KeyError) as exc:
            raise ParseError(f"matrix document missing field: {exc}") from exc
        if not isinstance(n, int) or n < 1:
            raise ParseError("matrix dimension must be a positive integer")
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ParseError("entry grid does not match declared dimension")
        try:
            return cls(entries)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad matrix entry: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "RationalMatrix":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(doc)
