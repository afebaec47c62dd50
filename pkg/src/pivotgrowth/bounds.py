"""Closed-form growth bounds, extrapolations, and mantissa requirements.

All upper bounds round up and all lower bounds round down, so every
inequality the module reports is mathematically valid, not a float
estimate. High-precision evaluation goes through mpmath with an explicit
relative slop of 2^-precision applied in the safe direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .elimination import PivotStrategy
from .errors import Divergent, MissingEntries
from .rational import format_fraction, to_fraction

DEFAULT_PRECISION = 128
_GUARD_BITS = 32


def _directed(value: mpmath.mpf, precision: int, up: bool) -> Fraction:
    """Exact rational from an mpf, nudged by a relative 2^-precision slop."""
    sign, man, exp, _ = mpmath.mpf(value)._mpf_
    man = -man if sign else man
    exact = Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)
    slop = Fraction(1, 2 ** precision)
    return exact * (1 + slop) if up else exact * (1 - slop)


def wilkinson_bound(n: int, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Upper bound sqrt(n) * (2 * 3^(1/2) * ... * n^(1/(n-1)))^(1/2) on
    complete-pivoting growth, rounded up."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Fraction(1)
    if n == 2:
        return Fraction(2)
    with mpmath.workprec(precision + _GUARD_BITS):
        log_total = mpmath.log(n) / 2
        for k in range(2, n + 1):
            log_total += mpmath.log(k) / (2 * (k - 1))
        value = mpmath.exp(log_total)
    return _directed(value, precision, up=True)


def foster_rook_bound(n: int, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Upper bound (3/2) * n^(3 ln(n) / 4) on rook-pivoting growth, rounded up."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Fraction(3, 2)
    with mpmath.workprec(precision + _GUARD_BITS):
        logn = mpmath.log(n)
        value = mpmath.mpf(3) / 2 * mpmath.exp(3 * logn * logn / 4)
    return _directed(value, precision, up=True)


def q_pochhammer(a, q, terms: int | None = None,
                 tol: Fraction = Fraction(1, 10 ** 12)) -> Fraction:
    """prod_{i=0}^{terms-1} (1 - a*q^i), exactly; terms=None means infinite.

    The infinite product is truncated once the tail provably deviates from 1
    by less than `tol` and is then rounded down by the tail bound, so the
    result is a valid lower bound of the infinite product. Requires |a| <= 1
    and 0 <= q < 1 (q < 1 only for the infinite form).
    """
    a, q = to_fraction(a), to_fraction(q)
    if abs(a) > 1 or q < 0:
        raise ValueError("need |a| <= 1 and q >= 0")
    if terms is not None:
        product = Fraction(1)
        power = Fraction(1)
        for _ in range(terms):
            product *= 1 - a * power
            power *= q
        return product
    if q >= 1:
        raise Divergent("infinite q-Pochhammer needs q < 1")
    if a == 0:
        return Fraction(1)
    product = Fraction(1)
    power = Fraction(1)  # q^i
    while abs(a) * power / (1 - q) >= tol:
        product *= 1 - a * power
        power *= q
    if a > 0:
        # remaining factors multiply to something in [1 - a q^N/(1-q), 1]
        product *= 1 - a * power / (1 - q)
    # for a < 0 the remaining factors are >= 1; truncation is already a lower bound
    return product


@dataclass
class LowerBoundTable:
    """Certified (or paper-reported) growth lower bounds per dimension."""

    strategy: PivotStrategy
    entries: dict = field(default_factory=dict)      # n -> Fraction
    sources: dict = field(default_factory=dict)      # n -> provenance tag

    def add(self, n: int, value, source: str = "certified"):
        self.entries[n] = to_fraction(value)
        self.sources[n] = source

    def get(self, n: int) -> Fraction | None:
        return self.entries.get(n)

    def filtered(self, allowed_sources) -> "LowerBoundTable":
        allowed = set(allowed_sources)
        out = LowerBoundTable(self.strategy)
        for n, v in self.entries.items():
            if self.sources[n] in allowed:
                out.add(n, v, self.sources[n])
        return out


def extrapolate_linear_constant(table: LowerBoundTable, k: int) -> Fraction:
    """Constant C' with g >= C' * n for all n >= k, from bounds on [k, 2k).

    C' = C * (1/k; 1/2)_inf / (1 - 1/k) with C = min over n in [k, 2k) of
    lb(n)/n; the q-Pochhammer factor is rounded down, so C' is a valid
    certified constant.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    missing = [n for n in range(k, 2 * k) if n not in table.entries]
    if missing:
        raise MissingEntries(missing)
    C = min(table.entries[n] / n for n in range(k, 2 * k))
    poch = q_pochhammer(Fraction(1, k), Fraction(1, 2))
    return C * poch / (1 - Fraction(1, k))


def doubling_limsup(table: LowerBoundTable) -> Fraction:
    """Best ratio lb(n)/n in the table; certifies limsup g(n)/n >= this,
    since Kronecker doubling with H_1 preserves the ratio."""
    if not table.entries:
        raise MissingEntries([])
    return max(v / n for n, v in table.entries.items())


def rook_exponent(table: LowerBoundTable,
                  precision: int = DEFAULT_PRECISION):
    """(alpha, constant) with g_rook(n) >= constant * n^alpha for all n.

    Picks the table entry maximizing log_k lb(k); alpha is that logarithm
    rounded down and constant a downward-rounded k^(-alpha).
    """
    usable = {n: v for n, v in table.entries.items() if n >= 2 and v > 1}
    if not usable:
        raise MissingEntries([])
    import math
    k = max(usable, key=lambda n: math.log(float(usable[n])) / math.log(n))
    lb = usable[k]
    # exact power detection (e.g. lb(2) = 2 -> alpha = 1, constant = 1/2)
    p = round(math.log(float(lb)) / math.log(k))
    if p >= 0 and Fraction(k) ** p == lb:
        return Fraction(p), Fraction(1, k ** p)
    with mpmath.workprec(precision + _GUARD_BITS):
        num = mpmath.log(mpmath.mpf(lb.numerator) / lb.denominator)
        alpha = _directed(num / mpmath.log(k), precision, up=False)
        const = mpmath.exp(-mpmath.mpf(alpha.numerator) / alpha.denominator
                           * mpmath.log(k))
    return alpha, _directed(const, precision, up=False)


# -- growth models for the mantissa requirement ------------------------------


class PolynomialGrowth:
    """Exact polynomial growth model g(k) = sum_j coeffs[j] * k^j."""

    def __init__(self, coeffs, label: str):
        self.coeffs = tuple(to_fraction(c) for c in coeffs)
        self.label = label
        self._samples = None

    def __call__(self, k: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def double_sum(self, n: int) -> Fraction:
        """S(n) = sum_{m=1}^{n-1} sum_{l=1}^{n-m} g(l) g(m), exactly.

        S is a polynomial in n of degree 2*deg(g) + 2, so it is evaluated by
        Lagrange interpolation through small direct samples.
        """
        if n < 2:
            return Fraction(0)
        degree = 2 * (len(self.coeffs) - 1) + 2
        points = degree + 1
        if self._samples is None:
            xs = list(range(1, points + 1))
            ys = []
            for x in xs:
                prefix = Fraction(0)
                prefixes = [Fraction(0)]
                for l in range(1, x + 1):
                    prefix += self(l)
                    prefixes.append(prefix)
                ys.append(sum(self(m) * prefixes[x - m] for m in range(1, x)))
            self._samples = (xs, ys)
        xs, ys = self._samples
        if n <= len(xs):
            return ys[n - 1]
        total = Fraction(0)
        for i, (xi, yi) in enumerate(zip(xs, ys)):
            num, den = Fraction(1), 1
            for j, xj in enumerate(xs):
                if j != i:
                    num *= n - xj
                    den *= xi - xj
            total += yi * num / den
        return total


class WilkinsonGrowth:
    """Growth model from the complete-pivoting product-form upper bound.

    Evaluation is float log-domain: the relevant thresholds sit far from
    the representability margin, so double precision is ample.
    """

    label = "eq-1.1"

    def __init__(self):
        self._g = [0.0, 1.0]     # g[k], k >= 1
        self._logsum = [0.0, 0.0]  # sum_{j=2}^{k} log(j)/(j-1)

    def _extend(self, upto: int):
        import math
        k = len(self._g)
        while k <= upto:
            self._logsum.append(self._logsum[-1] + math.log(k) / (k - 1))
            self._g.append(math.exp(0.5 * (math.log(k) + self._logsum[k])))
            k += 1

    def __call__(self, k: int) -> float:
        self._extend(k)
        return self._g[k]

    def double_sum(self, n: int) -> float:
        if n < 2:
            return 0.0
        self._extend(n)
        prefix = [0.0]
        for l in range(1, n):
            prefix.append(prefix[-1] + self._g[l])
        return sum(self._g[m] * prefix[n - m] for m in range(1, n))


GROWTH_MODEL_3N = PolynomialGrowth((0, 3), "3n")
GROWTH_MODEL_QUADRATIC = PolynomialGrowth((0, 0, Fraction(1, 2)), "n^2/2")


def parse_growth_model(name: str):
    table = {
        "3n": GROWTH_MODEL_3N,
        "n^2/2": GROWTH_MODEL_QUADRATIC,
        "n2/2": GROWTH_MODEL_QUADRATIC,
        "eq1.1": WilkinsonGrowth(),
        "eq-1.1": WilkinsonGrowth(),
        "wilkinson": WilkinsonGrowth(),
    }
    try:
        return table[name.lower()]
    except KeyError:
        raise ValueError(f"unknown growth model {name!r}") from None


def _prefactor(C: Fraction) -> Fraction:
    return (1 + C) * (4 + 5 * C) / C


def mantissa_requirement(n: int, g_model, C=Fraction(1, 2),
                         beta: int = 2) -> int:
    """Smallest t with beta^(t-1) >= (1+C)(4+5C)/C * S(n), guaranteeing
    float growth <= (1+C) * exact growth."""
    C = to_fraction(C)
    if not 0 < C < 1:
        raise ValueError("C must be in (0, 1)")
    if beta < 2:
        raise ValueError("base must be >= 2")
    S = g_model.double_sum(n)
    if isinstance(S, Fraction):
        threshold = _prefactor(C) * S
        t, power = 1, Fraction(1)
        while power < threshold:
            power *= beta
            t += 1
        return t
    import math
    if S <= 0:
        return 1
    log_threshold = math.log(float(_prefactor(C))) + math.log(S)
    return 1 + max(0, math.ceil(log_threshold / math.log(beta)))


def max_n_for_mantissa(t: int, g_model, C=Fraction(1, 2),
                       beta: int = 2) -> int:
    """Largest n with mantissa_requirement(n, ...) <= t (monotone bisection)."""
    if mantissa_requirement(2, g_model, C, beta) > t:
        return 1
    lo, hi = 2, 4
    while mantissa_requirement(hi, g_model, C, beta) <= t:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mantissa_requirement(mid, g_model, C, beta) <= t:
            lo = mid
        else:
            hi = mid
    return lo


TABLE4_MODELS = ("3n", "n^2/2", "eq1.1")
TABLE4_MANTISSAS = (52, 112)


def table4() -> dict:
    """Largest safe n per (mantissa, growth model), C = 1/2, base 2."""
    out = {}
    for t in TABLE4_MANTISSAS:
        out[t] = {
            name: max_n_for_mantissa(t, parse_growth_model(name))
            for name in TABLE4_MODELS
        }
    return out


@dataclass(frozen=True)
class BoundReport:
    """Upper/lower bound summary for one dimension and strategy."""

    n: int
    strategy: PivotStrategy
    wilkinson_upper: Fraction
    foster_upper: Fraction
    best_known_lower: Fraction | None
    extrapolated_lower: Fraction | None
    derivation: str

    def to_json_dict(self) -> dict:
        def fmt(x):
            return None if x is None else format_fraction(x)
        return {
            "n": self.n,
            "strategy": self.strategy.value,
            "wilkinson_upper": fmt(self.wilkinson_upper),
            "foster_upper": fmt(self.foster_upper),
            "best_known_lower": fmt(self.best_known_lower),
            "extrapolated_lower": fmt(self.extrapolated_lower),
            "derivation": self.derivation,
        }


def bound_report(n: int, strategy: PivotStrategy,
                 table: LowerBoundTable | None = None,
                 precision: int = DEFAULT_PRECISION) -> BoundReport:
    """Assemble a BoundReport, extrapolating from the largest usable k <= n/2."""
    extrapolated = None
    derivation = "no lower-bound table supplied"
    best = table.get(n) if table is not None else None
    if table is not None:
        ks = [k for k in range(2, n // 2 + 1)
              if all(m in table.entries for m in range(k, 2 * k))]
        if ks:
            k = max(ks)
            extrapolated = extrapolate_linear_constant(table, k) * n
            derivation = f"linear extrapolation from window [{k}, {2 * k})"
        else:
            derivation = "table lacks a full window [k, 2k) with 2k <= n"
    return BoundReport(
        n=n,
        strategy=strategy,
        wilkinson_upper=wilkinson_bound(n, precision),
        foster_upper=foster_rook_bound(n, precision),
        best_known_lower=best,
        extrapolated_lower=extrapolated,
        derivation=derivation,
    )
