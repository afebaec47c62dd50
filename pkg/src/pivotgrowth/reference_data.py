"""Published growth-factor reference values.

These are reported numbers, not locally certified; they load into a
LowerBoundTable tagged "paper-reported" and are excluded from certified
extrapolations unless the caller opts in. Dimensions 1-4 are known exact
optima and carry the tag "exact".
"""

from fractions import Fraction

from .bounds import LowerBoundTable
from .elimination import PivotStrategy

# Known exact complete-pivoting optima.
EXACT_CP_OPTIMA = {
    1: Fraction(1),
    2: Fraction(2),
    3: Fraction(9, 4),
    4: Fraction(4),
}

# Reported complete-pivoting lower bounds, n = 1..75 and 100 (exact-arithmetic
# search results; decimal values are truncations of certified rationals).
REPORTED_CP_LOWER = {
    1: "1", 2: "2", 3: "9/4", 4: "4", 5: "4.13",
    6: "5", 7: "6.05", 8: "8", 9: "8.69", 10: "9.96",
    11: "11.05", 12: "12.55", 13: "13.76", 14: "15.25", 15: "16.92",
    16: "18.46", 17: "19.86", 18: "21.25", 19: "22.85", 20: "24.71",
    21: "26.21", 22: "28.01", 23: "29.72", 24: "31.63", 25: "33.67",
    26: "34.96", 27: "36.88", 28: "39.05", 29: "41.46", 30: "43.40",
    31: "45.43", 32: "47.74", 33: "50.36", 34: "52.78", 35: "54.84",
    36: "57.66", 37: "59.91", 38: "63.18", 39: "64.87", 40: "67.52",
    41: "70.44", 42: "73.49", 43: "77.68", 44: "79.25", 45: "82.56",
    46: "85.85", 47: "87.54", 48: "91.44", 49: "94.72", 50: "97.24",
    51: "101.82", 52: "104.61", 53: "108.09", 54: "111.19", 55: "114.76",
    56: "118.18", 57: "121.90", 58: "126.23", 59: "129.42", 60: "134.27",
    61: "137.55", 62: "141.83", 63: "144.72", 64: "148.05", 65: "153.98",
    66: "157.05", 67: "162.20", 68: "166.89", 69: "171.33", 70: "174.45",
    71: "182.98", 72: "184.91", 73: "190.57", 74: "193.28", 75: "196.79",
    100: "331.71",
}

# Reported rook-pivoting lower bound at n = 48.
REPORTED_ROOK_LOWER = {
    48: "640.4861",
}


def reported_cp_table() -> LowerBoundTable:
    table = LowerBoundTable(PivotStrategy.COMPLETE)
    for n, value in REPORTED_CP_LOWER.items():
        tag = "exact" if n in EXACT_CP_OPTIMA else "paper-reported"
        table.add(n, Fraction(value), tag)
    return table


def reported_rook_table() -> LowerBoundTable:
    table = LowerBoundTable(PivotStrategy.ROOK)
    for n, value in REPORTED_ROOK_LOWER.items():
        table.add(n, Fraction(value), "paper-reported")
    return table
