"""Exact rational helpers: weight parsing, rigorous log bounds, exact linear algebra.

Everything here operates on ``fractions.Fraction`` (or ints) and never rounds.
The floating-point counterparts live in :mod:`substochastic.spectral`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Rat = Fraction | int


def is_exact_number(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def parse_weight(text: str, mode: str = "exact"):
    """Parse a weight string, either a decimal like ``"0.25"`` or ``"3/4"``.

    In ``exact`` mode the result is a Fraction; in ``float`` mode a float.
    """
    value = Fraction(text.strip())
    if mode == "exact":
        return value
    if mode == "float":
        return float(value)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def weight_to_str(w) -> str:
    if isinstance(w, Fraction):
        return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"
    if isinstance(w, int):
        return str(w)
    return repr(float(w))


def safe_log(x) -> float:
    """log of a positive number that may be a Fraction too large for float()."""
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


# ---------------------------------------------------------------------------
# Rigorous rational bounds on natural logarithms.
#
# For q in [1, 2) write y = (q-1)/(q+1) in [0, 1/3); then
#     ln q = 2 * sum_{j>=0} y^(2j+1) / (2j+1),
# every partial sum is a strict lower bound, and the tail after J terms is
# below y^(2J+1) / ((2J+1) (1-y^2)).  Larger q is reduced by powers of two.
# ---------------------------------------------------------------------------


def _atanh_series_bounds(y: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    if y == 0:
        return Fraction(0), Fraction(0)
    total = Fraction(0)
    power = y
    y2 = y * y
    for j in range(terms):
        total += power / (2 * j + 1)
        power *= y2
    tail = power / ((2 * terms + 1) * (1 - y2))
    return 2 * total, 2 * (total + tail)


def ln_bounds(q: Rat, terms: int = 24) -> tuple[Fraction, Fraction]:
    """Exact rational (lower, upper) bounds on ln(q) for q > 0."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ln_bounds requires a positive argument")
    if q < 1:
        lo, hi = ln_bounds(1 / q, terms)
        return -hi, -lo
    m = 0
    while q >= 2:
        q /= 2
        m += 1
    y = (q - 1) / (q + 1)
    lo, hi = _atanh_series_bounds(y, terms)
    return lo + m * LN2_LO, hi + m * LN2_HI


LN2_LO, LN2_HI = _atanh_series_bounds(Fraction(1, 3), 40)


# ---------------------------------------------------------------------------
# Exact linear algebra (small orders; entries Fraction or int).
# ---------------------------------------------------------------------------


def det_exact(rows: Sequence[Sequence[Rat]]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Denominators are cleared row by row, the integer Bareiss recurrence runs
    with exact integer division, and the row multipliers are divided back out.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m: list[list[int]] = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        if len(fr) != n:
            raise ValueError("determinant requires a square matrix")
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        scale *= den
        m.append([int(x * den) for x in fr])

    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return Fraction(sign * m[n - 1][n - 1]) / scale


def solve_exact(rows: Sequence[Sequence[Rat]], rhs: Sequence[Rat]) -> list[Fraction]:
    """Solve A x = b exactly via Gaussian elimination with exact pivoting."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix in solve_exact")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [a[i][n] for i in range(n)]


def inverse_exact(rows: Sequence[Sequence[Rat]]) -> list[list[Fraction]]:
    """Exact matrix inverse (Gauss-Jordan)."""
    n = len(rows)
    a = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix in inverse_exact")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def interpolate_exact(points: Sequence[Rat], values: Sequence[Rat]) -> list[Fraction]:
    """Coefficients (ascending) of the polynomial through the given points.

    Newton divided differences, everything exact.
    """
    xs = [Fraction(x) for x in points]
    coeffs_newton = [Fraction(v) for v in values]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs_newton[i] = (coeffs_newton[i] - coeffs_newton[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form to monomial coefficients
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out <- out * (x - xs[i]) + c_i
        carry = [Fraction(0)] * n
        for k in range(n - 1):
            carry[k + 1] += out[k]
            carry[k] -= xs[i] * out[k]
        carry[0] += coeffs_newton[i]
        out = carry
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_eval(coeffs: Sequence, z):
    acc = 0
    for c in reversed(list(coeffs)):
        acc = acc * z + c
    return acc
