"""Exact rational linear algebra on small dense systems.

Solves A x = b over the rationals by fraction-free (Bareiss) Gaussian
elimination: each equation is scaled to integer coefficients, the
forward sweep stays in (big) integers with exact divisions, and back
substitution produces Fraction results.  Intended for the symmetry-
reduced chains of this package, whose sizes stay in the hundreds.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Rational = int | Fraction


class SingularSystemError(ValueError):
    """Raised when the system has no unique solution."""


def _integer_rows(rows: list[list[Rational]], rhs: list[Rational]) -> list[list[int]]:
    """Augmented integer matrix, each equation scaled by its denominator LCM."""
    out = []
    for row, b in zip(rows, rhs):
        scale = lcm(*(f.denominator if isinstance(f, Fraction) else 1 for f in row + [b]))
        aug = [int(f * scale) if isinstance(f, Fraction) else f * scale for f in row]
        aug.append(int(b * scale) if isinstance(b, Fraction) else b * scale)
        out.append(aug)
    return out


def solve_exact(rows: list[list[Rational]], rhs: list[Rational]) -> list[Fraction]:
    """Solve the square system rows @ x = rhs exactly.

    Raises SingularSystemError when no pivot can be found in some column.
    """
    k = len(rows)
    if any(len(r) != k for r in rows) or len(rhs) != k:
        raise ValueError("system is not square")
    m = _integer_rows(rows, rhs)
    prev = 1
    for col in range(k):
        piv = None
        for r in range(col, k):
            if m[r][col]:
                # prefer a small pivot to slow coefficient growth
                if piv is None or abs(m[r][col]) < abs(m[piv][col]):
                    piv = r
                    if abs(m[r][col]) == 1:
                        break
        if piv is None:
            raise SingularSystemError(f"no pivot in column {col}")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        pivot_row = m[col]
        pv = pivot_row[col]
        for r in range(col + 1, k):
            row = m[r]
            f = row[col]
            if f:
                for c in range(col, k + 1):
                    row[c] = (row[c] * pv - f * pivot_row[c]) // prev
            elif pv != prev:
                for c in range(col, k + 1):
                    row[c] = (row[c] * pv) // prev
        prev = pv
    x: list[Fraction] = [Fraction(0)] * k
    for r in range(k - 1, -1, -1):
        acc = Fraction(m[r][k])
        row = m[r]
        for c in range(r + 1, k):
            if row[c]:
                acc -= row[c] * x[c]
        x[r] = acc / row[r]
    return x


def mat_vec(rows: list[list[Rational]], v: list[Rational]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v)), start=Fraction(0)) for row in rows]


def vec_mat(v: list[Rational], rows: list[list[Rational]]) -> list[Fraction]:
    k = len(rows[0])
    out = [Fraction(0)] * k
    for vi, row in zip(v, rows):
        if vi:
            for j, a in enumerate(row):
                if a:
                    out[j] += vi * a
    return out


def mat_mat(a: list[list[Rational]], b: list[list[Rational]]) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [
        [sum((x * y for x, y in zip(row, col)), start=Fraction(0)) for col in cols]
        for row in a
    ]


def identity(k: int) -> list[list[Fraction]]:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(k)] for i in range(k)]
