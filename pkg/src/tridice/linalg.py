"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`, which is already canonical
(positive denominator, reduced) after every operation. Vectors are tuples
of Fractions and matrices are sequences of such rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

Rational = Fraction
RatVector = Tuple[Fraction, ...]
RatMatrix = Sequence[Sequence[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or ``"p"`` into a Fraction.

    Decimal notation is rejected so that file formats stay exact.
    """
    s = text.strip()
    if not s or any(c in s for c in ".eE_ "):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(s)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def vector(values) -> RatVector:
    return tuple(Fraction(v) for v in values)


def matrix(rows) -> list[list[Fraction]]:
    rows = [[Fraction(v) for v in row] for row in rows]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def matmul(a: RatMatrix, b: RatMatrix) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def matvec(a: RatMatrix, x: Sequence[Fraction]) -> list[Fraction]:
    return [dot(row, x) for row in a]


def row_echelon(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns.

    Pivots are taken as the first nonzero entry scanning down the current
    column, so intermediate states are reproducible.
    """
    rows = [list(map(Fraction, r)) for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(m: RatMatrix) -> int:
    return len(row_echelon(m)[1])


def int_determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    a = [list(r) for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def determinant(m: RatMatrix) -> Fraction:
    rows = [list(map(Fraction, r)) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    # Clear denominators row by row, then use integer Bareiss.
    scale = 1
    int_rows = []
    for r in rows:
        l = 1
        for v in r:
            l = _lcm(l, v.denominator)
        scale *= l
        int_rows.append([int(v * l) for v in r])
    return Fraction(int_determinant(int_rows), scale)


def solve_linear(m: RatMatrix, rhs: Sequence[Fraction]) -> Optional[RatVector]:
    """Return some exact solution of ``m x = rhs``, or None if inconsistent.

    For an underdetermined consistent system the free variables are set to
    zero; a square nonsingular system gets its unique solution.
    """
    m = [list(map(Fraction, r)) for r in m]
    if len(m) != len(rhs):
        raise ValueError("row count does not match rhs length")
    if not m:
        return ()
    n = len(m[0])
    aug = [r + [Fraction(b)] for r, b in zip(m, rhs)]
    red, pivots = row_echelon(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return tuple(x)


def null_space(m: RatMatrix, ncols: int) -> list[RatVector]:
    """Basis of ``{x : m x = 0}``."""
    red, pivots = row_echelon(m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, c in zip(red, pivots):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


def integer_row(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rescaling of a rational row to coprime integers."""
    l = 1
    for v in values:
        l = _lcm(l, Fraction(v).denominator)
    ints = [int(Fraction(v) * l) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)
