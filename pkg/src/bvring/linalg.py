"""Exact linear algebra over the rationals.

Everything here works on plain lists of rows. Rational input is scaled row by
row to integers and then reduced with fraction-free Gauss-Jordan elimination,
so no intermediate fraction ever appears and every division is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = Sequence[Sequence["int | Fraction"]]


def integer_rows(rows: Matrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; row spaces are unchanged."""
    out = []
    for row in rows:
        den = 1
        for a in row:
            if isinstance(a, Fraction):
                den = lcm(den, a.denominator)
        out.append([int(a * den) for a in row])
    return out


def echelon(rows: Matrix, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form.

    Returns ``(reduced, pivots)`` where ``reduced`` holds only the nonzero rows
    and ``reduced[k][pivots[k]]`` is the same nonzero integer for every k, with
    zeros elsewhere in each pivot column.
    """
    m = integer_rows(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    nrows = len(m)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv_row = m[r]
        pv = piv_row[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f == 0:
                # still has to be rescaled to stay in step with the other rows
                if pv != prev:
                    m[i] = [_exact_div(pv * a, prev) for a in row]
                continue
            m[i] = [_exact_div(pv * a - f * b, prev) for a, b in zip(row, piv_row)]
        prev = pv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _exact_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if rem:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return q


def rank(rows: Matrix, ncols: int | None = None) -> int:
    return len(echelon(rows, ncols)[1])


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Primitive integer basis of ``{v : A v = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    reduced, pivots = echelon(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        if not reduced:
            v[f] = 1
        else:
            diag = reduced[0][pivots[0]]
            v[f] = diag
            for row, pc in zip(reduced, pivots):
                v[pc] = -row[f]
        basis.append(_primitive(v))
    return basis


def left_nullspace(rows: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{v : v^T A = 0}``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return nullspace(transpose(rows, ncols), len(rows))


def transpose(rows: Matrix, ncols: int) -> list[list]:
    return [[row[j] for row in rows] for j in range(ncols)]


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        return v
    lead = next(a for a in v if a != 0)
    if lead < 0:
        g = -g
    return [a // g for a in v]


def mat_vec(rows: Matrix, v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in rows]


def same_span(a: Matrix, b: Matrix, ncols: int) -> bool:
    ra = rank(a, ncols)
    return ra == rank(b, ncols) and ra == rank(list(a) + list(b), ncols)


def contains(a: Matrix, b: Matrix, ncols: int) -> bool:
    """True when every row of ``b`` lies in the row span of ``a``."""
    return rank(list(a) + list(b), ncols) == rank(a, ncols)
