"""Exact linear algebra over the rationals.

Matrices are tuples of row tuples of :class:`fractions.Fraction`, vectors are
tuples of ``Fraction``.  Everything here is immutable and pure.
"""
from __future__ import annotations

import math
import operator
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .exceptions import DimensionError, SingularMatrixError

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts ints, Fractions, floats (converted exactly from their binary
    value) and strings such as ``"3"``, ``"-2/7"`` or ``"0.125"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def vector(entries: Iterable) -> Vector:
    return tuple(as_fraction(e) for e in entries)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vector(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise DimensionError("ragged matrix")
    return out


def shape(m: Matrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def is_square(m: Matrix) -> bool:
    r, c = shape(m)
    return r == c


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(r: int, c: int | None = None) -> Matrix:
    c = r if c is None else c
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise DimensionError(f"cannot multiply {shape(a)} by {shape(b)}")
    # integer products over a common denominator: one gcd per entry instead of per term
    da, ai = _cleared(a)
    db, bi = _cleared(transpose(b))
    den = da * db
    return tuple(tuple(Fraction(sum(map(operator.mul, row, col)), den) for col in bi) for row in ai)


def _cleared(m: Matrix) -> tuple[int, tuple]:
    """``(L, L*m)`` with ``L`` the lcm of the denominators, so ``L*m`` is integral."""
    den = math.lcm(*(x.denominator for row in m for x in row)) if m and m[0] else 1
    return den, tuple(tuple(x.numerator * (den // x.denominator) for x in row) for row in m)


def matvec(a: Matrix, v: Sequence) -> Vector:
    if shape(a)[1] != len(v):
        raise DimensionError(f"cannot apply {shape(a)} matrix to vector of length {len(v)}")
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch {len(u)} != {len(v)}")
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionError(f"shape mismatch {shape(a)} != {shape(b)}")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionError(f"shape mismatch {shape(a)} != {shape(b)}")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    c = as_fraction(c)
    return tuple(c * x for x in v)


def is_zero(m) -> bool:
    if m and isinstance(m[0], tuple):
        return all(x == 0 for row in m for x in row)
    return all(x == 0 for x in m)


def is_symmetric(m: Matrix) -> bool:
    return is_square(m) and m == transpose(m)


def block(m: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    return tuple(tuple(row[c0:c1]) for row in m[r0:r1])


def from_blocks(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    rows = []
    for brow in blocks:
        for i in range(len(brow[0])):
            rows.append(tuple(x for b in brow for x in b[i]))
    return tuple(rows)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    rows = [list(r) for r in m]
    nr, nc = shape(m)
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix, ncols: int | None = None) -> tuple[Vector, ...]:
    """Basis of ``{v : m v = 0}``.  ``ncols`` is needed when ``m`` has no rows."""
    if not m:
        return identity(ncols or 0)
    red, pivots = rref(m)
    nc = shape(m)[1]
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def independent_subset(vectors: Sequence[Sequence]) -> tuple[Vector, ...]:
    """Greedy maximal independent subset, keeping the original order."""
    kept: list[Vector] = []
    for v in vectors:
        trial = kept + [tuple(v)]
        if rank(tuple(trial)) == len(trial):
            kept.append(tuple(v))
    return tuple(kept)


def det(m: Matrix) -> Fraction:
    if not is_square(m):
        raise DimensionError("determinant of a non-square matrix")
    rows = [list(r) for r in m]
    n = len(rows)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        result *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def inverse(m: Matrix) -> Matrix:
    if not is_square(m):
        raise DimensionError("inverse of a non-square matrix")
    n = len(m)
    aug = tuple(tuple(row) + idrow for row, idrow in zip(m, identity(n)))
    red, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is irrational."""
    q = as_fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def to_float(m: Matrix):
    import numpy as np

    return np.array([[float(x) for x in row] for row in m], dtype=float)
