"""Exact circulant matrix algebra.

A circulant matrix of order n is stored as its first row only.  Row ``i`` of
the materialized matrix is the first row cyclically shifted right ``i`` times,
so entry ``(i, j)`` is ``first_row[(j - i) % n]``.  Products of circulants are
circulant and are computed as cyclic convolutions of first rows.

All entries are :class:`fractions.Fraction`; nothing in here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

__all__ = [
    "Circulant",
    "CirculantError",
    "InvalidInputError",
    "DimensionError",
    "circ",
    "constant",
    "mul",
    "linear_combine",
    "conj_transpose",
    "row_sum",
    "materialize",
    "naive_matmul",
    "format_fraction",
]


class CirculantError(ValueError):
    pass


class InvalidInputError(CirculantError):
    pass


class DimensionError(CirculantError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInputError(f"boolean is not a matrix entry: {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    # floats are refused on purpose: the algebra must stay exact
    raise InvalidInputError(f"entries must be int, Fraction or 'p/q' strings, got {type(x).__name__}")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Circulant:
    """Circulant matrix determined by its first row of exact rationals."""

    first_row: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.first_row) == 0:
            raise InvalidInputError("a circulant matrix needs a non-empty first row")
        if not all(isinstance(x, Fraction) for x in self.first_row):
            object.__setattr__(self, "first_row", tuple(_as_fraction(x) for x in self.first_row))

    @property
    def order(self) -> int:
        return len(self.first_row)

    def __len__(self):
        return self.order

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.first_row[(j - i) % self.order]

    def row(self, i: int) -> tuple[Fraction, ...]:
        n = self.order
        return tuple(self.first_row[(j - i) % n] for j in range(n))

    # ring structure -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Circulant):
            return NotImplemented
        return linear_combine(1, self, 1, other)

    def __sub__(self, other):
        if not isinstance(other, Circulant):
            return NotImplemented
        return linear_combine(1, self, -1, other)

    def __neg__(self):
        return Circulant(tuple(-x for x in self.first_row))

    def __mul__(self, alpha):
        if isinstance(alpha, Circulant):
            return NotImplemented
        a = _as_fraction(alpha)
        return Circulant(tuple(a * x for x in self.first_row))

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        a = _as_fraction(alpha)
        if a == 0:
            raise ZeroDivisionError("division of a circulant by zero")
        return Circulant(tuple(x / a for x in self.first_row))

    def __matmul__(self, other):
        if not isinstance(other, Circulant):
            return NotImplemented
        return mul(self, other)

    @property
    def H(self) -> "Circulant":
        return conj_transpose(self)

    T = H

    def row_sum(self) -> Fraction:
        return row_sum(self)

    def __repr__(self):
        return "circ(" + ", ".join(format_fraction(x) for x in self.first_row) + ")"

    __str__ = __repr__


def circ(*entries) -> Circulant:
    """Build ``circ(a_1, ..., a_n)``.

    Accepts either the entries as positional arguments or a single iterable.
    """
    if len(entries) == 1 and not isinstance(entries[0], (int, Fraction, str)):
        entries = tuple(entries[0])
    if len(entries) == 0:
        raise InvalidInputError("circ() needs at least one entry")
    return Circulant(tuple(_as_fraction(x) for x in entries))


def constant(kind: str, n: int) -> Circulant:
    """Return the identity (``"identity"``), all-ones (``"all_ones"``) or zero matrix of order n."""
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError(f"order must be a positive integer, got {n!r}")
    if kind in ("identity", "I"):
        return Circulant((Fraction(1),) + (Fraction(0),) * (n - 1))
    if kind in ("all_ones", "J"):
        return Circulant((Fraction(1),) * n)
    if kind in ("zero", "0"):
        return Circulant((Fraction(0),) * n)
    raise InvalidInputError(f"unknown constant kind {kind!r}")


def _check_same_order(A: Circulant, B: Circulant):
    if A.order != B.order:
        raise DimensionError(f"order mismatch: {A.order} vs {B.order}")


def mul(A: Circulant, B: Circulant) -> Circulant:
    # row_0(AB)[k] = sum_j a[j] * B[j, k] = sum_j a[j] * b[(k - j) % n]
    _check_same_order(A, B)
    n = A.order
    a, b = A.first_row, B.first_row
    out = [Fraction(0)] * n
    for j, aj in enumerate(a):
        if aj == 0:
            continue
        for m, bm in enumerate(b):
            if bm:
                out[(j + m) % n] += aj * bm
    return Circulant(tuple(out))


def linear_combine(alpha: Scalar, A: Circulant, beta: Scalar, B: Circulant) -> Circulant:
    _check_same_order(A, B)
    al, be = _as_fraction(alpha), _as_fraction(beta)
    return Circulant(tuple(al * x + be * y for x, y in zip(A.first_row, B.first_row)))


def conj_transpose(A: Circulant) -> Circulant:
    # real entries: the transpose of circ(a1, ..., an) is circ(a1, an, ..., a2)
    r = A.first_row
    return Circulant((r[0],) + tuple(reversed(r[1:])))


def row_sum(A: Circulant) -> Fraction:
    return sum(A.first_row, Fraction(0))


def materialize(A: Circulant) -> list[list[Fraction]]:
    """Full n x n matrix as nested lists.  Meant for checks and debugging only."""
    return [list(A.row(i)) for i in range(A.order)]


def naive_matmul(X: Sequence[Sequence[Fraction]], Y: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Schoolbook product of two dense square matrices."""
    n = len(X)
    if any(len(r) != n for r in X) or len(Y) != n or any(len(r) != n for r in Y):
        raise DimensionError("naive_matmul expects two square matrices of the same order")
    return [[sum((X[i][k] * Y[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def from_rows(rows: Iterable[Iterable]) -> Circulant:
    """Recover a circulant from a dense matrix, checking the circulant structure."""
    rows = [[_as_fraction(x) for x in r] for r in rows]
    if not rows:
        raise InvalidInputError("empty matrix")
    C = Circulant(tuple(rows[0]))
    if len(rows) != C.order or materialize(C) != rows:
        raise InvalidInputError("matrix is not circulant")
    return C
