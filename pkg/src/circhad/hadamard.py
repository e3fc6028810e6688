"""Hadamard and regularity predicates on +-1 first rows, the doubly
stochastic matrix ``S = (H + J) / (n + sqrt(n))`` and the catalog of the ten
known circulant Hadamard matrices."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .circulant import (
    Circulant,
    InvalidInputError,
    circ,
    constant,
    conj_transpose,
    linear_combine,
    mul,
    row_sum,
)

__all__ = [
    "SignVector",
    "RegularProfile",
    "CatalogEntry",
    "PreconditionError",
    "sign_vector",
    "parse_row",
    "is_hadamard",
    "regular_profile",
    "normalize_sign",
    "stochastic_divisor",
    "build_S",
    "is_doubly_stochastic",
    "catalog",
    "catalog_json",
    "CATALOG_SCHEMA",
]

SignVector = tuple  # tuple[int, ...] with entries in {-1, +1}


class PreconditionError(ValueError):
    pass


def sign_vector(entries: Iterable[int]) -> tuple[int, ...]:
    """Validate and freeze a +-1 sequence."""
    row = tuple(entries)
    if not row:
        raise InvalidInputError("a sign vector needs at least one entry")
    for x in row:
        if isinstance(x, bool) or x not in (1, -1):
            raise InvalidInputError(f"sign vector entries must be -1 or +1, got {x!r}")
    return tuple(int(x) for x in row)


def parse_row(text: str) -> tuple[int, ...]:
    """Parse ``"1,-1,-1,-1"`` or the compact form ``"+---"``."""
    s = text.strip()
    if s and set(s) <= {"+", "-"}:
        return sign_vector(1 if c == "+" else -1 for c in s)
    try:
        return sign_vector(int(tok) for tok in s.replace(" ", "").split(",") if tok != "")
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse row {text!r}: {exc}") from None


def is_hadamard(row: Sequence[int]) -> bool:
    """True iff ``circ(row) circ(row)^* = n I``, evaluated exactly."""
    row = sign_vector(row)
    H = circ(row)
    return mul(H, conj_transpose(H)) == len(row) * constant("identity", len(row))


@dataclass(frozen=True)
class RegularProfile:
    h: int
    sum_sign: int  # +1 or -1
    positive_count: int
    negative_count: int

    @property
    def order(self) -> int:
        return 4 * self.h * self.h

    @property
    def row_sum(self) -> int:
        return self.sum_sign * 2 * self.h

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "sum_sign": "+" if self.sum_sign > 0 else "-",
            "positive_count": self.positive_count,
            "negative_count": self.negative_count,
        }


def _order_to_h(n: int) -> Optional[int]:
    if n < 4 or n % 4:
        return None
    h = math.isqrt(n // 4)
    return h if 4 * h * h == n else None


def regular_profile(row: Sequence[int]) -> Optional[RegularProfile]:
    """Decompose a row of order ``4h^2`` with row sum ``+-2h``.

    Returns ``None`` when the order is not of that shape (order 1 included)
    or the row sum is not ``+-2h``.
    """
    row = sign_vector(row)
    h = _order_to_h(len(row))
    if h is None:
        return None
    pos = row.count(1)
    neg = len(row) - pos
    s = pos - neg
    if s == 2 * h:
        sign = 1
    elif s == -2 * h:
        sign = -1
    else:
        return None
    assert pos == 2 * h * h + sign * h and neg == 2 * h * h - sign * h
    return RegularProfile(h=h, sum_sign=sign, positive_count=pos, negative_count=neg)


def normalize_sign(row: Sequence[int]) -> tuple[int, ...]:
    """Flip the row if needed so that its sum is positive (``2h^2 + h`` ones)."""
    row = sign_vector(row)
    if len(row) == 1:
        return (1,)
    prof = regular_profile(row)
    if prof is None:
        raise PreconditionError(
            f"row of order {len(row)} has no regular profile "
            "(order must be 4h^2 and row sum +-2h)"
        )
    return row if prof.sum_sign > 0 else tuple(-x for x in row)


def stochastic_divisor(row: Sequence[int]) -> int:
    """``n + sqrt(n)``, i.e. ``2(2h^2 + h)``; equals 2 at order 1.

    Raises :class:`PreconditionError` naming the violated condition.
    """
    row = sign_vector(row)
    n = len(row)
    if n == 1:
        if row[0] != 1:
            raise PreconditionError("order-1 row must be (1): row sum must be positive, apply normalize_sign")
        return 2
    h = _order_to_h(n)
    if h is None:
        raise PreconditionError(f"order {n} is not of the form 4h^2")
    s = sum(row)
    if abs(s) != 2 * h:
        raise PreconditionError(f"row sum {s} is not +-2h = +-{2 * h}")
    if s < 0:
        raise PreconditionError(
            f"row has {row.count(1)} positive entries, expected 2h^2+h = {2 * h * h + h}; apply normalize_sign"
        )
    return 2 * (2 * h * h + h)


def build_S(row: Sequence[int]) -> Circulant:
    """``S = (circ(row) + J) / (2(2h^2 + h))`` with exact entries in ``{0, 1/(2h^2+h)}``."""
    row = sign_vector(row)
    d = stochastic_divisor(row)
    n = len(row)
    return linear_combine(Fraction(1, d), circ(row), Fraction(1, d), constant("all_ones", n))


def is_doubly_stochastic(M: Circulant) -> bool:
    if any(x < 0 for x in M.first_row):
        return False
    # column sums of M are row sums of M^*
    return row_sum(M) == 1 and row_sum(conj_transpose(M)) == 1


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    row: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.row)

    def as_dict(self) -> dict:
        return {"name": self.name, "order": self.order, "first_row": list(self.row)}


def _neg(r):
    return tuple(-x for x in r)


_BASE = [
    (1,),
    (1, -1, -1, -1),
    (-1, 1, -1, -1),
    (-1, -1, 1, -1),
    (-1, -1, -1, 1),
]

_CATALOG = tuple(
    CatalogEntry(f"H{2 * i + 1 + k}", r if k == 0 else _neg(r))
    for i, r in enumerate(_BASE)
    for k in (0, 1)
)


def catalog() -> tuple[CatalogEntry, ...]:
    """The ten known circulant Hadamard matrices H1..H10 (H_{2i} = -H_{2i-1})."""
    return _CATALOG


def catalog_json(indent: Optional[int] = None) -> str:
    return json.dumps([e.as_dict() for e in catalog()], indent=indent)


CATALOG_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["name", "order", "first_row"],
        "properties": {
            "name": {"type": "string", "pattern": "^H([1-9]|10)$"},
            "order": {"type": "integer", "minimum": 1},
            "first_row": {"type": "array", "items": {"enum": [-1, 1]}, "minItems": 1},
        },
        "additionalProperties": False,
    },
}
