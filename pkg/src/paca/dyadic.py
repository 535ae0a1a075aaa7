"""Exact rationals whose denominator is a power of two.

Every acceptance probability of a coin-tossing automaton is a finite sum of
terms ``count / 2**bits``, so this small type is all the arithmetic the
probability oracles need.  It interoperates with ``int`` and
``fractions.Fraction`` for comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

Number = Union["Dyadic", int, Fraction]


def _canonical(num: int, exp: int) -> tuple[int, int]:
    if exp < 0:
        return num << -exp, 0
    if num == 0:
        return 0, 0
    tz = (num & -num).bit_length() - 1
    shift = min(tz, exp)
    return num >> shift, exp - shift


@total_ordering
class Dyadic:
    """The value ``numerator / 2**exponent`` in canonical form.

    Canonical means the numerator is odd, or the exponent is zero.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if not isinstance(numerator, int) or not isinstance(exponent, int):
            raise TypeError("Dyadic needs integer numerator and exponent")
        num, exp = _canonical(numerator, exponent)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # construction / conversion

    @classmethod
    def coerce(cls, value: Number) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, Rational):
            return cls.from_fraction(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} has a denominator that is not a power of two")
        return cls(q.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    # arithmetic

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __add__(self, other):
        try:
            o = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._align(o)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._align(o)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        try:
            o = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Dyadic(self.numerator * o.numerator, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        return Dyadic(self.numerator**k, self.exponent * k)

    def half(self, times: int = 1) -> "Dyadic":
        return Dyadic(self.numerator, self.exponent + times)

    # comparison

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Dyadic):
            a, b, _ = self._align(other)
            return a < b
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    # text / json

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}"

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "exp": self.exponent}

    @classmethod
    def from_json(cls, data: dict) -> "Dyadic":
        return cls(int(data["num"]), int(data["exp"]))


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)
