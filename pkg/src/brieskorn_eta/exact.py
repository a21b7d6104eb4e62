"""Exact rational helpers shared across the package.

Rationals are rendered as ``"p/q"`` strings everywhere (including integers,
which come out as ``"p/1"``) so reports can be parsed back without loss.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

RationalLike = Union[int, Fraction, str, "EtaValue"]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``3``, ``"3"``, ``"-5/4"`` or a Fraction into a Fraction.

    Floats are refused on purpose: invariants in this package are exact.
    """
    if isinstance(value, EtaValue):
        return value.value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(value: Fraction | int) -> str:
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True, order=True)
class EtaValue:
    """An exact eta-type invariant.

    Thin wrapper over :class:`fractions.Fraction` that supports the linear
    operations the pipelines need and serializes as ``"p/q"``.
    """

    value: Fraction

    def __init__(self, value: RationalLike = 0):
        object.__setattr__(self, "value", parse_rational(value))

    def __add__(self, other: RationalLike) -> EtaValue:
        return EtaValue(self.value + parse_rational(other))

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> EtaValue:
        return EtaValue(self.value - parse_rational(other))

    def __rsub__(self, other: RationalLike) -> EtaValue:
        return EtaValue(parse_rational(other) - self.value)

    def __mul__(self, other: RationalLike) -> EtaValue:
        return EtaValue(self.value * parse_rational(other))

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike) -> EtaValue:
        return EtaValue(self.value / parse_rational(other))

    def __neg__(self) -> EtaValue:
        return EtaValue(-self.value)

    def __abs__(self) -> EtaValue:
        return EtaValue(abs(self.value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EtaValue):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def has_dyadic_denominator(self) -> bool:
        return is_power_of_two(self.value.denominator)

    def __str__(self) -> str:
        return format_rational(self.value)

    def __repr__(self) -> str:
        return f"EtaValue('{self}')"

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", parse_rational(re))
        object.__setattr__(self, "im", parse_rational(im))

    @classmethod
    def _from_fractions(cls, re: Fraction, im: Fraction) -> GaussianRational:
        out = object.__new__(cls)
        object.__setattr__(out, "re", re)
        object.__setattr__(out, "im", im)
        return out

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(parse_rational(value), 0)

    def __add__(self, other) -> GaussianRational:
        if isinstance(other, complex):
            return complex(self) + other
        o = GaussianRational.coerce(other)
        return GaussianRational._from_fractions(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> GaussianRational:
        return self + (-other)

    def __rsub__(self, other) -> GaussianRational:
        return (-self) + other

    def __neg__(self) -> GaussianRational:
        return GaussianRational._from_fractions(-self.re, -self.im)

    def __mul__(self, other) -> GaussianRational:
        if isinstance(other, complex):
            return complex(self) * other
        o = GaussianRational.coerce(other)
        return GaussianRational._from_fractions(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are exact")
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational._from_fractions(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"
