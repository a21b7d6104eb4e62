"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element is stored on the power basis ``1, x, ..., x^(phi(m)-1)`` with
``x = exp(2 pi i / m)``, as integer numerators over one positive common
denominator. Products are reduced modulo the m-th cyclotomic polynomial, so
the representation is canonical and equality is structural.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    # x^m - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(quot) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        quot[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder")
    return quot


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce(coeffs: list[int], m: int) -> list[int]:
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            # Phi is monic: x^deg = -sum(phi[j] x^j)
            for j in range(deg):
                coeffs[i - deg + j] -= c * phi[j]
            coeffs[i] = 0
    coeffs = coeffs[:deg]
    coeffs.extend([0] * (deg - len(coeffs)))
    return coeffs


class CyclotomicNumber:
    """Element of Q(zeta_m). Immutable."""

    __slots__ = ("m", "coeffs", "den")

    def __init__(self, m: int, coeffs, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        coeffs = _reduce([int(c) for c in coeffs], m)
        if den < 0:
            coeffs, den = [-c for c in coeffs], -den
        g = den
        for c in coeffs:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            coeffs = [c // g for c in coeffs]
            den //= g
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q, m: int = 1) -> CyclotomicNumber:
        q = Fraction(q)
        coeffs = [0] * euler_phi(m)
        coeffs[0] = q.numerator
        return cls(m, coeffs, q.denominator)

    @classmethod
    def root_of_unity(cls, turn: Fraction | int, m: int | None = None) -> CyclotomicNumber:
        """exp(2 pi i * turn), placed in Q(zeta_m) (m defaults to the denominator)."""
        turn = Fraction(turn)
        if m is None:
            m = turn.denominator
        if m % turn.denominator:
            raise ValueError(f"zeta^{turn} does not live in Q(zeta_{m})")
        k = (turn.numerator * (m // turn.denominator)) % m
        coeffs = [0] * max(k + 1, 1)
        coeffs[k] = 1
        return cls(m, coeffs)

    # -- field plumbing ---------------------------------------------------
    def lift(self, M: int) -> CyclotomicNumber:
        """Embed into Q(zeta_M); requires m | M."""
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError(f"Q(zeta_{self.m}) is not a subfield of Q(zeta_{M})")
        step = M // self.m
        coeffs = [0] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CyclotomicNumber(M, coeffs, self.den)

    def _coerce_pair(self, other) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if not isinstance(other, CyclotomicNumber):
            if isinstance(other, bool) or not isinstance(other, (int, Rational)):
                raise TypeError(f"cannot combine CyclotomicNumber with {type(other).__name__}")
            other = CyclotomicNumber.rational(other, self.m)
        M = lcm(self.m, other.m)
        return self.lift(M), other.lift(M)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        coeffs = [x * b.den + y * a.den for x, y in zip(a.coeffs, b.coeffs)]
        return CyclotomicNumber(a.m, coeffs, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, [-c for c in self.coeffs], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        prod = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber(a.m, prod, a.den * b.den)

    __rmul__ = __mul__

    def galois(self, k: int) -> CyclotomicNumber:
        """Apply the automorphism zeta -> zeta^k (gcd(k, m) = 1)."""
        if gcd(k, self.m) != 1:
            raise ValueError(f"{k} is not a unit mod {self.m}")
        coeffs = [0] * self.m
        for i, c in enumerate(self.coeffs):
            coeffs[(i * k) % self.m] += c
        return CyclotomicNumber(self.m, coeffs, self.den)

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1 % self.m) if self.m > 1 else self

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of all Galois conjugates."""
        acc = CyclotomicNumber.rational(1, self.m)
        for k in range(1, max(self.m, 2)):
            if gcd(k, self.m) == 1:
                acc = acc * self.galois(k)
        return acc.to_fraction()

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # x^-1 = (product of the other conjugates) / N(x)
        others = CyclotomicNumber.rational(1, self.m)
        for k in range(2, self.m):
            if gcd(k, self.m) == 1:
                others = others * self.galois(k)
        n = (self * others).to_fraction()
        return others * Fraction(1) / n

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        q = Fraction(other)
        if q == 0:
            raise ZeroDivisionError("division by zero")
        return CyclotomicNumber(self.m, [c * q.denominator for c in self.coeffs], self.den * q.numerator)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CyclotomicNumber.rational(1, self.m), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        """Exact rational value; raises if the element is not in Q."""
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.coeffs[0], self.den)

    def imaginary_part_is_zero(self) -> bool:
        return self == self.conjugate()

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z ** i for i, c in enumerate(self.coeffs)) / self.den

    def __complex__(self) -> complex:
        return self.to_complex()

    def __eq__(self, other) -> bool:
        try:
            a, b = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs and a.den == b.den

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((self.m, self.coeffs, self.den))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        body = " + ".join(terms) or "0"
        return f"CyclotomicNumber(m={self.m}: ({body})/{self.den})"


def one_over_one_minus_root(turn: Fraction, m: int) -> CyclotomicNumber:
    """1 / (1 - exp(2 pi i turn)) in Q(zeta_m), for turn not an integer.

    With eta a primitive r-th root of unity, sum_j j eta^j = -r / (1 - eta),
    so the inverse is a short explicit sum and needs no field division.
    """
    turn = Fraction(turn) % 1
    if turn == 0:
        raise ZeroDivisionError("1 - zeta vanishes for a trivial rotation")
    r = turn.denominator
    if m % r:
        raise ValueError(f"exp(2 pi i {turn}) is not in Q(zeta_{m})")
    step = (turn.numerator * (m // r)) % m
    coeffs = [0] * m
    for j in range(1, r):
        coeffs[(j * step) % m] -= j
    return CyclotomicNumber(m, coeffs, r)
