"""Exact Gaussian rationals ``(a + b i) / den``.

Stored as three Python ints with ``den > 0`` and ``gcd(a, b, den) == 1`` so
that equality and hashing are structural.  The real and imaginary parts are
exposed as :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["GaussRat", "ZERO", "ONE", "I"]


def _coerce_or_none(value):
    try:
        return GaussRat.coerce(value)
    except TypeError:
        return None


class GaussRat:
    __slots__ = ("a", "b", "den")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        den = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (den // re.denominator)
        b = im.numerator * (den // im.denominator)
        g = gcd(a, b, den)
        self.a, self.b, self.den = a // g, b // g, den // g

    @classmethod
    def _raw(cls, a: int, b: int, den: int) -> "GaussRat":
        # caller guarantees den != 0; normalizes sign and common factors
        if den < 0:
            a, b, den = -a, -b, -den
        g = gcd(a, b, den)
        if g != 1:
            a //= g
            b //= g
            den //= g
        obj = object.__new__(cls)
        obj.a, obj.b, obj.den = a, b, den
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, (Rational, Fraction)):
            return cls(value)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussRat")

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.den)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.den)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_real(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, GaussRat):
            try:
                other = GaussRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self.a == other.a and self.b == other.b and self.den == other.den

    def __hash__(self):
        return hash((self.a, self.b, self.den))

    def __neg__(self):
        return GaussRat._raw(-self.a, -self.b, self.den)

    def __add__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        if self.den == other.den:
            return GaussRat._raw(self.a + other.a, self.b + other.b, self.den)
        return GaussRat._raw(
            self.a * other.den + other.a * self.den,
            self.b * other.den + other.b * self.den,
            self.den * other.den,
        )

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else other - self

    def __mul__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return GaussRat._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self.den * other.den)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRat":
        return GaussRat._raw(self.a, -self.b, self.den)

    def inverse(self) -> "GaussRat":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        # 1/((a+bi)/d) = d (a - bi) / (a^2 + b^2)
        return GaussRat._raw(self.den * self.a, -self.den * self.b, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussRat):
            other = _coerce_or_none(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __complex__(self):
        return complex(self.a / self.den, self.b / self.den)

    def to_text(self) -> str:
        """Canonical ``a/b+c/d*i`` form (real or imaginary part omitted when zero)."""
        re, im = self.re, self.im
        if im == 0:
            return _frac_text(re)
        if re == 0:
            return _imag_text(im)
        im_txt = _imag_text(abs(im))
        return f"{_frac_text(re)}{'-' if im < 0 else '+'}{im_txt}"

    def __repr__(self):
        return f"GaussRat({self.to_text()})"

    __str__ = to_text


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _imag_text(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{_frac_text(q)}*i"


ZERO = GaussRat._raw(0, 0, 1)
ONE = GaussRat._raw(1, 0, 1)
I = GaussRat._raw(0, 1, 1)
