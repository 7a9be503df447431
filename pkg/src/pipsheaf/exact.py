"""Exact scalars: rationals and complex rationals, plus text parsing."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union


class ParseError(ValueError):
    pass


_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction. Floats are refused."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ParseError(f"not a rational string: {text!r}")
    value = Fraction(text.replace(" ", ""))
    return value


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class ComplexRational:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    @classmethod
    def coerce(cls, value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(value, float):
            raise TypeError("floating values are not exact")
        return cls(value, 0)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, ComplexRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __add__(self, other):
        try:
            other = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero complex rational")
        num = self * other.conjugate()
        return ComplexRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) / self

    def __repr__(self):
        return f"ComplexRational({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        return format_complex(self)


Scalar = Union[int, Fraction, ComplexRational]


def cq(value) -> ComplexRational:
    return ComplexRational.coerce(value)


def parse_complex(re_text, im_text="0") -> ComplexRational:
    return ComplexRational(parse_rational(re_text), parse_rational(im_text))


def format_complex(z: ComplexRational) -> str:
    if z.im == 0:
        return format_rational(z.re)
    if z.re == 0:
        return f"{format_rational(z.im)}i"
    sign = "+" if z.im > 0 else "-"
    return f"{format_rational(z.re)}{sign}{format_rational(abs(z.im))}i"
