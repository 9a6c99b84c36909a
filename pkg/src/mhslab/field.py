"""Ground fields: exact rationals and Gaussian rationals.

``Fraction`` carries Q; ``GaussRat`` carries Q(i).  Both are immutable and
hashable, and mixed arithmetic coerces Q into Q(i).  Scalars serialize as
"a/b" (denominator omitted when 1) and "a/b+c/di" with either part
omissible.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import ParseError

Q = "Q"
QI = "QI"


class GaussRat:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "GaussRat":
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussRat(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRat((self.re * o.re + self.im * o.im) / n,
                        (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_rational(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_qi(self)


I = GaussRat(0, 1)

Scalar = Union[Fraction, GaussRat]


def zero(field: str) -> Scalar:
    return Fraction(0) if field == Q else GaussRat(0)


def one(field: str) -> Scalar:
    return Fraction(1) if field == Q else GaussRat(1)


def as_scalar(field: str, x) -> Scalar:
    """Coerce ints / Fractions / GaussRats into the given field."""
    if field == Q:
        if isinstance(x, GaussRat):
            if not x.is_rational():
                raise FieldError(f"{x} is not rational")
            return x.re
        return Fraction(x)
    if isinstance(x, GaussRat):
        return x
    return GaussRat(x)


class FieldError(ParseError):
    pass


# -- serialization ----------------------------------------------------------

def format_q(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_qi(x) -> str:
    if isinstance(x, (int, Fraction)):
        x = GaussRat(x)
    if not x.im:
        return format_q(x.re)
    imag = format_q(abs(x.im))
    imag = "i" if imag == "1" else imag + "i"
    if not x.re:
        return imag if x.im > 0 else "-" + imag
    sign = "+" if x.im > 0 else "-"
    return f"{format_q(x.re)}{sign}{imag}"


_TERM = re.compile(r"^([+-]?)(?:(\d+(?:/\d+)?)?(i)|(\d+(?:/\d+)?))$")


def parse_q(s: str) -> Fraction:
    g = parse_qi(s)
    if not g.is_rational():
        raise ParseError(f"expected a rational, got {s!r}")
    return g.re


def parse_qi(s: str) -> GaussRat:
    """Parse "a/b+c/di" with either part omissible."""
    text = s.strip().replace(" ", "")
    if not text:
        raise ParseError("empty scalar string")
    # Split into signed terms.
    terms = re.findall(r"[+-]?[^+-]+", text)
    if not terms or "".join(terms) != text:
        raise ParseError(f"malformed scalar {s!r}")
    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_re = seen_im = False
    for term in terms:
        m = _TERM.match(term)
        if not m:
            raise ParseError(f"malformed scalar term {term!r} in {s!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3):  # imaginary term
            if seen_im:
                raise ParseError(f"duplicate imaginary part in {s!r}")
            mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            im_part = sign * mag
            seen_im = True
        else:
            if seen_re:
                raise ParseError(f"duplicate real part in {s!r}")
            re_part = sign * Fraction(m.group(4))
            seen_re = True
    return GaussRat(re_part, im_part)


def format_scalar(field: str, x) -> str:
    return format_q(x) if field == Q else format_qi(x)


def parse_scalar(field: str, s: str) -> Scalar:
    return parse_q(s) if field == Q else parse_qi(s)
