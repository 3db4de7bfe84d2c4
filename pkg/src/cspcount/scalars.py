"""Exact complex scalars with rational real and imaginary parts.

All deciders in this package hinge on exact zero tests (degeneracy,
proportionality, gadget scalars), so scalars are pairs of
arbitrary-precision rationals and every operation is a field operation
with structural equality. There is no floating-point mode.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd, lcm

from .errors import InputError

__all__ = [
    "GaussianRational",
    "ZERO",
    "ONE",
    "TWO",
    "I",
    "arith",
    "parse_scalar",
    "format_scalar",
    "gr",
]


class GaussianRational:
    """A complex number re + im*i, both parts Fractions in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- field operations -------------------------------------------------

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        if other.is_zero():
            raise ZeroDivisionError("division of exact scalar by zero")
        n = other.re * other.re + other.im * other.im
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return ONE / (self ** (-n))
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "GaussianRational":
        return ONE / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    # -- structural value semantics ---------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"gr({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    # -- kernel interchange ------------------------------------------------

    def as_triple(self) -> tuple[int, int, int]:
        """(p, q, r) with value (p + q*i)/r, r > 0, gcd(p, q, r) = 1."""
        r = lcm(self.re.denominator, self.im.denominator)
        p = self.re.numerator * (r // self.re.denominator)
        q = self.im.numerator * (r // self.im.denominator)
        g = gcd(p, q, r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        return p, q, r

    @staticmethod
    def from_triple(p: int, q: int, r: int) -> "GaussianRational":
        return GaussianRational(Fraction(p, r), Fraction(q, r))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
TWO = GaussianRational(2)
I = GaussianRational(0, 1)


def gr(value) -> GaussianRational:
    """Coerce an int, Fraction, (re, im) pair or grammar string to a scalar."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    if isinstance(value, tuple) and len(value) == 2:
        return GaussianRational(value[0], value[1])
    if isinstance(value, str):
        return parse_scalar(value)
    raise InputError(f"cannot interpret {value!r} as an exact scalar")


def arith(a: GaussianRational, b: GaussianRational, op: str) -> GaussianRational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InputError(f"unknown scalar operation {op!r}")


# Grammar: rational | rational ('+'|'-') rational 'i' | rational 'i'
# with rational = ['-'] digits ['/' digits].
_RAT = r"-?\d+(?:/\d+)?"
_REAL_RE = _re.compile(rf"^({_RAT})$")
_IMAG_RE = _re.compile(rf"^({_RAT})i$")
_BOTH_RE = _re.compile(rf"^({_RAT})([+-])({_RAT})i$")


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {text!r}") from None


def parse_scalar(text: str) -> GaussianRational:
    s = text.strip()
    m = _REAL_RE.match(s)
    if m:
        return GaussianRational(_parse_rational(m.group(1)))
    m = _IMAG_RE.match(s)
    if m:
        return GaussianRational(0, _parse_rational(m.group(1)))
    m = _BOTH_RE.match(s)
    if m:
        im = _parse_rational(m.group(3))
        if m.group(2) == "-":
            im = -im
        return GaussianRational(_parse_rational(m.group(1)), im)
    raise InputError(f"malformed scalar text {text!r}")


def format_scalar(a: GaussianRational) -> str:
    if not a.im:
        return str(a.re)
    if not a.re:
        return f"{a.im}i"
    sign = "+" if a.im > 0 else "-"
    return f"{a.re}{sign}{abs(a.im)}i"
