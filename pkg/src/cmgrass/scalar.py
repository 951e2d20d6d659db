"""Scalars over the Gaussian rationals, with a floating complex fallback.

Every value in the toolkit is built from :class:`Scalar`.  A scalar is either

* *exact*: a pair of arbitrary-precision rationals (real and imaginary part),
  closed under field arithmetic with decidable equality; or
* *numeric*: a complex double, compared up to the global tolerance
  ``|a - b| <= eps * max(1, |a|, |b|)``.

Mixing the two modes coerces to numeric.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

EXACT = "exact"
NUMERIC = "numeric"

_EPS = 1e-9


def set_tolerance(eps: float) -> None:
    """Set the global numeric comparison tolerance."""
    global _EPS
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    _EPS = float(eps)


def tolerance() -> float:
    return _EPS


class Scalar:
    """An element of Q(i) (exact mode) or C-as-doubles (numeric mode)."""

    __slots__ = ("re", "im", "val")

    def __init__(self, re=None, im=None, val=None):
        # exact: re, im are Fractions and val is None; numeric: val is complex
        self.re = re
        self.im = im
        self.val = val

    # ---------------------------------------------------------------- factories

    @staticmethod
    def exact(re, im=0) -> "Scalar":
        return Scalar(Fraction(re), Fraction(im))

    @staticmethod
    def numeric(z) -> "Scalar":
        return Scalar(val=complex(z))

    @property
    def mode(self) -> str:
        return NUMERIC if self.val is not None else EXACT

    @property
    def is_exact(self) -> bool:
        return self.val is None

    # ---------------------------------------------------------------- conversion

    def to_complex(self) -> complex:
        if self.val is not None:
            return self.val
        return complex(float(self.re), float(self.im))

    def to_numeric(self) -> "Scalar":
        return self if self.val is not None else Scalar(val=self.to_complex())

    def sort_key(self):
        """Lexicographic (Re, Im) key; exact keys stay exact."""
        if self.is_exact:
            return (self.re, self.im)
        return (Fraction(self.val.real).limit_denominator(10**12),
                Fraction(self.val.imag).limit_denominator(10**12))

    # ---------------------------------------------------------------- predicates

    def is_zero(self) -> bool:
        if self.is_exact:
            return self.re == 0 and self.im == 0
        return abs(self.val) <= _EPS

    def is_one(self) -> bool:
        return (self - ONE).is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ---------------------------------------------------------------- arithmetic

    def __add__(self, other):
        other = sc(other)
        if self.is_exact and other.is_exact:
            return Scalar(self.re + other.re, self.im + other.im)
        return Scalar(val=self.to_complex() + other.to_complex())

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return Scalar(-self.re, -self.im)
        return Scalar(val=-self.val)

    def __sub__(self, other):
        return self + (-sc(other))

    def __rsub__(self, other):
        return sc(other) + (-self)

    def __mul__(self, other):
        other = sc(other)
        if self.is_exact and other.is_exact:
            a, b, c, d = self.re, self.im, other.re, other.im
            return Scalar(a * c - b * d, a * d + b * c)
        return Scalar(val=self.to_complex() * other.to_complex())

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_exact:
            n = self.re * self.re + self.im * self.im
            if n == 0:
                raise ZeroDivisionError("exact scalar division by zero")
            return Scalar(self.re / n, -self.im / n)
        if self.val == 0:
            raise ZeroDivisionError("numeric scalar division by zero")
        return Scalar(val=1.0 / self.val)

    def __truediv__(self, other):
        return self * sc(other).inverse()

    def __rtruediv__(self, other):
        return sc(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        if self.is_exact:
            return Scalar(self.re, -self.im)
        return Scalar(val=self.val.conjugate())

    def __abs__(self) -> float:
        return abs(self.to_complex())

    # ---------------------------------------------------------------- comparison

    def __eq__(self, other) -> bool:
        try:
            other = sc(other)
        except TypeError:
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.re == other.re and self.im == other.im
        a, b = self.to_complex(), other.to_complex()
        return abs(a - b) <= _EPS * max(1.0, abs(a), abs(b))

    def __hash__(self):
        if not self.is_exact:
            raise TypeError("numeric scalars are not hashable")
        return hash((self.re, self.im))

    # ---------------------------------------------------------------- display

    def __repr__(self):
        if self.is_exact:
            if self.im == 0:
                return str(self.re)
            if self.re == 0:
                return f"{self.im}i"
            sign = "+" if self.im > 0 else "-"
            return f"({self.re}{sign}{abs(self.im)}i)"
        return repr(self.val)


def sc(x) -> Scalar:
    """Coerce ints, Fractions, floats, complexes or (re, im) pairs to Scalar."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(Fraction(x), Fraction(0))
    if isinstance(x, (float, complex)):
        return Scalar(val=complex(x))
    if isinstance(x, tuple) and len(x) == 2:
        return Scalar(Fraction(x[0]), Fraction(x[1]))
    raise TypeError(f"cannot coerce {x!r} to Scalar")


ZERO = Scalar.exact(0)
ONE = Scalar.exact(1)
I = Scalar.exact(0, 1)


def close(a, b, tol=None) -> bool:
    """Numeric closeness with an explicit tolerance (defaults to the global one)."""
    t = _EPS if tol is None else tol
    x, y = sc(a).to_complex(), sc(b).to_complex()
    return abs(x - y) <= t * max(1.0, abs(x), abs(y))
