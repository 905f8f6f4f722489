"""Exact scalars: rationals, Gaussian rationals and the field Q(sqrt 2).

Nothing in here ever touches a float except ``__float__`` for display.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt

Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; decimal points are rejected."""
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational {s!r} must be written as num/den")
    return Fraction(s)


def format_rational(q) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def centered_mod(x: int, m: int) -> int:
    """Representative of ``x mod m`` in ``[-(m // 2), m - m // 2)``."""
    h = m // 2
    return (x + h) % m - h


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def sqrt_interval(q, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits`` (roughly).

    Both ends are equal when ``q`` is the square of a rational.
    """
    q = as_fraction(q)
    if q < 0:
        raise ValueError("negative input")
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        r = Fraction(rn, rd)
        return r, r
    scale = 1 << bits
    s = isqrt(n * d * scale * scale)
    return Fraction(s, d * scale), Fraction(s + 1, d * scale)


# ---------------------------------------------------------------------------
# Gaussian rationals


class CQ:
    """A complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @classmethod
    def coerce(cls, x) -> CQ:
        if isinstance(x, CQ):
            return x
        return cls(x)

    def __repr__(self):
        if self.im == 0:
            return f"CQ({self.re})"
        return f"CQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def __eq__(self, other):
        if isinstance(other, CQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return CQ(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return CQ(self.re + other, self.im)
        if not isinstance(other, CQ):
            return NotImplemented
        return CQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return CQ(self.re - other, self.im)
        if not isinstance(other, CQ):
            return NotImplemented
        return CQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CQ(self.re * other, self.im * other)
        if not isinstance(other, CQ):
            return NotImplemented
        return CQ(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def inverse(self) -> CQ:
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("CQ division by zero")
        return CQ(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CQ(self.re / other, self.im / other)
        if not isinstance(other, CQ):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CQ.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CQ(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> CQ:
        return CQ(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def abs1(self) -> Fraction:
        """``|re| + |im|``: exact, submultiplicative, and at least the modulus."""
        return abs(self.re) + abs(self.im)

    def abs_interval(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        return sqrt_interval(self.norm2(), bits)

    def is_real(self) -> bool:
        return self.im == 0

    def is_axial(self) -> bool:
        """Real or purely imaginary; for these ``abs1`` equals the modulus."""
        return self.re == 0 or self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))


# ---------------------------------------------------------------------------
# Q(sqrt 2)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@total_ordering
class QSqrt2:
    """``a + b*sqrt(2)`` with rational ``a``, ``b``; ordered as a real number.

    Comparisons are decided exactly by sign analysis of ``a**2 - 2*b**2``.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = as_fraction(a)
        self.b = as_fraction(b)

    @classmethod
    def coerce(cls, x) -> QSqrt2:
        if isinstance(x, QSqrt2):
            return x
        return cls(x)

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}√2"

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def sign(self) -> int:
        a, b = self.a, self.b
        sa, sb = _sign(a), _sign(b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: a + b*sqrt2 has the sign of whichever term is larger
        return sa * _sign(a * a - 2 * b * b)

    def __eq__(self, other):
        if isinstance(other, QSqrt2):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        if not isinstance(other, (QSqrt2, int, Fraction)):
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt2(self.a + other, self.b)
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return QSqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt2(self.a - other, self.b)
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt2(self.a * other, self.b * other)
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return QSqrt2(self.a * other.a + 2 * self.b * other.b,
                      self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt2:
        return QSqrt2(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> QSqrt2:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QSqrt2 division by zero")
        return QSqrt2(self.a / n, -self.b / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt2(self.a / other, self.b / other)
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QSqrt2.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QSqrt2(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def interval(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational enclosure computed from a ``bits``-bit enclosure of sqrt 2."""
        lo, hi = sqrt_interval(2, bits)
        if self.b >= 0:
            return self.a + self.b * lo, self.a + self.b * hi
        return self.a + self.b * hi, self.a + self.b * lo

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        if self.a == 0:
            return float(self.b) * 2 ** 0.5
        # cancellation between a and b*sqrt2 needs extra bits; widen until
        # the enclosure pins down 53 significant bits
        bits = 64 + abs(self.b).numerator.bit_length()
        while True:
            lo, hi = self.interval(bits)
            mid = (lo + hi) / 2
            if mid != 0 and (hi - lo) <= abs(mid) / 2 ** 60:
                return float(mid)
            bits *= 2


SQRT2 = QSqrt2(0, 1)
UNIT = QSqrt2(-1, 1)  # sqrt(2) - 1, a unit of Z[sqrt 2] below 1
