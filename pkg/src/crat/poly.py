"""Univariate polynomials with exact Gaussian-rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .numbers import CQ

_ZERO = CQ(0)
_ONE = CQ(1)


class Poly:
    """Immutable polynomial; ``coeffs[k]`` is the coefficient of ``z**k``.

    The coefficient tuple never carries trailing zeros, so the zero
    polynomial has ``coeffs == ()`` and degree ``-1``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        cs = [CQ.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> Poly:
        if isinstance(x, Poly):
            return x
        return cls([x])

    @classmethod
    def z(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def linear(cls, root) -> Poly:
        """``z - root``."""
        return cls([-CQ.coerce(root), 1])

    @classmethod
    def from_roots(cls, factors) -> Poly:
        """Monic product of ``(z - root)**mult`` over ``(root, mult)`` pairs."""
        out = cls([1])
        for root, mult in factors:
            out = out * cls.linear(root) ** mult
        return out

    # -- basic protocol -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> CQ:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, CQ)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms)

    # -- ring operations ----------------------------------------------------

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction, CQ)):
                return NotImplemented
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction, CQ)):
                return NotImplemented
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction, CQ)):
                return NotImplemented
            return Poly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = Poly.coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        lead_inv = other.coeffs[-1].inverse()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [_ZERO] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * lead_inv
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quot), Poly(rem[:other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        """True when ``self`` divides ``other`` exactly."""
        if not self.coeffs:
            return not Poly.coerce(other).coeffs
        return not (Poly.coerce(other) % self).coeffs

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self * self.coeffs[-1].inverse()

    # -- analysis -------------------------------------------------------------

    def __call__(self, x) -> CQ:
        x = CQ.coerce(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, k: int = 1) -> Poly:
        cs = self.coeffs
        for _ in range(k):
            cs = [c * i for i, c in enumerate(cs)][1:]
        return Poly(cs)

    def taylor(self, center) -> list[CQ]:
        """Coefficients of ``self`` expanded in powers of ``(z - center)``."""
        center = CQ.coerce(center)
        n = len(self.coeffs)
        out = []
        for k in range(n):
            acc = _ZERO
            for j in range(k, n):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * comb(j, k) * center ** (j - k)
            out.append(acc)
        return out

    def jet(self, center, order: int) -> list[CQ]:
        """``[f(c), f'(c)/1!, ..., f^(order)(c)/order!]`` by differentiation."""
        out = []
        d = self
        for k in range(order + 1):
            out.append(d(center) / factorial(k))
            d = d.derivative()
        return out

    def weighted_l1(self, radius) -> Fraction:
        """``sum |c_k|_1 * radius**k`` with ``|c|_1 = |re| + |im|``."""
        total = Fraction(0)
        rk = Fraction(1)
        for c in self.coeffs:
            total += c.abs1() * rk
            rk *= radius
        return total


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g`` and ``g`` monic (or zero)."""
    r0, r1 = a, b
    x0, x1 = Poly([1]), Poly()
    y0, y1 = Poly(), Poly([1])
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if not r0:
        return r0, x0, y0
    inv = r0.coeffs[-1].inverse()
    return r0 * inv, x0 * inv, y0 * inv
