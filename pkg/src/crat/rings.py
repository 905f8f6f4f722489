"""Concrete pseudo-valuated rings and their principal ideals.

Three contexts are supported:

``PadicContext(p)``
    The integers with the p-adic topology, ``V_p(x) = p**-v_p(x)``.
``QuadContext()``
    The dense subring Z[sqrt 2] of the reals with the absolute value.
``PolyContext(R)``
    Polynomials over Gaussian rationals with the weighted l1 norm
    ``V_R(f) = sum |c_k|_1 R**k``, which dominates the sup norm on the
    closed disk ``|z| <= R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .core import PseudoValuation
from .errors import MixedRings, UnsupportedRing, WrongRing, ZeroDivisor
from .numbers import CQ, UNIT, QSqrt2, as_fraction, format_rational
from .poly import Poly


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def padic_order(x: int, p: int) -> int | None:
    """Exponent of ``p`` in ``x``; ``None`` for ``x == 0``."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class RingContext:
    kind = "abstract"

    def coerce(self, x):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    @property
    def valuation(self) -> PseudoValuation:
        return self.valuations[0]

    def divides(self, g, x) -> bool:
        raise NotImplementedError

    def ideal(self, generator) -> PrincipalIdeal:
        raise NotImplementedError

    def unit_ideal(self) -> PrincipalIdeal:
        return self.ideal(1)

    def zero_ideal(self) -> PrincipalIdeal:
        return self.ideal(0)

    def _key(self):
        return (self.kind,)

    def __eq__(self, other):
        return isinstance(other, RingContext) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"{type(self).__name__}{self._key()[1:]}"


class PadicContext(RingContext):
    kind = "padic"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"p={p} is not prime")
        self.p = p
        self.valuations = [PseudoValuation(f"V_{p}", self._vp, self, {"p": p})]

    def _key(self):
        return (self.kind, self.p)

    def _vp(self, x: int) -> Fraction:
        v = padic_order(x, self.p)
        return Fraction(0) if v is None else Fraction(1, self.p ** v)

    def coerce(self, x):
        if isinstance(x, int) and not isinstance(x, bool):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise MixedRings(f"{x!r} is not an element of Z ({self!r})")

    def descriptor(self):
        return {"kind": "padic", "p": self.p}

    def divides(self, g, x) -> bool:
        if g == 0:
            return x == 0
        return x % g == 0

    def ideal(self, generator) -> PrincipalIdeal:
        return PrincipalIdeal(self, abs(self.coerce(generator)))

    def ball_exponent(self, eps) -> int:
        """Least ``m >= 0`` with ``p**-m < eps``; the ball ``B(eps)`` is ``p**m Z``."""
        eps = as_fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        m = 0
        while Fraction(1, self.p ** m) >= eps:
            m += 1
        return m


class QuadContext(RingContext):
    kind = "quad"

    def __init__(self):
        self.valuations = [PseudoValuation("abs", abs, self)]

    def coerce(self, x):
        if isinstance(x, int) and not isinstance(x, bool):
            return QSqrt2(x)
        if isinstance(x, QSqrt2) and x.is_integral():
            return x
        raise MixedRings(f"{x!r} is not an element of Z[sqrt 2]")

    def descriptor(self):
        return {"kind": "quad"}

    def divides(self, g, x) -> bool:
        g, x = self.coerce(g), self.coerce(x)
        if g == 0:
            return x == 0
        return (x / g).is_integral()

    def ideal(self, generator) -> PrincipalIdeal:
        return PrincipalIdeal(self, self.coerce(generator))


class PolyContext(RingContext):
    kind = "poly"

    def __init__(self, R=1):
        R = as_fraction(R)
        if R <= 0:
            raise ValueError("disk radius must be positive")
        self.R = R
        self.valuations = [PseudoValuation(f"V_R({R})", self._norm, self, {"R": R})]

    def _key(self):
        return (self.kind, self.R)

    def _norm(self, f: Poly) -> Fraction:
        return f.weighted_l1(self.R)

    def coerce(self, x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction, CQ)) and not isinstance(x, bool):
            return Poly([x])
        raise MixedRings(f"{x!r} is not a polynomial")

    def descriptor(self):
        return {"kind": "poly", "R": format_rational(self.R)}

    def divides(self, g, x) -> bool:
        return self.coerce(g).divides(self.coerce(x))

    def inside(self, c) -> bool:
        """``|c| <= R`` decided exactly on squared moduli."""
        return CQ.coerce(c).norm2() <= self.R * self.R

    def ideal(self, generator) -> PrincipalIdeal:
        g = self.coerce(generator)
        if not g:
            return PrincipalIdeal(self, g, None)
        if g.degree == 0:
            return PrincipalIdeal(self, Poly([1]), ())
        return PrincipalIdeal(self, g.monic(), None)

    def ideal_from_roots(self, factors) -> PrincipalIdeal:
        """Ideal generated by ``prod (z - root)**mult``."""
        merged: dict[CQ, int] = {}
        for root, mult in factors:
            if mult < 0:
                raise ValueError("negative multiplicity")
            root = CQ.coerce(root)
            merged[root] = merged.get(root, 0) + mult
        fs = tuple(sorted(((r, m) for r, m in merged.items() if m > 0),
                          key=lambda t: (t[0].re, t[0].im)))
        return PrincipalIdeal(self, Poly.from_roots(fs), fs)


@dataclass(frozen=True)
class PrincipalIdeal:
    """Ideal generated by a single element.

    For polynomial ideals ``factors`` optionally holds the factored form
    ``((root, mult), ...)``; the unit ideal has ``factors == ()`` and the
    zero ideal has generator 0.
    """

    ring: RingContext
    generator: object
    factors: tuple | None = None

    def contains(self, x) -> bool:
        return self.ring.divides(self.generator, self.ring.coerce(x))

    __contains__ = contains

    def is_unit(self) -> bool:
        g = self.generator
        if isinstance(self.ring, QuadContext):
            return g != 0 and abs(g.norm()) == 1
        if isinstance(self.ring, PolyContext):
            return g.degree == 0
        return g == 1

    def is_zero(self) -> bool:
        return self.generator == 0

    def __str__(self):
        if isinstance(self.ring, PolyContext) and self.factors is not None:
            if not self.factors:
                return "<1>"
            return "<" + "*".join(f"(z-{r})^{m}" for r, m in self.factors) + ">"
        return f"<{self.generator}>"


def same_ring(*ideals) -> RingContext:
    ring = ideals[0].ring
    for I in ideals[1:]:
        if I.ring != ring:
            raise MixedRings(f"ideals from {ring!r} and {I.ring!r}")
    return ring


# ---------------------------------------------------------------------------
# p-adic integers


def padic_tcm(I: PrincipalIdeal, J: PrincipalIdeal, p: int | None = None) -> bool:
    """Whether ``I`` and ``J`` are TCM in Z with the p-adic topology.

    They are exactly when one of them is dense, i.e. when ``p`` fails to
    divide one of the generators.
    """
    ring = same_ring(I, J)
    if not isinstance(ring, PadicContext) or (p is not None and p != ring.p):
        raise WrongRing("padic_tcm needs two ideals of one p-adic context")
    p = ring.p
    return I.generator % p != 0 or J.generator % p != 0


# ---------------------------------------------------------------------------
# Z[sqrt 2]


def _factorint(n: int) -> dict[int, int]:
    from sympy import factorint

    return factorint(n)


def _unit_group_multiple(m: int) -> int:
    """A multiple of the order of every unit of Z[sqrt 2] / (m)."""
    total = 1
    for p, e in _factorint(m).items():
        if p == 2:
            total = lcm(total, 2 ** (2 * e - 1))
        elif p % 8 in (1, 7):
            total = lcm(total, (p - 1) ** 2 * p ** (2 * (e - 1)))
        else:
            total = lcm(total, (p * p - 1) * p ** (2 * (e - 1)))
    return total


def _pow_mod(base: tuple[int, int], e: int, m: int) -> tuple[int, int]:
    ra, rb = 1 % m, 0
    a, b = base[0] % m, base[1] % m
    while e:
        if e & 1:
            ra, rb = (ra * a + 2 * rb * b) % m, (ra * b + rb * a) % m
        a, b = (a * a + 2 * b * b) % m, (2 * a * b) % m
        e >>= 1
    return ra, rb


@lru_cache(maxsize=1024)
def unit_order_mod(d: QSqrt2) -> int:
    """Least ``k >= 1`` with ``u**k == 1 (mod d)`` for ``u = sqrt 2 - 1``."""
    m = abs(int(d.norm()))
    if m == 1:
        return 1
    da, db = int(d.a), int(d.b)

    def is_one(k: int) -> bool:
        a, b = _pow_mod((int(UNIT.a), int(UNIT.b)), k, m)
        a -= 1
        # (a + b sqrt2) / d is integral iff (a + b sqrt2) * conj(d) is 0 mod N(d)
        return (a * da - 2 * b * db) % m == 0 and (b * da - a * db) % m == 0

    k = _unit_group_multiple(m)
    assert is_one(k)
    for q in _factorint(k):
        while k % q == 0 and is_one(k // q):
            k //= q
    return k


def quad_inverse_approx(d, eps) -> QSqrt2:
    """Return ``s`` in Z[sqrt 2] with ``|s*d - 1| < eps``.

    Units are inverted exactly. Otherwise ``s = (1 - u**k) / d`` where
    ``u = sqrt 2 - 1`` and ``k`` is the least multiple of the order of ``u``
    modulo ``d`` with ``u**k < eps``; then ``s*d - 1 = -u**k`` exactly.
    """
    d = QuadContext().coerce(d)
    if d == 0:
        raise ZeroDivisor("no approximate inverse of 0")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if abs(d.norm()) == 1:
        return d.inverse()
    step = unit_order_mod(d)
    k = step
    uk = UNIT ** k
    ustep = UNIT ** step
    while not uk < eps:
        k += step
        uk = uk * ustep
    s = (1 - uk) / d
    assert s.is_integral()
    return s


def quad_approx(target, eps) -> QSqrt2:
    """Element of Z[sqrt 2] within ``eps`` of the rational ``target``."""
    t = as_fraction(target)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t.denominator == 1:
        return QSqrt2(t)
    num, den = t.numerator, t.denominator
    return quad_inverse_approx(den, eps * den / abs(num)) * num


def quad_divmod(x: QSqrt2, y: QSqrt2) -> tuple[QSqrt2, QSqrt2]:
    """Euclidean division in Z[sqrt 2]; ``|N(r)| < |N(y)|``."""
    if y == 0:
        raise ZeroDivisor("division by zero")
    q = x / y
    q = QSqrt2(round(q.a), round(q.b))
    return q, x - q * y


def quad_xgcd(a: QSqrt2, b: QSqrt2) -> tuple[QSqrt2, QSqrt2, QSqrt2]:
    x0, x1, y0, y1 = QSqrt2(1), QSqrt2(0), QSqrt2(0), QSqrt2(1)
    while b != 0:
        q, r = quad_divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# ---------------------------------------------------------------------------
# lattice operations


def _check_lattice_ring(I, J) -> RingContext:
    ring = same_ring(I, J)
    if isinstance(ring, QuadContext):
        raise UnsupportedRing("join/meet are not implemented for Z[sqrt 2]")
    if isinstance(ring, PolyContext):
        for K in (I, J):
            if K.factors is None and not K.is_zero():
                raise ValueError(f"{K} needs a factored form for join/meet")
    return ring


def ideal_add(I: PrincipalIdeal, J: PrincipalIdeal) -> PrincipalIdeal:
    """Join: gcd of generators (minimum multiplicity per root for polynomials)."""
    ring = _check_lattice_ring(I, J)
    if isinstance(ring, PadicContext):
        return ring.ideal(gcd(I.generator, J.generator))
    if I.is_zero():
        return J
    if J.is_zero():
        return I
    a, b = dict(I.factors), dict(J.factors)
    return ring.ideal_from_roots((r, min(m, b[r])) for r, m in a.items() if r in b)


def ideal_meet(I: PrincipalIdeal, J: PrincipalIdeal) -> PrincipalIdeal:
    """Meet: lcm of generators (maximum multiplicity per root for polynomials)."""
    ring = _check_lattice_ring(I, J)
    if isinstance(ring, PadicContext):
        return ring.ideal(lcm(I.generator, J.generator))
    if I.is_zero():
        return I
    if J.is_zero():
        return J
    a, b = dict(I.factors), dict(J.factors)
    return ring.ideal_from_roots((r, max(a.get(r, 0), b.get(r, 0))) for r in {**a, **b})


def poly_seminorm(f, R) -> Fraction:
    """Weighted l1 norm ``sum |c_k|_1 R**k`` of a polynomial."""
    return Poly.coerce(f).weighted_l1(as_fraction(R))


def context_from_descriptor(desc: dict) -> RingContext:
    kind = desc.get("kind")
    if kind == "padic":
        return PadicContext(int(desc["p"]))
    if kind == "quad":
        return QuadContext()
    if kind == "poly":
        return PolyContext(as_fraction(desc.get("R", "1/1")))
    raise ValueError(f"unknown ring kind {kind!r}")
