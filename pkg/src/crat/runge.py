"""Density certificates for ideals whose zeros lie outside the disk.

With the pole ``c`` outside the closed disk ``|z| <= R`` the function
``f / (z - c)**m`` has a Taylor series at 0 converging geometrically on the
disk, so truncating it gives ``h`` with ``h * (z - c)**m`` close to ``f``.
The truncation degree comes from a closed-form bound on the discarded tail.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DegreeBudgetExceeded, PoleInsideDisk
from .numbers import CQ, as_fraction
from .poly import Poly

DEFAULT_DEGREE_BUDGET = 64
# rational upper bound for sqrt 2: converts |w| into |re w| + |im w|
_SQRT2_UP = Fraction(99, 70)


def degree_budget() -> int:
    return int(os.environ.get("CRAT_DEGREE_BUDGET", DEFAULT_DEGREE_BUDGET))


@dataclass(frozen=True)
class RungeResult:
    h: Poly
    bound: Fraction
    degree: int


@dataclass(frozen=True)
class DensityCertificate:
    """``element`` lies in the ideal and ``V_R(1 - element) <= bound``."""

    element: Poly
    bound: Fraction
    degree: int


def _outside(c: CQ, R: Fraction) -> None:
    if c.norm2() <= R * R:
        raise PoleInsideDisk(f"pole {c} is not outside the disk of radius {R}")


def _modulus_lower(c: CQ, R: Fraction) -> Fraction:
    """Rational ``lo <= |c|`` with ``lo > R`` (needs ``|c| > R``)."""
    from .numbers import sqrt_interval

    bits = 64
    while True:
        lo, _ = sqrt_interval(c.norm2(), bits)
        if lo > R:
            return lo
        bits *= 2


def _tail_sum(q: Fraction, m: int, t: int) -> Fraction:
    """``sum_{k > t} C(k+m-1, m-1) q**k`` in closed form (0 < q < 1)."""
    full = (1 - q) ** -m
    if t < 0:
        return full
    return full - sum(comb(k + m - 1, m - 1) * q ** k for k in range(t + 1))


def tail_bound(f_norm, c, m: int, R, degree: int, f_degree: int = 0) -> Fraction:
    """Upper bound on ``V_R(h*(z-c)**m - f)`` for the degree-``degree`` truncation."""
    c, R = CQ.coerce(c), as_fraction(R)
    _outside(c, R)
    lo = _modulus_lower(c, R)
    kappa = 1 if c.is_axial() else _SQRT2_UP
    q = R / lo
    return (as_fraction(f_norm) * (R + c.abs1()) ** m * kappa * lo ** -m
            * _tail_sum(q, m, degree - f_degree))


def density_bound(c, m: int, R, degree: int) -> Fraction:
    """Certified ``V_R(1 - h*(z-c)**m)`` for the truncation of ``1/(z-c)**m``."""
    if m == 0:
        return Fraction(0)
    return tail_bound(1, c, m, R, degree)


def runge_disk_densify(f, z_out, m: int, eps, R=1, budget: int | None = None) -> RungeResult:
    """Find ``h`` with ``V_R(h*(z - z_out)**m - f) <= bound < eps``."""
    f, c, R, eps = Poly.coerce(f), CQ.coerce(z_out), as_fraction(R), as_fraction(eps)
    if m < 1:
        raise ValueError("m must be positive")
    _outside(c, R)
    if eps <= 0:
        raise ValueError("eps must be positive")
    factor = Poly.linear(c) ** m
    quot, rem = divmod(f, factor)
    if not rem:
        return RungeResult(quot, Fraction(0), max(quot.degree, 0))
    budget = degree_budget() if budget is None else budget
    f_norm, e = f.weighted_l1(R), f.degree
    d = 0
    while tail_bound(f_norm, c, m, R, d, e) >= eps:
        d += 1
        if d > budget:
            raise DegreeBudgetExceeded(f"degree {d} exceeds budget {budget}")
    bound = tail_bound(f_norm, c, m, R, d, e)
    # Taylor coefficients of (z - c)**-m at 0
    inv_c = c.inverse()
    sign = -1 if m % 2 else 1
    series = [inv_c ** (m + i) * (sign * comb(i + m - 1, m - 1)) for i in range(d + 1)]
    h = [sum((f[j] * series[k - j] for j in range(min(k, e) + 1)), CQ(0))
         for k in range(d + 1)]
    return RungeResult(Poly(h), bound, d)


def ideal_density_certificate(z_n, m: int, R, eps, budget: int | None = None) -> DensityCertificate:
    """Element ``a`` of ``<(z - z_n)**m>`` with certified ``V_R(1 - a) < eps``."""
    if m == 0:
        return DensityCertificate(Poly([1]), Fraction(0), 0)
    res = runge_disk_densify(1, z_n, m, eps, R, budget)
    return DensityCertificate(res.h * Poly.linear(z_n) ** m, res.bound, res.degree)


def chain_bound(bounds) -> Fraction:
    """Bound on ``V(1 - prod u_k)`` from bounds on each ``V(1 - u_k)``.

    Uses ``1 - uv = (1 - u) + u(1 - v)`` and ``V(u) <= 1 + V(1 - u)``.
    """
    acc = Fraction(0)
    for b in bounds:
        acc = acc + (1 + acc) * b
    return acc


def product_density_certificate(factors, R, eps, budget: int | None = None) -> DensityCertificate:
    """Density certificate for ``<prod (z - c)**m>`` with every root outside the disk."""
    factors = [(CQ.coerce(c), m) for c, m in factors if m > 0]
    eps = as_fraction(eps)
    if not factors:
        return DensityCertificate(Poly([1]), Fraction(0), 0)
    if len(factors) == 1:
        (c, m), = factors
        return ideal_density_certificate(c, m, R, eps, budget)
    eta = min(eps, Fraction(1)) / (2 * len(factors))
    element, bounds, degree = Poly([1]), [], 0
    for c, m in factors:
        cert = ideal_density_certificate(c, m, R, eta, budget)
        element = element * cert.element
        bounds.append(cert.bound)
        degree = max(degree, cert.degree)
    return DensityCertificate(element, chain_bound(bounds), degree)
