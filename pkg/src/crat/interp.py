"""Interpolation: approximate Lagrange over Z[sqrt 2] and exact Hermite jets.

Lagrange interpolation over a dense subring cannot divide by the nodal
products ``l_i(x_i)``, but approximate inverses are available, and the
residual at each node only depends on how well that one inverse works
because ``l_i`` vanishes at every other node exactly.

Hermite jets are a CRT problem over ``<(z - z_n)**(m_n + 1)>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DuplicatePoints, ToleranceViolation
from .numbers import CQ, QSqrt2, as_fraction
from .poly import Poly
from .rings import PolyContext, QuadContext, quad_inverse_approx, unit_order_mod
from .runge import (DensityCertificate, RungeResult, density_bound,  # noqa: F401
                    ideal_density_certificate, runge_disk_densify)
from .solver import Certificate, ResidueSystem, finite_crat

# nodal products whose unit order modulo them exceeds this are inverted
# factor by factor, which keeps the exponent of sqrt(2) - 1 small
DIRECT_ORDER_LIMIT = 4096


@dataclass
class LagrangeProblem:
    points: list
    values: list
    epsilon: Fraction

    def __post_init__(self):
        ring = QuadContext()
        self.points = [ring.coerce(x) for x in self.points]
        self.values = [ring.coerce(y) for y in self.values]
        self.epsilon = as_fraction(self.epsilon)
        if len(self.points) != len(self.values):
            raise ValueError("points and values differ in length")
        if not self.points:
            raise ValueError("no interpolation points")
        if self.epsilon <= 0:
            raise ValueError("eps must be positive")
        if len(set(self.points)) != len(self.points):
            raise DuplicatePoints("interpolation points must be distinct")


def qpoly_eval(coeffs, x: QSqrt2) -> QSqrt2:
    acc = QSqrt2(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _qpoly_mul_linear(coeffs, root: QSqrt2):
    """Multiply by ``x - root``."""
    out = [QSqrt2(0)] * (len(coeffs) + 1)
    for k, c in enumerate(coeffs):
        out[k + 1] = out[k + 1] + c
        out[k] = out[k] - c * root
    return out


def working_bits(x: QSqrt2) -> int:
    return 64 + max(abs(x.a).numerator.bit_length(), abs(x.b).numerator.bit_length())


@dataclass(frozen=True)
class NodeResidual:
    point: QSqrt2
    value: QSqrt2
    residual: QSqrt2  # exact |p(x_i) - y_i|
    upper: Fraction  # rational enclosure at working precision
    bits: int

    def recheck(self, factor: int = 10) -> Fraction:
        """Upper bound recomputed with ``factor`` times the working precision."""
        return self.residual.interval(self.bits * factor)[1]


@dataclass
class LagrangeResult:
    coeffs: list  # QSqrt2, constant term first
    residuals: list = field(default_factory=list)
    epsilon: Fraction = Fraction(0)

    def __call__(self, x):
        return qpoly_eval(self.coeffs, QuadContext().coerce(x))

    def check(self, factor: int = 1) -> bool:
        return all(res.recheck(factor) < self.epsilon for res in self.residuals)


def _approx_inverse(factors, eps) -> QSqrt2:
    """Approximate inverse of the product of ``factors`` within ``eps``."""
    d = QSqrt2(1)
    for f in factors:
        d = d * f
    if abs(d.norm()) == 1 or len(factors) == 1 or unit_order_mod(d) <= DIRECT_ORDER_LIMIT:
        return quad_inverse_approx(d, eps)
    # prod (1 - e_k) differs from 1 by at most prod(1 + |e_k|) - 1 < eps
    eta = min(eps, Fraction(1)) / (2 * len(factors))
    s = QSqrt2(1)
    for f in factors:
        s = s * quad_inverse_approx(f, eta)
    return s


def lagrange_dense(prob: LagrangeProblem) -> LagrangeResult:
    """Polynomial over Z[sqrt 2] within ``eps`` of each value at its node.

    ``p = sum c_i l_i`` with ``l_i = prod_{j != i} (x - x_j)`` and
    ``c_i = y_i s_i`` for an approximate inverse ``s_i`` of ``l_i(x_i)`` at
    tolerance ``eps / (n * max(1, |y_i|))``.
    """
    xs, ys, eps = prob.points, prob.values, prob.epsilon
    n = len(xs)
    total = [QSqrt2(0)] * n
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = [QSqrt2(1)]
        diffs = []
        for j, xj in enumerate(xs):
            if j != i:
                basis = _qpoly_mul_linear(basis, xj)
                diffs.append(xi - xj)
        tol = eps / (n * max(Fraction(1), abs(yi).interval()[1]))
        ci = yi * _approx_inverse(diffs, tol)
        for k, b in enumerate(basis):
            total[k] = total[k] + ci * b
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    result = LagrangeResult(total, epsilon=eps)
    for xi, yi in zip(xs, ys):
        res = abs(qpoly_eval(total, xi) - yi)
        bits = working_bits(res)
        result.residuals.append(NodeResidual(xi, yi, res, res.interval(bits)[1], bits))
    if not all(r.residual < eps for r in result.residuals):
        raise ToleranceViolation("residual exceeds the requested tolerance")
    return result


# ---------------------------------------------------------------------------
# Hermite jets


@dataclass
class JetProblem:
    """Prescribed ``f^(k)(z_n) / k! = jets[n][k]`` for ``k = 0..m_n``."""

    points: list
    jets: list

    def __post_init__(self):
        self.points = [CQ.coerce(z) for z in self.points]
        self.jets = [[CQ.coerce(w) for w in row] for row in self.jets]
        if len(self.points) != len(self.jets):
            raise ValueError("one jet per point is required")
        if not self.points:
            raise ValueError("no interpolation points")
        if any(not row for row in self.jets):
            raise ValueError("every jet needs at least the value")
        if len(set(self.points)) != len(self.points):
            raise DuplicatePoints("interpolation points must be distinct")

    @property
    def orders(self) -> list[int]:
        return [len(row) - 1 for row in self.jets]


@dataclass
class HermiteResult:
    poly: Poly
    certificate: Certificate

    def check(self, prob: JetProblem) -> bool:
        return all(self.poly.jet(z, len(row) - 1) == row
                   for z, row in zip(prob.points, prob.jets))


def hermite_jets(prob: JetProblem, ring: PolyContext | None = None) -> HermiteResult:
    """Polynomial of degree ``< sum (m_n + 1)`` matching every jet exactly."""
    ring = ring or PolyContext(1)
    entries = []
    for z, row in zip(prob.points, prob.jets):
        target = Poly()
        base = Poly.linear(z)
        for k, w in enumerate(row):
            target = target + base ** k * w
        entries.append((ring.ideal_from_roots([(z, len(row))]), target))
    cert = finite_crat(ResidueSystem(ring, entries, 0))
    result = HermiteResult(cert.solution, cert)
    if not result.check(prob):
        raise AssertionError("jet mismatch in exact arithmetic")
    return result
