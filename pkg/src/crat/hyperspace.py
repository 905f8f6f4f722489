"""Entourage tests, gaps and net limits for principal ideals.

``covers(A, B, eps)`` decides ``B ⊆ A + B(eps)``; the entourage ``H(eps)``
asks for both directions. Over the p-adic integers balls are ideals
(``B(eps) = p**m Z``), so the question is exact arithmetic. For polynomial
rings the answer is certified either way or reported as ``Undecided``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd

from .errors import (DegenerateDisk, DegreeBudgetExceeded, NotDescending, Undecided,
                     UnsupportedRing, WrongRing)
from .numbers import CQ, as_fraction, sqrt_interval, xgcd
from .poly import Poly
from .rings import (PadicContext, PolyContext, PrincipalIdeal, QuadContext, ideal_add,
                    ideal_meet, padic_order, quad_inverse_approx, same_ring)
from .runge import product_density_certificate

join = ideal_add
meet = ideal_meet


@dataclass(frozen=True)
class CoverDecision:
    """Outcome of ``covers``; ``certificate`` holds the evidence either way.

    Positive: ``approximant`` in ``A`` with ``V(gen(B) - approximant) = error < eps``.
    Negative: ``element`` of ``B`` whose distance to ``A`` is at least
    ``lower_bound >= eps``.
    """

    holds: bool
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _padic_covers(A, B, eps) -> CoverDecision:
    ring: PadicContext = A.ring
    m = ring.ball_exponent(eps)
    pm = ring.p ** m
    g, x, _ = xgcd(A.generator, pm)
    b = B.generator
    if b % g == 0:
        approx = (b // g) * x * A.generator
        return CoverDecision(True, {"approximant": approx,
                                    "error": ring.valuation.evaluate(b - approx)})
    return CoverDecision(False, {"element": b, "modulus": g,
                                 "lower_bound": Fraction(1, ring.p ** padic_order(b, ring.p))})


def _multiplicity(g: Poly, c: CQ) -> int:
    lin, mu = Poly.linear(c), 0
    while g and lin.divides(g):
        g = g // lin
        mu += 1
    return mu


def _poly_covers(A, B, eps) -> CoverDecision:
    ring: PolyContext = A.ring
    R = ring.R
    g = B.generator
    if A.is_zero():
        # the distance from t*g to {0} is |t| V(g)
        t = max(1, ceil(eps / ring.valuation.evaluate(g)))
        return CoverDecision(False, {"element": g * t,
                                     "lower_bound": ring.valuation.evaluate(g * t)})
    if A.factors is None:
        raise ValueError(f"{A} needs a factored form")
    undecided = []
    for c, mult in A.factors:
        if not ring.inside(c):
            continue
        mu = _multiplicity(g, c)
        if mu >= mult:
            continue
        boundary = c.norm2() == R * R
        if boundary and mu > 0:
            undecided.append(c)
            continue
        # the mu-th Taylor coefficient at c vanishes on A but not on g, and is
        # bounded by V_R / rho**mu on the disk of radius rho about c
        rho = R - sqrt_interval(c.norm2())[1] if mu else Fraction(1)
        if rho <= 0:
            undecided.append(c)
            continue
        coeff = g.jet(c, mu)[mu]
        coeff_lb = sqrt_interval(coeff.norm2())[0]
        if coeff_lb == 0:
            coeff_lb = sqrt_interval(coeff.norm2(), 256)[0]
        unit_lb = rho ** mu * coeff_lb
        t = max(1, ceil(eps / unit_lb))
        return CoverDecision(False, {"element": g * t, "point": c, "order": mu,
                                     "lower_bound": unit_lb * t})
    if undecided:
        raise Undecided(f"no certificate at boundary point {undecided[0]}")
    inner = [(c, m) for c, m in A.factors if ring.inside(c)]
    outer = [(c, m) for c, m in A.factors if not ring.inside(c)]
    f_in = Poly.from_roots(inner)
    k = g // f_in
    vg = ring.valuation.evaluate(g)
    try:
        cert = product_density_certificate(outer, R, eps / max(vg, 1))
    except DegreeBudgetExceeded as exc:
        raise Undecided(str(exc)) from exc
    # g * a = k * f_in * a lies in A since a is a multiple of the outer part
    approx = k * f_in * cert.element
    return CoverDecision(True, {"approximant": approx,
                                "error": ring.valuation.evaluate(g - approx)})


def _quad_covers(A, B, eps) -> CoverDecision:
    g = B.generator
    if g == 0:
        return CoverDecision(True, {"approximant": g, "error": 0})
    if A.is_zero():
        t = max(1, ceil(eps / abs(g).interval()[0]))
        return CoverDecision(False, {"element": g * t, "lower_bound": abs(g * t)})
    # every nonzero ideal of Z[sqrt 2] is dense in the reals
    a = A.generator
    approx = a * quad_inverse_approx(a, eps / abs(g)) * g
    return CoverDecision(True, {"approximant": approx, "error": abs(g - approx)})


def covers(A: PrincipalIdeal, B: PrincipalIdeal, eps) -> CoverDecision:
    """Decide ``B ⊆ A + B(eps)``.

    p-adic: exact, ``gcd(gen A, p**m)`` must divide ``gen B`` where ``B(eps) = p**m Z``.
    Polynomials: ``B`` lies in ``A + B(eps)`` only if it lies in the closure of
    ``A`` (scale any failing element), so the answer is certified by either an
    approximant of ``gen B`` inside ``A`` or a Taylor-coefficient functional
    that vanishes on ``A`` and is bounded on the disk.
    """
    same_ring(A, B)
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ring = A.ring
    if A.is_unit() or B.is_zero() or A == B:
        return CoverDecision(True, {"approximant": B.generator, "error": Fraction(0)})
    if isinstance(ring, PadicContext):
        return _padic_covers(A, B, eps)
    if isinstance(ring, PolyContext):
        return _poly_covers(A, B, eps)
    if isinstance(ring, QuadContext):
        return _quad_covers(A, B, eps)
    raise UnsupportedRing(f"covers is not implemented for {ring!r}")


def entourage(A: PrincipalIdeal, B: PrincipalIdeal, eps) -> bool:
    """``(A, B) in H(eps)``: each lies in the other's ``eps``-neighborhood."""
    return bool(covers(A, B, eps)) and bool(covers(B, A, eps))


def padic_gap(A: PrincipalIdeal, B: PrincipalIdeal) -> Fraction:
    """Infimum of the ``eps`` for which ``(A, B) in H(eps)``.

    With ``B(eps) = p**m Z`` the pair is in ``H(eps)`` exactly when
    ``min(v(a), m) <= v(b)`` and vice versa, so the gap is 0 when the
    p-adic orders agree and ``p**-min(v(a), v(b))`` otherwise (order of 0 is infinite).
    """
    ring = same_ring(A, B)
    if not isinstance(ring, PadicContext):
        raise WrongRing("padic_gap needs p-adic ideals")
    va, vb = padic_order(A.generator, ring.p), padic_order(B.generator, ring.p)
    if va == vb:
        return Fraction(0)
    low = vb if va is None else va if vb is None else min(va, vb)
    return Fraction(1, ring.p ** low)


@dataclass
class JoinReport:
    checked: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def join_continuity_test(pairs, eps) -> JoinReport:
    """Check ``H(eps/3)`` closeness of the parts implies ``H(eps)`` for the joins.

    Each item is ``((A1, B1), (A2, B2))``; items where the hypothesis fails
    are skipped.
    """
    eps = as_fraction(eps)
    delta = eps / 3
    report = JoinReport()
    for (A1, B1), (A2, B2) in pairs:
        if not isinstance(same_ring(A1, B1, A2, B2), PadicContext):
            raise WrongRing("join continuity is tested on p-adic ideals")
        if not (entourage(A1, A2, delta) and entourage(B1, B2, delta)):
            report.skipped += 1
            continue
        report.checked += 1
        if not entourage(join(A1, B1), join(A2, B2), eps):
            report.violations.append(((A1, B1), (A2, B2)))
    return report


# ---------------------------------------------------------------------------
# nets


@dataclass
class NetSpec:
    ideals: list
    limit: PrincipalIdeal | None = None


@dataclass
class LimitReport:
    kind: str  # "converges" | "stalls" | "cauchy-not-convergent"
    limit: PrincipalIdeal
    gaps: list  # gap(S_n, limit)
    consecutive: list  # gap(S_n, S_{n+1})
    floor: Fraction | None = None
    evidence: list = field(default_factory=list)


def _check_descending(ideals) -> PadicContext:
    ring = same_ring(*ideals)
    if not isinstance(ring, PadicContext):
        raise WrongRing("net limits are computed over p-adic ideals")
    for S, T in zip(ideals, ideals[1:]):
        if not S.contains(T.generator):
            raise NotDescending(f"{T} is not contained in {S}")
    return ring


def monotone_limit_check(net: NetSpec, evidence_exponent: int = 8) -> LimitReport:
    """Classify a descending chain by its gaps to the intersection.

    The intersection defaults to the last ideal when the chain has stopped
    moving and to the zero ideal otherwise. Gaps shrinking to 0 mean
    convergence; otherwise the floor is reported and the chain is Cauchy
    but not convergent when consecutive gaps shrink. For that case the
    evidence lists, for each ``n``, ``k`` with ``S_{n+1} * k`` matching
    ``gen S_n`` modulo ``p**evidence_exponent``.
    """
    ideals = list(net.ideals)
    if not ideals:
        raise ValueError("empty net")
    ring = _check_descending(ideals)
    limit = net.limit
    if limit is None:
        stopped = len(ideals) == 1 or ideals[-1] == ideals[-2]
        limit = ideals[-1] if stopped else ring.zero_ideal()
    gaps = [padic_gap(S, limit) for S in ideals]
    consecutive = [padic_gap(S, T) for S, T in zip(ideals, ideals[1:])]
    decreasing = all(x >= y for x, y in zip(gaps, gaps[1:]))
    if decreasing and (gaps[-1] == 0 or gaps[-1] < gaps[0]):
        return LimitReport("converges", limit, gaps, consecutive)
    floor = min(gaps)
    if consecutive and consecutive[-1] < floor:
        mod = ring.p ** evidence_exponent
        evidence = []
        for S, T in zip(ideals, ideals[1:]):
            s, t = S.generator, T.generator
            g = gcd(t, mod)
            if s % g:
                continue
            k = (s // g) * pow(t // g, -1, mod // g) % (mod // g)
            evidence.append({"k": k, "error": ring.valuation.evaluate(s - t * k)})
        return LimitReport("cauchy-not-convergent", limit, gaps, consecutive, floor, evidence)
    return LimitReport("stalls", limit, gaps, consecutive, floor)


# ---------------------------------------------------------------------------
# powers of a maximal ideal inside the disk


def _margin(z0: CQ, R: Fraction) -> Fraction:
    """Rational lower bound for ``R - |z0|``, the largest disk about ``z0`` inside."""
    if z0.norm2() >= R * R:
        raise DegenerateDisk(f"{z0} is not strictly inside the disk of radius {R}")
    bits = 64
    while True:
        rho = R - sqrt_interval(z0.norm2(), bits)[1]
        if rho > 0:
            return rho
        bits *= 2


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    lower_bound: Fraction


def ideal_power_divergence_demo(z0, R, n_max: int) -> list[DivergenceRow]:
    """Certified ``dist((z - z0)**n, <z - z0>**(n+1)) >= rho**n`` for ``n <= n_max``.

    The ``n``-th Taylor coefficient at ``z0`` kills ``<z - z0>**(n+1)``, equals
    1 on ``(z - z0)**n`` and is at most ``V_R(f) / rho**n`` by the Cauchy
    estimate on the disk of radius ``rho`` about ``z0``.
    """
    z0, R = CQ.coerce(z0), as_fraction(R)
    rho = _margin(z0, R)
    return [DivergenceRow(n, rho ** n) for n in range(n_max + 1)]


def sample_power_distances(z0, R, n: int, samples: int = 100, max_degree: int = 20,
                           seed: int = 0, coeff_range: int = 10) -> list[Fraction]:
    """Exact ``V_R((z - z0)**n - h)`` for random ``h`` in ``<z - z0>**(n+1)`` of degree ``<= max_degree``."""
    z0, R = CQ.coerce(z0), as_fraction(R)
    rng = random.Random(seed)
    base = Poly.linear(z0)
    target, ideal_gen = base ** n, base ** (n + 1)
    room = max_degree - (n + 1)
    out = []
    for _ in range(samples):
        if room < 0:
            q = Poly()
        else:
            q = Poly([Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, coeff_range))
                      for _ in range(rng.randint(0, room) + 1)])
        out.append((target - q * ideal_gen).weighted_l1(R))
    return out
