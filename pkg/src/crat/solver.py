"""Witness search, witness algebra and the approximate CRT solvers.

A witness for a pair of ideals ``(I, J)`` is ``i in I``, ``j in J`` with
``V(1 - (i + j))`` small. From witnesses against every other ideal the
solver builds ``r = sum b_k`` landing within ``eps`` of each target modulo
its ideal, and records, per ideal, an explicit element of the ideal that
closes the gap. Every bound recorded in a ``Certificate`` is the exact
value of the valuation, so re-checking is a matter of recomputing it.

Tolerances are exact rationals (or exact elements of Q(sqrt 2) for the
real line). A tolerance of 0 demands exact witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .errors import (DegreeBudgetExceeded, EmptySystem, InexactWitness, MismatchedI,
                     NotContractive, NotTCM, PoleInsideDisk, ToleranceViolation)
from .numbers import as_fraction, centered_mod, xgcd
from .poly import Poly, poly_xgcd
from .rings import (PadicContext, PolyContext, PrincipalIdeal, QuadContext, RingContext,
                    quad_inverse_approx, quad_xgcd, same_ring)
from .runge import product_density_certificate


def _tol(eps):
    # tolerances may be exact elements of Q(sqrt 2); everything else is rational
    if hasattr(eps, "sign"):
        return eps
    return as_fraction(eps)


def value(ring: RingContext, x):
    return ring.valuation.evaluate(ring.coerce(x))


_ZERO = Fraction(0)


def _max1(v):
    return v if v > 1 else 1


@dataclass(frozen=True)
class TCMWitness:
    """``i in I``, ``j in J`` with ``V(1 - (i + j)) <= bound``."""

    I: PrincipalIdeal
    J: PrincipalIdeal
    i: Any
    j: Any
    bound: Any

    @property
    def ring(self) -> RingContext:
        return self.I.ring

    @property
    def exact(self) -> bool:
        return self.bound == 0

    def recomputed_bound(self):
        return value(self.ring, 1 - (self.i + self.j))

    def check(self) -> bool:
        return (self.I.contains(self.i) and self.J.contains(self.j)
                and self.recomputed_bound() <= self.bound)


@dataclass
class ResidueSystem:
    ring: RingContext
    entries: list  # [(PrincipalIdeal, target)]
    epsilon: Any = Fraction(0)

    def __post_init__(self):
        self.epsilon = _tol(self.epsilon)
        self.entries = [(I, self.ring.coerce(t)) for I, t in self.entries]
        ideals = [I for I, _ in self.entries]
        if len(set(ideals)) != len(ideals):
            raise ValueError("ideals in a residue system must be pairwise distinct")
        for I in ideals:
            if I.ring != self.ring:
                same_ring(self.ring.unit_ideal(), I)


@dataclass(frozen=True)
class Residual:
    ideal: PrincipalIdeal
    target: Any
    bound: Any
    witness: Any


@dataclass
class Certificate:
    """Solution plus, per ideal, ``witness in I`` with ``V(r - target - witness) = bound``."""

    ring: RingContext
    solution: Any
    residuals: list
    epsilon: Any
    exceptional: list | None = None

    def max_bound(self):
        return max((res.bound for res in self.residuals), default=Fraction(0))

    def check(self) -> bool:
        return check_certificate(self)


def check_certificate(cert: Certificate) -> bool:
    """Recompute every residual from scratch."""
    ring = cert.ring
    r = ring.coerce(cert.solution)
    for res in cert.residuals:
        if not res.ideal.contains(res.witness):
            return False
        actual = value(ring, r - res.target - res.witness)
        if actual > res.bound:
            return False
        if cert.epsilon == 0:
            if res.bound != 0:
                return False
        elif not res.bound < cert.epsilon:
            return False
    return True


# ---------------------------------------------------------------------------
# witnesses


def ideal_product(I: PrincipalIdeal, J: PrincipalIdeal) -> PrincipalIdeal:
    ring = same_ring(I, J)
    if isinstance(ring, PolyContext) and I.factors is not None and J.factors is not None:
        return ring.ideal_from_roots(list(I.factors) + list(J.factors))
    return ring.ideal(I.generator * J.generator)


def _need_exact(eps, what: str):
    if eps == 0:
        raise InexactWitness(f"{what}: only an approximate witness exists but eps=0")


def _padic_witness(I, J, eps) -> TCMWitness:
    ring: PadicContext = I.ring
    p = ring.p
    a, b = I.generator, J.generator
    g, x, y = xgcd(a, b)
    if g == 1:
        if a and b:
            x = centered_mod(x, b)
            y = (1 - x * a) // b
        return TCMWitness(I, J, x * a, y * b, Fraction(0))
    if g % p == 0:
        raise NotTCM(f"{p} divides both {a} and {b}")
    _need_exact(eps, f"<{a}> + <{b}>")
    m = ring.ball_exponent(eps)
    t = centered_mod(pow(g, -1, p ** m), p ** m) if m else 0
    i, j = a * x * t, b * y * t
    return TCMWitness(I, J, i, j, value(ring, 1 - i - j))


def _roots_inside(ring: PolyContext, factors) -> list:
    return [c for c, m in factors if m > 0 and ring.inside(c)]


def poly_density_certificate(J: PrincipalIdeal, eps):
    """Density certificate ``a in J`` with ``V_R(1 - a) < eps``; ``J`` must be factored."""
    ring: PolyContext = J.ring
    if J.is_zero():
        raise NotTCM("the zero ideal is not dense")
    if J.is_unit():
        return product_density_certificate((), ring.R, eps)
    if J.factors is None:
        raise ValueError(f"{J} needs a factored form")
    inside = _roots_inside(ring, J.factors)
    if inside:
        raise PoleInsideDisk(f"{J} vanishes at {inside[0]} in the disk")
    return product_density_certificate(J.factors, ring.R, eps)


def _poly_witness(I, J, eps) -> TCMWitness:
    ring: PolyContext = I.ring
    if I.is_zero() or J.is_zero():
        other, zero_first = (J, True) if I.is_zero() else (I, False)
        if other.is_zero():
            raise NotTCM("two zero ideals")
        _need_exact(eps, "zero ideal")
        try:
            cert = poly_density_certificate(other, eps)
        except PoleInsideDisk as exc:
            raise NotTCM(str(exc)) from exc
        a = cert.element
        if zero_first:
            return TCMWitness(I, J, Poly(), a, value(ring, 1 - a))
        return TCMWitness(I, J, a, Poly(), value(ring, 1 - a))
    if I.factors is not None and J.factors is not None:
        fj = dict(J.factors)
        shared = [(c, min(m, fj[c])) for c, m in I.factors if c in fj]
    else:
        shared = None
    g, x, y = poly_xgcd(I.generator, J.generator)
    if g.degree == 0:
        return TCMWitness(I, J, x * I.generator, y * J.generator, Fraction(0))
    if shared is None:
        raise ValueError("non-coprime polynomial ideals need factored forms")
    inside = _roots_inside(ring, shared)
    if inside:
        raise NotTCM(f"common zero {inside[0]} lies in the closed disk")
    _need_exact(eps, f"{I} + {J}")
    # x*I + y*J = g with g = prod over shared roots; densify the ideal <g>
    cert = product_density_certificate(shared, ring.R, eps)
    q = cert.element // g
    i, j = q * x * I.generator, q * y * J.generator
    return TCMWitness(I, J, i, j, value(ring, 1 - i - j))


def _quad_witness(I, J, eps) -> TCMWitness:
    ring: QuadContext = I.ring
    a, b = I.generator, J.generator
    if a == 0 and b == 0:
        raise NotTCM("two zero ideals")
    g, x, y = quad_xgcd(a, b)
    if abs(g.norm()) == 1:
        ginv = g.inverse()
        return TCMWitness(I, J, x * a * ginv, y * b * ginv, Fraction(0))
    _need_exact(eps, f"{I} + {J}")
    s = quad_inverse_approx(g, eps)
    i, j = x * a * s, y * b * s
    return TCMWitness(I, J, i, j, value(ring, 1 - i - j))


def tcm_witness(I: PrincipalIdeal, J: PrincipalIdeal, eps) -> TCMWitness:
    """Find ``i in I``, ``j in J`` with ``V(1 - (i + j)) < eps`` (``eps = 0``: exactly 1).

    Exact witnesses come from the extended Euclidean algorithm. When the ideals
    are only topologically co-maximal the witness is approximate:

    * p-adic: scale the Bezout identity for ``g = gcd`` by ``g**-1 mod p**m``;
    * polynomials: densify the ideal of shared roots, all outside the disk;
    * Z[sqrt 2]: scale by an approximate inverse of the gcd.

    Raises ``NotTCM`` when the ring's characterization rules out any witness.
    """
    ring = same_ring(I, J)
    eps = _tol(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    one = ring.coerce(1)
    zero = ring.coerce(0)
    if J.is_unit():
        return TCMWitness(I, J, zero, one, Fraction(0))
    if I.is_unit():
        return TCMWitness(I, J, one, zero, Fraction(0))
    if isinstance(ring, PadicContext):
        return _padic_witness(I, J, eps)
    if isinstance(ring, PolyContext):
        return _poly_witness(I, J, eps)
    return _quad_witness(I, J, eps)


def combine_witnesses_product(w1: TCMWitness, w2: TCMWitness) -> TCMWitness:
    """Witness for ``(I, J1*J2)`` from witnesses for ``(I, J1)`` and ``(I, J2)``.

    ``(i1 + j1)(i2 + j2) = (i1 i2 + i1 j2 + j1 i2) + j1 j2`` and
    ``1 - uv = (1 - u) + u(1 - v)`` gives the bound ``b1 + (1 + b1) b2``.
    """
    if w1.I != w2.I:
        raise MismatchedI(f"witnesses are for {w1.I} and {w2.I}")
    i = w1.i * w2.i + w1.i * w2.j + w1.j * w2.i
    j = w1.j * w2.j
    bound = w1.bound + (1 + w1.bound) * w2.bound
    return TCMWitness(w1.I, ideal_product(w1.J, w2.J), i, j, bound)


def _shrink(w: TCMWitness) -> TCMWitness:
    """Exact witness with ``j`` reduced modulo the product of both generators.

    ``j mod IJ`` stays in ``J`` and ``1 - (j mod IJ)`` differs from ``i`` by a
    multiple of ``IJ``, so it stays in ``I``; this keeps degrees and
    coefficients from growing along a product of witnesses.
    """
    if w.bound != 0 or not isinstance(w.ring, PolyContext):
        return w
    P = w.I.generator * w.J.generator
    if P == 0:
        return w
    j = w.j % P
    return TCMWitness(w.I, w.J, 1 - j, j, Fraction(0))


@lru_cache(maxsize=4096)
def _intersection_witness(I, others: tuple, eps) -> TCMWitness:
    ring = I.ring
    if not others:
        return TCMWitness(I, ring.unit_ideal(), ring.coerce(0), ring.coerce(1), Fraction(0))
    base = eps if eps < 1 else 1
    w = None
    for k, J in enumerate(others):
        # geometric split: the product of (1 + b_k) stays below 1 + eps
        step = tcm_witness(I, J, base / 2 ** (k + 2))
        w = step if w is None else _shrink(combine_witnesses_product(w, step))
    if eps == 0:
        assert w.bound == 0
    elif not w.bound < eps:
        raise ToleranceViolation(f"combined witness bound {w.bound} >= {eps}")
    return w


def intersection_witness(I: PrincipalIdeal, others, eps) -> TCMWitness:
    """Witness for ``I`` against the intersection of ``others``.

    The ``j`` part lies in the product of ``others``, which sits inside their
    intersection; the recorded ``J`` is that product.
    """
    others = tuple(others)
    same_ring(I, *others) if others else None
    return _intersection_witness(I, others, _tol(eps))


# ---------------------------------------------------------------------------
# finite solver


def _modulus(ring, ideals):
    """Product of the generators, or ``None`` when no reduction applies."""
    if isinstance(ring, QuadContext):
        return None
    P = ring.coerce(1)
    for I in ideals:
        P = P * I.generator
    return P if P != 0 else None


def _reduce_solution(ring, r, P):
    """Reduce ``r`` modulo ``P``, returning ``(r_red, q*P)``."""
    if P is None:
        return r, ring.coerce(0)
    red = r % P
    return red, r - red


def finite_crat(sys: ResidueSystem, reduce: bool = True) -> Certificate:
    """Approximate CRT on finitely many pairwise TCM ideals.

    For each ``k`` a witness ``(a_k, b'_k)`` of ``I_k`` against the others at
    tolerance ``eps / (n * max(1, V(r_k)))`` gives ``b_k = b'_k r_k`` and
    ``r = sum b_k``. The residual witness for ``I_k`` is
    ``-a_k r_k + sum_{l != k} b_l``, leaving ``r - r_k - w = -(1 - a_k - b'_k) r_k``.
    """
    if not sys.entries:
        raise EmptySystem("no ideals to solve for")
    ring, eps = sys.ring, sys.epsilon
    n = len(sys.entries)
    ideals = [I for I, _ in sys.entries]
    witnesses = []
    for k, (I, target) in enumerate(sys.entries):
        others = ideals[:k] + ideals[k + 1:]
        tol = eps / (n * _max1(value(ring, target))) if eps != 0 else Fraction(0)
        witnesses.append(intersection_witness(I, others, tol))
    P = _modulus(ring, ideals) if reduce else None
    return _assemble(ring, ideals, witnesses, [t for _, t in sys.entries], eps, P)


def _assemble(ring, ideals, witnesses, targets, eps, P) -> Certificate:
    parts = [w.j * t for w, t in zip(witnesses, targets)]
    total = sum(parts[1:], parts[0])
    r, shift = _reduce_solution(ring, total, P)
    residuals = []
    for k, (I, target) in enumerate(zip(ideals, targets)):
        wit = -witnesses[k].i * target - shift + (total - parts[k])
        diff = r - target - wit
        residuals.append(Residual(I, target, value(ring, diff) if diff else _ZERO, wit))
    exact = not eps
    for res in residuals:
        if (res.bound if exact else not res.bound < eps):
            raise ToleranceViolation(f"residual {res.bound} for {res.ideal} misses {eps}")
    return Certificate(ring, r, residuals, eps)


def finite_crat_batch(ring, ideals, target_vectors, reduce: bool = True):
    """Exact CRT for many target vectors over one tuple of ideals.

    The witnesses do not depend on the targets in exact mode, so they are
    computed once; yields one ``Certificate`` per target vector.
    """
    ideals = list(ideals)
    if not ideals:
        raise EmptySystem("no ideals to solve for")
    ResidueSystem(ring, [(I, 0) for I in ideals])  # ring and distinctness checks
    witnesses = [intersection_witness(I, ideals[:k] + ideals[k + 1:], 0)
                 for k, I in enumerate(ideals)]
    P = _modulus(ring, ideals) if reduce else None
    for targets in target_vectors:
        targets = [ring.coerce(t) for t in targets]
        if len(targets) != len(ideals):
            raise ValueError("target vector length differs from the number of ideals")
        yield _assemble(ring, ideals, witnesses, targets, _ZERO, P)


# ---------------------------------------------------------------------------
# densification and lifts


@dataclass
class DensifyResult:
    element: Any
    iterations: int  # a-priori n0
    bound: Any  # exact V(r - element)
    iterates: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # exact V(r - r_n) per iterate
    invariant_ok: bool = True


def densify(I: PrincipalIdeal, a, r, eps) -> DensifyResult:
    """Approximate ``r`` from inside ``I`` using ``a in I`` with ``delta = V(1 - a) < 1``.

    Iterates ``r_{n+1} = r_n + (r - r_n) a`` from ``r_0 = 0``, so that
    ``r - r_n = (1 - a)**n r``. The a-priori count ``n0`` is the least ``n``
    with ``delta**n V(r) < eps``; the loop stops earlier if the exact error
    already meets ``eps``. Every iterate's invariant
    ``V(r - r_n) <= delta**n V(r)`` is checked exactly.
    """
    ring = I.ring
    a, r, eps = ring.coerce(a), ring.coerce(r), _tol(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not I.contains(a):
        raise ValueError(f"{a} is not in {I}")
    delta = value(ring, 1 - a)
    if not delta < 1:
        raise NotContractive(f"V(1 - a) = {delta} is not below 1")
    vr = value(ring, r)
    n0, scale = 0, vr
    while not scale < eps:
        n0 += 1
        scale = scale * delta
    out = DensifyResult(ring.coerce(0), n0, vr)
    rn = ring.coerce(0)
    n = 0
    while True:
        err = value(ring, r - rn)
        out.iterates.append(rn)
        out.errors.append(err)
        if err > delta ** n * vr:
            out.invariant_ok = False
        if err < eps or n >= n0:
            break
        rn = rn + (r - rn) * a
        n += 1
    out.element, out.bound = rn, value(ring, r - rn)
    return out


def comaximal_meet_approx(x, w: TCMWitness, x_prime, eps):
    """``y = a x' + b x in I cap J`` close to ``x in I`` given ``x' in J`` close to ``x``."""
    ring = w.ring
    x, x_prime, eps = ring.coerce(x), ring.coerce(x_prime), _tol(eps)
    a, b = w.i, w.j
    if not w.I.contains(x) or not w.J.contains(x_prime):
        raise ValueError("need x in I and x' in J")
    vx, va = value(ring, x), value(ring, a)
    if vx and not w.bound * 2 * vx < eps:
        raise ToleranceViolation("witness bound too large for V(x)")
    if va and not value(ring, x - x_prime) * 2 * va < eps:
        raise ToleranceViolation("x' too far from x for V(a)")
    y = a * x_prime + b * x
    err = value(ring, x - y)
    if not (w.I.contains(y) and w.J.contains(y) and err < eps):
        raise ToleranceViolation(f"V(x - y) = {err}")
    return y, err


def choose_delta(eps, a, ring: RingContext) -> Fraction:
    """Proximity ``delta`` for ``stability_lift``: ``(1 + 2 V(a)) delta <= eps``."""
    eps = _tol(eps)
    return eps / (3 * _max1(value(ring, a)))


def stability_lift(I, J, w: TCMWitness, r, r1, r2, eps):
    """``r' = b r1 + a r2 in I cap J`` from ``r1 in I``, ``r2 in J`` near ``r``.

    ``r - r' = b (r - r1) + a (r - r2)`` when ``a + b = 1``.
    """
    ring = same_ring(I, J)
    if w.I != I or w.J != J:
        raise MismatchedI("witness does not match the ideals")
    if w.i + w.j != 1:
        raise InexactWitness("stability lift needs a + b = 1 exactly")
    r, r1, r2, eps = ring.coerce(r), ring.coerce(r1), ring.coerce(r2), _tol(eps)
    if not I.contains(r1) or not J.contains(r2):
        raise ValueError("need r1 in I and r2 in J")
    rp = w.j * r1 + w.i * r2
    err = value(ring, r - rp)
    if not err < eps:
        raise ToleranceViolation(f"V(r - r') = {err} >= {eps}")
    return rp, err


@dataclass(frozen=True)
class QuotientLift:
    element: Any
    valuation: Any  # V(y)
    openness_bound: Any  # V(a) V(x)


def quotient_lift(x, I, J, w: TCMWitness) -> QuotientLift:
    """``y = a x``: in ``I`` and congruent to ``x`` modulo ``J``."""
    ring = same_ring(I, J)
    if w.I != I or w.J != J:
        raise MismatchedI("witness does not match the ideals")
    if w.i + w.j != 1:
        raise InexactWitness("quotient lift needs a + b = 1 exactly")
    x = ring.coerce(x)
    y = w.i * x
    assert I.contains(y) and J.contains(y - x)
    return QuotientLift(y, value(ring, y), value(ring, w.i) * value(ring, x))


# ---------------------------------------------------------------------------
# families with finitely many exceptions


@dataclass(frozen=True)
class DensityWitness:
    """``element in ideal`` with ``V(1 - element) = bound``."""

    ideal: PrincipalIdeal
    element: Any
    bound: Any


@dataclass
class FamilyReduction:
    exceptional: list
    certificates: dict  # ideal -> DensityWitness


def density_witness(I: PrincipalIdeal, eps) -> DensityWitness | None:
    """Density certificate for ``I`` at ``eps``, or None when ``I`` is not dense."""
    ring, eps = I.ring, _tol(eps)
    if I.is_zero():
        return None
    if isinstance(ring, PadicContext):
        g = I.generator
        if g % ring.p == 0:
            return None
        mod = ring.p ** ring.ball_exponent(eps)
        a = g * centered_mod(pow(g, -1, mod), mod)
        return DensityWitness(I, a, value(ring, 1 - a))
    if isinstance(ring, PolyContext):
        try:
            cert = poly_density_certificate(I, eps)
        except (PoleInsideDisk, DegreeBudgetExceeded):
            return None
        return DensityWitness(I, cert.element, value(ring, 1 - cert.element))
    a = I.generator * quad_inverse_approx(I.generator, eps)
    return DensityWitness(I, a, value(ring, 1 - a))


def _clash(I: PrincipalIdeal, J: PrincipalIdeal) -> bool:
    """Whether two non-dense members provably fail to be TCM."""
    ring = I.ring
    if isinstance(ring, PadicContext):
        return True
    if I.is_zero() or J.is_zero():
        return True
    if isinstance(ring, PolyContext) and I.factors is not None and J.factors is not None:
        fj = dict(J.factors)
        return any(c in fj and ring.inside(c) for c, _ in I.factors)
    return False


def reduce_family(family, eps) -> FamilyReduction:
    """Split a family into finitely many exceptional ideals and certified dense ones.

    Every non-exceptional ``I`` gets ``a in I`` with ``V(1 - a) < eps``; at
    tolerance ``eps`` such an ideal imposes no constraint.
    """
    family = list(family)
    if family:
        same_ring(*family)
    eps = _tol(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    exceptional, certs = [], {}
    for I in family:
        cert = density_witness(I, eps)
        if cert is None:
            exceptional.append(I)
        else:
            certs[I] = cert
    for k, I in enumerate(exceptional):
        for J in exceptional[k + 1:]:
            if _clash(I, J):
                raise NotTCM(f"{I} and {J} are both non-dense and not co-maximal")
    return FamilyReduction(exceptional, certs)


def crat_infinite(sys: ResidueSystem, strategy: str = "reduce") -> Certificate:
    """CRAT for families where all but finitely many ideals are dense at ``eps``.

    Solves the exceptional subsystem with ``finite_crat``; each dense ``I``
    with target ``t`` then gets the witness ``(r - t) a`` where ``a`` is a
    density certificate tightened to ``eps / max(1, V(r - t))``.

    ``strategy="all"`` skips the reduction and solves the whole system, which
    for exactly co-maximal families returns the classical CRT class.
    """
    ring, eps = sys.ring, sys.epsilon
    if not sys.entries:
        raise EmptySystem("no ideals to solve for")
    if eps == 0:
        raise ValueError("the finite-exception reduction needs eps > 0")
    red = reduce_family([I for I, _ in sys.entries], eps)
    if strategy == "all":
        cert = finite_crat(sys)
        cert.exceptional = red.exceptional
        return cert
    if strategy != "reduce":
        raise ValueError(f"unknown strategy {strategy!r}")
    exc = set(red.exceptional)
    sub = [(I, t) for I, t in sys.entries if I in exc]
    if sub:
        base = finite_crat(ResidueSystem(ring, sub, eps))
        r, done = base.solution, {res.ideal: res for res in base.residuals}
    else:
        r, done = sys.entries[0][1], {}
    residuals = []
    for I, t in sys.entries:
        if I in done:
            residuals.append(done[I])
            continue
        gap = r - t
        tol = eps / _max1(value(ring, gap))
        dw = red.certificates[I]
        if not value(ring, gap) * dw.bound < eps:
            dw = density_witness(I, tol)
        wit = gap * dw.element
        residuals.append(Residual(I, t, value(ring, gap - wit), wit))
    cert = Certificate(ring, r, residuals, eps, list(red.exceptional))
    for res in residuals:
        if not res.bound < eps:
            raise ToleranceViolation(f"residual {res.bound} for {res.ideal} misses {eps}")
    return cert
