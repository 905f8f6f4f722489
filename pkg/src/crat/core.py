"""Pseudo-valuations, valuation balls and the axiom-checking harness.

A pseudo-valuation ``V`` on a ring satisfies

1. ``V(x + y) <= V(x) + V(y)``
2. ``V(x * y) <= V(x) * V(y)``
3. ``V(-x) == V(x)``
4. ``V(0) == 0``

All shipped valuations evaluate to exact values (``Fraction`` or, for the
real absolute value on Z[sqrt 2], ``QSqrt2``), so every check below is an
exact comparison with no tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .numbers import as_fraction

AXIOMS = {
    1: "subadditivity V(x+y) <= V(x)+V(y)",
    2: "submultiplicativity V(xy) <= V(x)V(y)",
    3: "symmetry V(-x) == V(x)",
    4: "V(0) == 0",
}


@dataclass(frozen=True, eq=False)
class PseudoValuation:
    id: str
    evaluate: Callable[[Any], Any]
    ring: Any
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.evaluate(self.ring.coerce(x))


@dataclass(frozen=True)
class Ball:
    """Open ball ``{x : V(x - center) < radius}``."""

    valuation: PseudoValuation
    radius: Fraction
    center: Any = 0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    def __contains__(self, x) -> bool:
        return ball_contains(self, x)


@dataclass(frozen=True)
class Violation:
    axiom: int
    pair: tuple
    detail: str = ""


@dataclass
class BallReport:
    checked: int = 0
    vacuous: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _coerce_pairs(V: PseudoValuation, samples):
    ring = V.ring
    return [(ring.coerce(x), ring.coerce(y)) for x, y in samples]


def pv_axiom_check(V: PseudoValuation, samples) -> list[Violation]:
    """Return every axiom violated by some sample pair (empty list = pass).

    Raises ``MixedRings`` when a sample does not belong to ``V``'s ring.
    """
    pairs = _coerce_pairs(V, samples)
    out = []
    for x, y in pairs:
        vx, vy = V.evaluate(x), V.evaluate(y)
        if V.evaluate(x + y) > vx + vy:
            out.append(Violation(1, (x, y), f"V(x+y)={V.evaluate(x + y)}"))
        if V.evaluate(x * y) > vx * vy:
            out.append(Violation(2, (x, y), f"V(xy)={V.evaluate(x * y)}"))
        if V.evaluate(-x) != vx or V.evaluate(-y) != vy:
            out.append(Violation(3, (x, y)))
        for e in (x, y):
            if e == 0 and V.evaluate(e) != 0:
                out.append(Violation(4, (x, y), f"V(0)={V.evaluate(e)}"))
                break
    return out


def ball_contains(b: Ball, x) -> bool:
    V = b.valuation
    x = V.ring.coerce(x)
    center = V.ring.coerce(b.center)
    return V.evaluate(x - center) < b.radius


def ball_arithmetic_check(V: PseudoValuation, eps, delta, samples) -> BallReport:
    """Check ``B(eps) + B(delta) in B(eps+delta)`` and ``B(eps)B(delta) in B(eps*delta)``.

    Pairs whose members are not inside the respective balls make the
    implication vacuous; they are counted, not reported.
    """
    eps, delta = as_fraction(eps), as_fraction(delta)
    if eps <= 0 or delta <= 0:
        raise ValueError("radii must be positive")
    report = BallReport()
    for x, y in _coerce_pairs(V, samples):
        if not (V.evaluate(x) < eps and V.evaluate(y) < delta):
            report.vacuous += 1
            continue
        report.checked += 1
        if not V.evaluate(x + y) < eps + delta:
            report.violations.append(Violation(1, (x, y), "sum left B(eps+delta)"))
        if not V.evaluate(x * y) < eps * delta:
            report.violations.append(Violation(2, (x, y), "product left B(eps*delta)"))
    return report
