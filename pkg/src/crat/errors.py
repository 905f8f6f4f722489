"""Exception types raised by the solvers.

Every error carries a short machine-readable ``reason`` used by the CLI.
"""


class CratError(Exception):
    reason = "error"


class MixedRings(CratError):
    reason = "mixed-rings"


class WrongRing(CratError):
    reason = "wrong-ring"


class UnsupportedRing(CratError):
    reason = "unsupported-ring"


class ZeroDivisor(CratError):
    reason = "zero-divisor"


class NotTCM(CratError):
    """The two ideals are provably not topologically co-maximal."""

    reason = "not-tcm"


class MismatchedI(CratError):
    reason = "mismatched-ideal"


class EmptySystem(CratError):
    reason = "empty-system"


class NotContractive(CratError):
    reason = "not-contractive"


class ToleranceViolation(CratError):
    reason = "tolerance-violation"


class InexactWitness(CratError):
    reason = "inexact-witness"


class Undecided(CratError):
    """Neither a positive nor a negative certificate fits the degree budget."""

    reason = "undecided"


class NotDescending(CratError):
    reason = "not-descending"


class DegenerateDisk(CratError):
    reason = "degenerate-disk"


class PoleInsideDisk(CratError):
    reason = "pole-inside-disk"


class DuplicatePoints(CratError):
    reason = "duplicate-points"


class DegreeBudgetExceeded(CratError):
    reason = "degree-budget"
