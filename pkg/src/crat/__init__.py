"""Approximate Chinese remaindering over topological rings with exact certificates."""
from .core import Ball, PseudoValuation, ball_arithmetic_check, ball_contains, pv_axiom_check
from .errors import CratError
from .hyperspace import (NetSpec, covers, entourage, ideal_power_divergence_demo,
                         join_continuity_test, monotone_limit_check, padic_gap)
from .interp import JetProblem, LagrangeProblem, hermite_jets, lagrange_dense
from .numbers import CQ, QSqrt2
from .poly import Poly
from .rings import (PadicContext, PolyContext, PrincipalIdeal, QuadContext, ideal_add,
                    ideal_meet, padic_tcm, quad_approx, quad_inverse_approx)
from .runge import ideal_density_certificate, runge_disk_densify
from .solver import (Certificate, ResidueSystem, TCMWitness, choose_delta,
                     combine_witnesses_product, comaximal_meet_approx, crat_infinite, densify,
                     finite_crat, finite_crat_batch, intersection_witness, quotient_lift, reduce_family,
                     stability_lift, tcm_witness)

__all__ = [name for name in dir() if not name.startswith("_")]
