import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from crat.errors import DegenerateDisk, NotDescending, WrongRing
from crat.hyperspace import (NetSpec, covers, entourage, ideal_power_divergence_demo, join,
                             join_continuity_test, meet, monotone_limit_check, padic_gap,
                             sample_power_distances)
from crat.poly import Poly
from crat.rings import PadicContext, PolyContext
from oracles import scan_covers

P3 = PadicContext(3)
D1 = PolyContext(1)


def scan_gap(a, b, p, top=16):
    # H(eps) for eps in (p^-m, p^-(m-1)] is decided at exponent m; m = 0 always holds
    holds = [scan_covers(a, b, p, m) and scan_covers(b, a, p, m) for m in range(top + 1)]
    if all(holds):
        return Fraction(0)
    M = max(m for m in range(top + 1) if all(holds[: m + 1]))
    return Fraction(1, p ** M)


def test_covers_example():
    d = covers(P3.ideal(6), P3.ideal(15), Fraction(1, 9))
    assert d.holds
    assert P3.ideal(6).contains(d.certificate["approximant"])
    assert d.certificate["error"] < Fraction(1, 9)
    assert scan_covers(6, 15, 3, 3)


def test_covers_unit_ideal():
    assert covers(P3.ideal(1), P3.ideal(27), Fraction(1, 3 ** 10))
    assert covers(D1.unit_ideal(), D1.ideal_from_roots([(0, 1)]), Fraction(1, 2))


def test_entourage_examples():
    assert entourage(P3.ideal(6), P3.ideal(6), Fraction(1, 100))
    assert not entourage(P3.ideal(6), P3.ideal(2), Fraction(1, 9))
    assert not scan_covers(6, 2, 3, 3)
    eps = Fraction(1, 27)
    assert entourage(P3.ideal(2), P3.ideal(5), eps) == (scan_covers(2, 5, 3, 4) and scan_covers(5, 2, 3, 4))


def test_covers_matches_residue_scan():
    for p in (2, 3):
        ring = PadicContext(p)
        for m in range(0, 6):
            eps = Fraction(1, p ** m) + Fraction(1, 10 ** 6)  # ball exponent m
            assert ring.ball_exponent(eps) == m
            for a in range(1, 31):
                for b in range(1, 31):
                    got = bool(covers(ring.ideal(a), ring.ideal(b), eps))
                    assert got == scan_covers(a, b, p, m), (p, m, a, b)


@pytest.mark.parametrize("a,b,expected", [(6, 6, 0), (6, 2, 1), (3, 9, Fraction(1, 3)), (2, 5, 0),
                                          (0, 9, Fraction(1, 9)), (0, 0, 0)])
def test_padic_gap_examples(a, b, expected):
    assert padic_gap(P3.ideal(a), P3.ideal(b)) == expected


def test_padic_gap_matches_sweep():
    for a in range(1, 40):
        for b in range(1, 40):
            assert padic_gap(P3.ideal(a), P3.ideal(b)) == scan_gap(a, b, 3, top=6)


def test_padic_gap_wrong_ring():
    with pytest.raises(WrongRing):
        padic_gap(D1.ideal(1), D1.ideal(1))


def test_join_meet_are_gcd_lcm_objects():
    A, B = P3.ideal(12), P3.ideal(18)
    assert join(A, B) == P3.ideal(6)
    assert meet(A, B) == P3.ideal(36)
    assert padic_gap(join(A, B), P3.ideal(6)) == 0


def test_join_continuity_random():
    rng = random.Random(7)
    quads = [((P3.ideal(rng.randint(1, 100)), P3.ideal(rng.randint(1, 100))),
              (P3.ideal(rng.randint(1, 100)), P3.ideal(rng.randint(1, 100)))) for _ in range(300)]
    for eps in (1, Fraction(1, 3), Fraction(1, 9)):
        report = join_continuity_test(quads, eps)
        assert report.ok
        assert report.checked + report.skipped == len(quads)


def test_join_continuity_trivial_and_vacuous():
    A, B = P3.ideal(9), P3.ideal(4)
    assert join_continuity_test([((A, B), (A, B))], Fraction(1, 9)).checked == 1
    report = join_continuity_test([((P3.ideal(1), B), (P3.ideal(27), B))], Fraction(1, 9))
    assert (report.checked, report.skipped) == (0, 1)


def test_net_powers_of_three():
    rep = monotone_limit_check(NetSpec([P3.ideal(3 ** n) for n in range(12)]))
    assert rep.kind == "converges"
    assert rep.limit.is_zero()
    assert rep.gaps == [Fraction(1, 3 ** n) for n in range(12)]


def test_net_constant_chain():
    rep = monotone_limit_check(NetSpec([P3.ideal(10)] * 5))
    assert rep.kind == "converges" and rep.limit == P3.ideal(10)
    assert all(g == 0 for g in rep.gaps)


def test_net_powers_of_two_3adic():
    rep = monotone_limit_check(NetSpec([P3.ideal(2 ** n) for n in range(17)]))
    assert rep.kind == "cauchy-not-convergent"
    assert rep.floor == 1 and all(g == 1 for g in rep.gaps)
    assert all(g == 0 for g in rep.consecutive)
    for n, ev in enumerate(rep.evidence):
        assert (2 ** n - 2 ** (n + 1) * ev["k"]) % 3 ** 8 == 0


def test_net_not_descending():
    with pytest.raises(NotDescending):
        monotone_limit_check(NetSpec([P3.ideal(4), P3.ideal(2)]))


def test_divergence_examples():
    assert [r.lower_bound for r in ideal_power_divergence_demo(0, 1, 5)] == [1] * 6
    rows = ideal_power_divergence_demo(Fraction(1, 2), 1, 6)
    assert [r.lower_bound for r in rows] == [Fraction(1, 2 ** n) for n in range(7)]
    with pytest.raises(DegenerateDisk):
        ideal_power_divergence_demo(1, 1, 3)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), st.integers(0, 1000),
       st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(-1, 3)]))
def test_divergence_bound_never_beaten(n, seed, z0):
    bound = ideal_power_divergence_demo(z0, 1, n)[n].lower_bound
    assert min(sample_power_distances(z0, 1, n, 20, 12, seed)) >= bound


def test_poly_covers_negative_example():
    d = covers(D1.ideal_from_roots([(0, 2)]), D1.ideal_from_roots([(0, 1)]), Fraction(1, 2))
    assert not d.holds
    assert d.certificate["element"] == Poly.z()
    assert d.certificate["lower_bound"] == 1


def test_poly_covers_positive_with_far_root():
    A = D1.ideal_from_roots([(0, 1), (3, 1)])
    d = covers(A, D1.ideal_from_roots([(0, 1)]), Fraction(1, 100))
    assert d.holds
    assert A.contains(d.certificate["approximant"])
    g = Poly.z()
    assert (g - d.certificate["approximant"]).weighted_l1(1) == d.certificate["error"] < Fraction(1, 100)


def test_poly_covers_scaling_counterexample():
    # the functional bound is 1/2 per unit, so the certificate scales g up
    A = D1.ideal_from_roots([(Fraction(1, 2), 2)])
    d = covers(A, D1.ideal_from_roots([(Fraction(1, 2), 1)]), 3)
    assert not d.holds
    assert d.certificate["lower_bound"] >= 3
