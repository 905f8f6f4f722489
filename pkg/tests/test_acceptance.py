"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import copy
import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from crat.cli import run_job, verify_result
from crat.hyperspace import (NetSpec, entourage, ideal_power_divergence_demo, join,
                             join_continuity_test, meet, monotone_limit_check,
                             sample_power_distances)
from crat.interp import JetProblem, LagrangeProblem, hermite_jets, lagrange_dense
from crat.numbers import CQ, QSqrt2, format_rational, parse_rational
from crat.poly import Poly
from crat.rings import PadicContext, PolyContext, padic_tcm
from crat.runge import density_bound, ideal_density_certificate
from crat.serialize import digest
from crat.solver import (ResidueSystem, check_certificate, crat_infinite, densify,
                         finite_crat, finite_crat_batch, value)
from oracles import confluent_vandermonde, crt_table, scan_covers

P3 = PadicContext(3)
DISK = PolyContext(1)

# JSON job specs behind each criterion; criterion 11 audits all of them
JOBS = {
    1: [{"command": "crt", "ring": {"kind": "padic", "p": 7}, "ideals": [3, 5, 7],
         "targets": [2, 3, 2], "epsilon": "0"},
        {"command": "crt", "ring": {"kind": "padic", "p": 2}, "ideals": [11, 13, 15],
         "targets": [10, 0, 7]}],
    2: [{"command": "densify-demo", "ring": {"kind": "padic", "p": 3}, "ideal": 2, "a": 4, "r": 1,
         "epsilon": "1/3486784401"}],
    3: [{"command": "tcm-check", "ring": {"kind": "padic", "p": 3}, "ideals": [3, 9]},
        {"command": "tcm-check", "ring": {"kind": "padic", "p": 5}, "ideals": [10, 7],
         "epsilon": "1/625"}],
    4: [{"command": "interp-lagrange", "points": [0, 3], "values": [1, 0], "epsilon": "1/100"},
        {"command": "interp-lagrange", "points": [-2, 1, 4], "values": [3, -1, 5],
         "epsilon": "1/1000000"}],
    5: [{"command": "interp-hermite", "points": [0, 1], "jets": [[0, 0], [1, 0]]},
        {"command": "interp-hermite", "points": [{"re": "1/2", "im": "-1"}, 2],
         "jets": [[1, {"re": "0", "im": "3"}, "2/5"], ["-1"]]}],
    6: [{"command": "hyper-gap", "ring": {"kind": "padic", "p": 3}, "pairs": [[6, 15], [6, 2], [18, 45]],
         "epsilon": "1/9"}],
    7: [{"command": "hyper-net", "ring": {"kind": "padic", "p": 3}, "generators": [3 ** n for n in range(8)]},
        {"command": "hyper-net", "ring": {"kind": "padic", "p": 3}, "generators": [2 ** n for n in range(17)]}],
    8: [{"command": "density-demo", "point": 2, "m": 1, "epsilon": "1/100"},
        {"command": "density-demo", "point": {"re": "0", "im": "-3"}, "m": 2, "epsilon": "1/100"}],
    9: [{"command": "divergence-demo", "z0": "0", "R": "1", "n_max": 10, "samples": 10, "seed": 3}],
    10: [{"command": "crt", "ring": {"kind": "poly", "R": "1"}, "method": "infinite", "epsilon": "1/100",
          "ideals": [{"factors": [[0, 1]]}, {"factors": [[5, 1]]}, {"factors": [[7, 1]]}],
          "targets": [1, 0, 0]}],
}


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def round_trip(n):
    outs = [run_job(spec) for spec in JOBS[n]]
    return outs, all(verify_result(o) == [] for o in outs)


def test_criterion_01_classical_crt(capsys):
    cert = finite_crat(ResidueSystem(PadicContext(7), [(PadicContext(7).ideal(3), 2),
                                                       (PadicContext(7).ideal(5), 3),
                                                       (PadicContext(7).ideal(7), 2)]))
    example = cert.solution % 105 == 23 and all(r.bound == 0 for r in cert.residuals)
    ring = PadicContext(7)
    triples = [t for t in itertools.combinations(range(2, 16), 3)
               if all(math.gcd(a, b) == 1 for a, b in itertools.combinations(t, 2))]
    start = time.perf_counter()
    mismatches = systems = 0
    for moduli in triples:
        table = crt_table(moduli)
        N = math.prod(moduli)
        vectors = list(itertools.product(*map(range, moduli)))
        ideals = [ring.ideal(q) for q in moduli]
        for t, c in zip(vectors, finite_crat_batch(ring, ideals, vectors)):
            systems += 1
            if c.solution % N != table[t] or any(r.bound for r in c.residuals):
                mismatches += 1
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(1)
    ok = example and mismatches == 0 and elapsed < 1 and cli_ok
    report(capsys, 1, ok, f"23 mod 105 exact={example}; {len(triples)} triples, {systems} target "
                          f"vectors, {mismatches} mismatches, {elapsed:.2f}s (< 1s)")


def test_criterion_02_densification_rate(capsys):
    start = time.perf_counter()
    out = densify(P3.ideal(2), 4, 1, Fraction(1, 3 ** 20))
    elapsed = time.perf_counter() - start
    errs = [P3.valuation(1 - x) for x in out.iterates]
    rate = len(out.iterates) > 20 and all(errs[n] <= Fraction(1, 3 ** n) for n in range(21))
    head = out.iterates[:5] == [0, 4, -8, 28, -80]
    _, cli_ok = round_trip(2)
    ok = rate and head and out.invariant_ok and elapsed < 1 and cli_ok
    report(capsys, 2, ok, f"iterates {out.iterates[:5]}, V3(r - r_n) <= 3^-n for n <= 20: {rate}, "
                          f"{elapsed:.3f}s (< 1s)")


def test_criterion_03_tcm_characterization(capsys):
    start = time.perf_counter()
    bad = 0
    for p in (2, 3, 5):
        ring = PadicContext(p)
        for a in range(1, 51):
            for b in range(1, 51):
                # 1 lies in gcd(a, b)Z + p^8 Z iff the two generators are coprime
                closure = math.gcd(math.gcd(a, b), p ** 8) == 1
                bad += padic_tcm(ring.ideal(a), ring.ideal(b)) != closure
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(3)
    ok = bad == 0 and elapsed < 10 and cli_ok
    report(capsys, 3, ok, f"7500 pairs, {bad} disagreements, {elapsed:.2f}s (< 10s)")


def test_criterion_04_lagrange(capsys):
    start = time.perf_counter()
    worked = lagrange_dense(LagrangeProblem([0, 3], [1, 0], Fraction(1, 100)))
    r0, r3 = worked.residuals
    example = abs(float(r0.residual) - 8.7e-4) < 5e-5 and r3.residual == 0
    rng = random.Random(2024)
    eps = Fraction(1, 10 ** 6)
    worst = Fraction(0)
    for _ in range(5):
        n = rng.randint(2, 5)
        xs = rng.sample(range(-20, 21), n)
        ys = [rng.randint(-20, 20) for _ in xs]
        res = lagrange_dense(LagrangeProblem(xs, ys, eps))
        for x, y, node in zip(xs, ys, res.residuals):
            assert node.residual == abs(res(x) - QSqrt2(y))
            worst = max(worst, node.recheck(10))
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(4)
    ok = example and worst < eps and elapsed < 5 and cli_ok
    report(capsys, 4, ok, f"worked residual {float(r0.residual):.3e} at 0, {r3.residual} at 3; "
                          f"max 10x-recheck residual {float(worst):.2e} (< 1e-6), {elapsed:.2f}s (< 5s)")


def test_criterion_05_hermite(capsys):
    classic = hermite_jets(JetProblem([0, 1], [[0, 0], [1, 0]])).poly
    example = classic == Poly([0, 0, 3, -2])
    rng = random.Random(11)

    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 6))

    problems = mismatches = 0
    elapsed = 0.0
    while problems < 100:
        k = rng.randint(1, 4)
        orders = [rng.randint(0, 3) for _ in range(k)]
        if sum(orders) + k > 9:
            continue
        pts = list({CQ(q(), q()) for _ in range(k)})
        if len(pts) < k:
            continue
        jets = [[CQ(q(), q()) for _ in range(m + 1)] for m in orders]
        prob = JetProblem(pts, jets)
        problems += 1
        start = time.perf_counter()
        f = hermite_jets(prob).poly
        elapsed += time.perf_counter() - start
        mismatches += f != confluent_vandermonde(prob.points, prob.jets)
    _, cli_ok = round_trip(5)
    ok = example and mismatches == 0 and elapsed < 5 and cli_ok
    report(capsys, 5, ok, f"3z^2 - 2z^3 reproduced: {example}; {problems} random problems "
                          f"(total degree <= 8), {mismatches} mismatches, solver time {elapsed:.2f}s (< 5s)")


def test_criterion_06_hyperspace(capsys):
    start = time.perf_counter()
    lattice_bad = sum(join(P3.ideal(a), P3.ideal(b)) != P3.ideal(math.gcd(a, b))
                      or meet(P3.ideal(a), P3.ideal(b)) != P3.ideal(math.lcm(a, b))
                      for a in range(1, 101) for b in range(1, 101))
    scan_bad = 0
    for p in (2, 3):
        ring = PadicContext(p)
        for m in range(0, 6):
            eps = Fraction(1, p ** m) + Fraction(1, 10 ** 9)
            for a in range(1, 31):
                for b in range(1, 31):
                    expected = scan_covers(a, b, p, m) and scan_covers(b, a, p, m)
                    scan_bad += entourage(ring.ideal(a), ring.ideal(b), eps) != expected
    rng = random.Random(6)

    def near(g):
        # same 3-adic order, different cofactor: gap 0
        return g * rng.choice([1, 2, 4, 5, 7, 8])

    quads = []
    for k in range(1000):
        a1, b1 = rng.randint(1, 300), rng.randint(1, 300)
        if k % 2:
            quads.append(((P3.ideal(a1), P3.ideal(b1)), (P3.ideal(near(a1)), P3.ideal(near(b1)))))
        else:
            quads.append(((P3.ideal(a1), P3.ideal(b1)),
                          (P3.ideal(rng.randint(1, 300)), P3.ideal(rng.randint(1, 300)))))
    checked = violations = 0
    for eps in (1, Fraction(1, 3), Fraction(1, 27)):
        rep = join_continuity_test(quads, eps)
        checked += rep.checked
        violations += len(rep.violations)
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(6)
    ok = lattice_bad == 0 and scan_bad == 0 and violations == 0 and checked > 0 \
        and elapsed < 30 and cli_ok
    report(capsys, 6, ok, f"lattice mismatches {lattice_bad}/10000, entourage vs residue scan "
                          f"mismatches {scan_bad}/10800, join continuity {violations} violations in "
                          f"{checked} checked of 3x1000, {elapsed:.2f}s (< 30s)")


def test_criterion_07_monotone_nets(capsys):
    start = time.perf_counter()
    three = monotone_limit_check(NetSpec([P3.ideal(3 ** n) for n in range(17)]))
    two = monotone_limit_check(NetSpec([P3.ideal(2 ** n) for n in range(17)]))
    elapsed = time.perf_counter() - start
    conv = (three.kind == "converges" and three.limit.is_zero()
            and three.gaps == [Fraction(1, 3 ** n) for n in range(17)])
    cauchy = (two.kind == "cauchy-not-convergent" and two.floor == 1
              and len(two.gaps) == 17 and all(g == 1 for g in two.gaps))
    _, cli_ok = round_trip(7)
    ok = conv and cauchy and elapsed < 5 and cli_ok
    report(capsys, 7, ok, f"3^n Z: {three.kind} to {three.limit} with gaps 3^-n; 2^n Z: {two.kind}, "
                          f"floor {two.floor} at n = 0..16, {elapsed:.2f}s (< 5s)")


def test_criterion_08_far_ideal_density(capsys):
    start = time.perf_counter()
    cert = ideal_density_certificate(2, 1, 1, Fraction(1, 100))
    exact = DISK.valuation(1 - cert.element)
    first = cert.degree <= 8 and cert.bound == Fraction(3, 2 ** 9) and exact <= cert.bound
    bounds = [density_bound(z, 1, 1, 8) for z in range(2, 11)]
    monotone = all(x > y for x, y in zip(bounds, bounds[1:]))
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(8)
    ok = first and monotone and elapsed < 5 and cli_ok
    report(capsys, 8, ok, f"degree {cert.degree} (<= 8), bound {cert.bound} (= 3*2^-9), exact "
                          f"{float(exact):.2e}; bounds strictly decreasing over z = 2..10: {monotone}, "
                          f"{elapsed:.2f}s (< 5s)")


def test_criterion_09_power_divergence(capsys):
    start = time.perf_counter()
    rows = ideal_power_divergence_demo(0, 1, 10)
    bounds_ok = [r.lower_bound for r in rows] == [1] * 11
    closest = min(min(sample_power_distances(0, 1, n, 100, 20, seed=n)) for n in range(11))
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(9)
    ok = bounds_ok and closest >= 1 and elapsed < 30 and cli_ok
    report(capsys, 9, ok, f"lower bound 1 for n <= 10: {bounds_ok}; closest of 1100 samples "
                          f"{float(closest):.3f} (>= 1), {elapsed:.2f}s (< 30s)")


def test_criterion_10_finite_exception_crat(capsys):
    start = time.perf_counter()
    eps = Fraction(1, 100)
    z, z5, z7 = (DISK.ideal_from_roots([(c, 1)]) for c in (0, 5, 7))
    cert = crat_infinite(ResidueSystem(DISK, [(z, 1), (z5, 0), (z7, 0)], eps))
    recomputed = [value(DISK, cert.solution - r.target - r.witness) for r in cert.residuals]
    members = all(r.ideal.contains(r.witness) for r in cert.residuals)
    elapsed = time.perf_counter() - start
    _, cli_ok = round_trip(10)
    ok = (cert.exceptional == [z] and all(v < eps for v in recomputed) and members
          and check_certificate(cert) and elapsed < 10 and cli_ok)
    report(capsys, 10, ok, f"F = {[str(I) for I in cert.exceptional]}, recomputed residuals "
                           f"{[f'{float(v):.1e}' for v in recomputed]} (< 1e-2), {elapsed:.2f}s (< 10s)")


def _leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(obj, list):
        for k, v in enumerate(obj):
            yield from _leaves(v, path + (k,))
    else:
        yield path, obj


def _mutate(x, rng):
    if isinstance(x, bool):
        return not x
    if isinstance(x, int):
        return x + rng.choice([-3, -1, 1, 2])
    try:
        q = parse_rational(x)
    except (ValueError, ZeroDivisionError):
        return x + "x"
    return format_rational(q + Fraction(rng.choice([-1, 1]), rng.choice([7, 101, 1009])))


def _tamper(out, rng, reseal):
    bad = copy.deepcopy(out)
    root = bad["result"] if reseal else bad
    leaves = list(_leaves(root))
    path, leaf = rng.choice(leaves)
    node = root
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = _mutate(leaf, rng)
    if reseal:
        bad["digest"] = digest(bad)
    return bad, path


def test_criterion_11_end_to_end_audit(capsys):
    outs = [run_job(spec) for n in sorted(JOBS) for spec in JOBS[n]]
    clean = sum(verify_result(o) == [] for o in outs)
    rng = random.Random(20)
    missed = []
    for k in range(20):
        # odd rounds reseal the digest, so only recomputation can catch the change
        bad, path = _tamper(rng.choice(outs), rng, reseal=bool(k % 2))
        if not verify_result(bad):
            missed.append((bad["command"], path))
    ok = clean == len(outs) and not missed
    report(capsys, 11, ok, f"{clean}/{len(outs)} outputs of criteria 1-10 verify; 20 single-field "
                           f"tamperings (10 with resealed digest), undetected: {missed or 'none'}")


@pytest.mark.parametrize("seed", range(5))
def test_resealed_tampering_is_caught_by_recomputation(seed):
    outs = [run_job(spec) for n in sorted(JOBS) for spec in JOBS[n]]
    rng = random.Random(1000 + seed)
    for _ in range(40):
        bad, path = _tamper(rng.choice(outs), rng, reseal=True)
        assert verify_result(bad), (bad["command"], path)
