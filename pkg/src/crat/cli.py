"""``crat`` command line: JSON jobs in, certified JSON results out.

Every result embeds its input, the computed data and a sha256 ``digest``
of the canonical serialization, and ``crat verify`` re-derives every
claim from scratch. Exit codes: 0 success, 2 malformed input, 3 solver
error (the JSON body carries a machine-readable ``error`` reason), 4 a
result that fails verification.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import hyperspace as hs
from .errors import CratError, Undecided
from .interp import (JetProblem, LagrangeProblem, hermite_jets, lagrange_dense, qpoly_eval,
                     working_bits)
from .poly import Poly
from .rings import PadicContext, PolyContext, padic_tcm
from .runge import density_bound, ideal_density_certificate
from .serialize import (SchemaError, canonical, dec_complex, dec_element, dec_ideal, dec_int,
                        dec_poly, dec_quad, dec_rational, dec_ring, dec_value, digest,
                        enc_element, enc_ideal, enc_poly, enc_quad, enc_rational, enc_value,
                        require)
from .solver import (ResidueSystem, crat_infinite, densify, finite_crat, reduce_family, tcm_witness,
                     value)

EXIT_OK, EXIT_SCHEMA, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4


def _list(spec, key, nonempty=True) -> list:
    x = require(spec, key)
    if not isinstance(x, list):
        raise SchemaError(f"{key!r} must be a list")
    if nonempty and not x:
        raise SchemaError(f"{key!r} must not be empty")
    return x


def _eps(spec, default=None) -> Fraction:
    if "epsilon" not in spec:
        if default is None:
            raise SchemaError("missing field 'epsilon'")
        return Fraction(default)
    eps = dec_rational(spec["epsilon"])
    if eps < 0:
        raise SchemaError("epsilon must be nonnegative")
    return eps


def _positive_eps(spec) -> Fraction:
    eps = _eps(spec)
    if eps <= 0:
        raise SchemaError("epsilon must be positive")
    return eps


# ---------------------------------------------------------------------------
# crt


def _crt_system(spec):
    ring = dec_ring(require(spec, "ring"))
    ideals = [dec_ideal(ring, g) for g in _list(spec, "ideals")]
    targets = [dec_element(ring, t) for t in _list(spec, "targets")]
    if len(ideals) != len(targets):
        raise SchemaError("ideals and targets differ in length")
    return ResidueSystem(ring, list(zip(ideals, targets)), _eps(spec, 0))


def run_crt(spec) -> dict:
    system = _crt_system(spec)
    ring = system.ring
    method = spec.get("method", "finite")
    if method == "finite":
        cert = finite_crat(system)
    elif method == "infinite":
        cert = crat_infinite(system, spec.get("strategy", "reduce"))
    else:
        raise SchemaError(f"unknown method {method!r}")
    out = {
        "solution": enc_element(ring, cert.solution),
        "epsilon": enc_rational(cert.epsilon),
        "residuals": [{"ideal": enc_ideal(r.ideal), "target": enc_element(ring, r.target),
                       "bound": enc_value(r.bound), "witness": enc_element(ring, r.witness)}
                      for r in cert.residuals],
    }
    if cert.exceptional is not None:
        out["exceptional"] = [enc_ideal(I) for I in cert.exceptional]
    return out


def verify_crt(spec, res) -> list[str]:
    system = _crt_system(spec)
    ring, eps = system.ring, system.epsilon
    problems = []
    r = dec_element(ring, require(res, "solution"))
    residuals = _list(res, "residuals")
    if len(residuals) != len(system.entries):
        return ["residual count does not match the system"]
    if dec_rational(require(res, "epsilon")) != eps:
        problems.append("epsilon differs from the input")
    for k, ((I, t), item) in enumerate(zip(system.entries, residuals)):
        if dec_ideal(ring, require(item, "ideal")) != I:
            problems.append(f"residual {k}: ideal differs from the input")
        if dec_element(ring, require(item, "target")) != t:
            problems.append(f"residual {k}: target differs from the input")
        w = dec_element(ring, require(item, "witness"))
        bound = dec_value(require(item, "bound"))
        if not I.contains(w):
            problems.append(f"residual {k}: witness is not in the ideal")
        actual = value(ring, r - t - w)
        if actual != bound:
            problems.append(f"residual {k}: recorded bound {bound} but V = {actual}")
        if (eps == 0 and bound != 0) or (eps != 0 and not bound < eps):
            problems.append(f"residual {k}: bound {bound} misses epsilon {eps}")
    if spec.get("method", "finite") == "infinite":
        exc = [dec_ideal(ring, x) for x in _list(res, "exceptional", nonempty=False)]
        expected = reduce_family([I for I, _ in system.entries], eps).exceptional
        if exc != expected:
            problems.append("exceptional set differs from the recomputed reduction")
    elif "exceptional" in res:
        problems.append("exceptional set recorded for a finite solve")
    return problems


# ---------------------------------------------------------------------------
# tcm-check


def _tcm_pair(spec):
    ring = dec_ring(require(spec, "ring"))
    ideals = _list(spec, "ideals")
    if len(ideals) != 2:
        raise SchemaError("tcm-check takes exactly two ideals")
    return ring, dec_ideal(ring, ideals[0]), dec_ideal(ring, ideals[1])


def run_tcm(spec) -> dict:
    ring, I, J = _tcm_pair(spec)
    out: dict = {}
    if isinstance(ring, PadicContext):
        out["tcm"] = padic_tcm(I, J)
        if not out["tcm"] or "epsilon" not in spec:
            return out
    eps = _positive_eps(spec)
    try:
        w = tcm_witness(I, J, eps)
    except CratError as exc:
        if exc.reason != "not-tcm":
            raise
        out["tcm"] = False
        return out
    out["tcm"] = True
    out["witness"] = {"i": enc_element(ring, w.i), "j": enc_element(ring, w.j),
                      "bound": enc_value(w.bound)}
    return out


def verify_tcm(spec, res) -> list[str]:
    ring, I, J = _tcm_pair(spec)
    problems = []
    tcm = require(res, "tcm")
    if isinstance(ring, PadicContext) and tcm != padic_tcm(I, J):
        problems.append("tcm flag disagrees with the p-adic characterization")
    if "witness" in res:
        w = res["witness"]
        i, j = dec_element(ring, require(w, "i")), dec_element(ring, require(w, "j"))
        bound = dec_value(require(w, "bound"))
        if not (I.contains(i) and J.contains(j)):
            problems.append("witness parts are not in their ideals")
        if value(ring, 1 - i - j) != bound:
            problems.append("witness bound does not match V(1 - (i + j))")
        if not bound < _positive_eps(spec):
            problems.append("witness bound misses epsilon")
    elif tcm and not isinstance(ring, PadicContext):
        problems.append("positive answer without a witness")
    return problems


# ---------------------------------------------------------------------------
# interpolation


def _lagrange_problem(spec) -> LagrangeProblem:
    ring_points = [dec_quad(x) for x in _list(spec, "points")]
    values = [dec_quad(y) for y in _list(spec, "values")]
    for q in ring_points + values:
        if not q.is_integral():
            raise SchemaError(f"{q} is not in Z[sqrt 2]")
    try:
        return LagrangeProblem(ring_points, values, _positive_eps(spec))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def run_lagrange(spec) -> dict:
    result = lagrange_dense(_lagrange_problem(spec))
    return {
        "coeffs": [enc_quad(c) for c in result.coeffs],
        "residuals": [{"point": enc_quad(r.point), "value": enc_quad(r.value),
                       "residual": enc_value(r.residual), "upper": enc_rational(r.upper),
                       "bits": r.bits}
                      for r in result.residuals],
    }


def verify_lagrange(spec, res) -> list[str]:
    prob = _lagrange_problem(spec)
    coeffs = [dec_quad(c) for c in _list(res, "coeffs")]
    items = _list(res, "residuals")
    if len(items) != len(prob.points):
        return ["residual count does not match the nodes"]
    problems = []
    for k, (x, y, item) in enumerate(zip(prob.points, prob.values, items)):
        if dec_quad(require(item, "point")) != x or dec_quad(require(item, "value")) != y:
            problems.append(f"node {k}: point or value differs from the input")
        actual = abs(qpoly_eval(coeffs, x) - y)
        recorded = dec_value(require(item, "residual"))
        if actual != recorded:
            problems.append(f"node {k}: recorded residual differs from |p(x) - y|")
        upper = dec_rational(require(item, "upper"))
        bits = require(item, "bits")
        if bits != working_bits(actual) or actual.interval(bits)[1] != upper:
            problems.append(f"node {k}: upper bound is not the enclosure at the recorded precision")
        elif not (actual <= upper and upper < prob.epsilon):
            problems.append(f"node {k}: upper bound is not a certified enclosure below epsilon")
        if not actual < prob.epsilon:
            problems.append(f"node {k}: residual misses epsilon")
    return problems


def _jet_problem(spec) -> JetProblem:
    points = [dec_complex(z) for z in _list(spec, "points")]
    jets = [[dec_complex(w) for w in row] for row in _list(spec, "jets")]
    try:
        return JetProblem(points, jets)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def run_hermite(spec) -> dict:
    prob = _jet_problem(spec)
    f = hermite_jets(prob).poly
    return {"coeffs": enc_poly(f), "degree": f.degree}


def verify_hermite(spec, res) -> list[str]:
    prob = _jet_problem(spec)
    f = dec_poly(require(res, "coeffs"))
    problems = []
    if require(res, "degree") != f.degree:
        problems.append("recorded degree differs")
    if f.degree >= sum(len(row) for row in prob.jets):
        problems.append("degree is not below the number of conditions")
    for z, row in zip(prob.points, prob.jets):
        if f.jet(z, len(row) - 1) != row:
            problems.append(f"jet mismatch at {z}")
    return problems


# ---------------------------------------------------------------------------
# hyperspace


def _enc_decision(d: hs.CoverDecision) -> dict:
    c = d.certificate
    out = {"holds": d.holds}
    if d.holds:
        out["error"] = enc_value(c["error"])
    else:
        out["lower_bound"] = enc_value(c["lower_bound"])
    return out


def run_hyper_gap(spec) -> dict:
    ring = dec_ring(require(spec, "ring"))
    eps = _positive_eps(spec) if "epsilon" in spec else None
    rows = []
    for n, pair in enumerate(_list(spec, "pairs")):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError("each pair is [A, B]")
        A, B = dec_ideal(ring, pair[0]), dec_ideal(ring, pair[1])
        row: dict = {"n": n}
        if isinstance(ring, PadicContext):
            row["gap"] = enc_rational(hs.padic_gap(A, B))
            row["join"] = enc_ideal(hs.join(A, B))
            row["meet"] = enc_ideal(hs.meet(A, B))
        elif eps is None:
            raise SchemaError("non p-adic gaps need an epsilon")
        if eps is not None:
            try:
                ab, ba = hs.covers(A, B, eps), hs.covers(B, A, eps)
            except Undecided:
                row["entourage"] = "undecided"
            else:
                row["entourage"] = ab.holds and ba.holds
                row["covers"] = [_enc_decision(ab), _enc_decision(ba)]
        rows.append(row)
    return {"rows": rows}


def run_hyper_net(spec) -> dict:
    ring = dec_ring(require(spec, "ring"))
    ideals = [dec_ideal(ring, g) for g in _list(spec, "generators")]
    limit = dec_ideal(ring, spec["limit"]) if "limit" in spec else None
    rep = hs.monotone_limit_check(hs.NetSpec(ideals, limit))
    out = {
        "kind": rep.kind,
        "limit": enc_ideal(rep.limit),
        "rows": [{"n": n, "gap": enc_rational(g)} for n, g in enumerate(rep.gaps)],
        "consecutive": [enc_rational(g) for g in rep.consecutive],
    }
    if rep.floor is not None:
        out["floor"] = enc_rational(rep.floor)
    if rep.evidence:
        out["evidence"] = [{"k": e["k"], "error": enc_rational(e["error"])} for e in rep.evidence]
    return out


# ---------------------------------------------------------------------------
# demos


def _densify_args(spec):
    ring = dec_ring(require(spec, "ring"))
    I = dec_ideal(ring, require(spec, "ideal"))
    a = dec_element(ring, require(spec, "a"))
    r = dec_element(ring, require(spec, "r"))
    return ring, I, a, r, _positive_eps(spec)


def run_densify(spec) -> dict:
    ring, I, a, r, eps = _densify_args(spec)
    out = densify(I, a, r, eps)
    return {
        "element": enc_element(ring, out.element),
        "iterations": out.iterations,
        "bound": enc_value(out.bound),
        "iterates": [enc_element(ring, x) for x in out.iterates],
        "errors": [enc_value(e) for e in out.errors],
    }


def verify_densify(spec, res) -> list[str]:
    ring, I, a, r, eps = _densify_args(spec)
    problems = []
    delta, vr = value(ring, 1 - a), value(ring, r)
    if not (I.contains(a) and delta < 1):
        return ["a is not a contracting element of the ideal"]
    iterates = [dec_element(ring, x) for x in _list(res, "iterates")]
    errors = [dec_value(e) for e in _list(res, "errors")]
    rn = ring.coerce(0)
    for n, (x, e) in enumerate(zip(iterates, errors)):
        if x != rn:
            problems.append(f"iterate {n} does not follow the recursion")
            break
        if e != value(ring, r - x) or e > delta ** n * vr:
            problems.append(f"iterate {n}: error record or invariant fails")
        rn = rn + (r - rn) * a
    if len(iterates) != len(errors):
        problems.append("iterate and error lists differ in length")
    element = dec_element(ring, require(res, "element"))
    bound = dec_value(require(res, "bound"))
    if not iterates or element != iterates[-1]:
        problems.append("element is not the last iterate")
    if not I.contains(element):
        problems.append("element is not in the ideal")
    if bound != value(ring, r - element) or not bound < eps:
        problems.append("bound does not certify the tolerance")
    n0, scale = 0, vr
    while not scale < eps:
        n0, scale = n0 + 1, scale * delta
    if require(res, "iterations") != n0:
        problems.append("a-priori iteration count is wrong")
    return problems


def _divergence_args(spec):
    z0 = dec_complex(require(spec, "z0"))
    R = dec_rational(spec.get("R", "1"))
    n_max = dec_int(require(spec, "n_max"))
    samples = dec_int(spec.get("samples", 0))
    max_degree = dec_int(spec.get("max_degree", 20))
    seed = dec_int(spec.get("seed", 0))
    if n_max < 0 or samples < 0 or R <= 0:
        raise SchemaError("n_max, samples and R must be nonnegative (R positive)")
    return z0, R, n_max, samples, max_degree, seed


def run_divergence(spec) -> dict:
    z0, R, n_max, samples, max_degree, seed = _divergence_args(spec)
    rows = []
    for row in hs.ideal_power_divergence_demo(z0, R, n_max):
        item = {"n": row.n, "gap": {"lower_bound": enc_rational(row.lower_bound)}}
        if samples:
            dists = hs.sample_power_distances(z0, R, row.n, samples, max_degree, seed + row.n)
            item["sampled_min"] = enc_rational(min(dists))
        rows.append(item)
    return {"rows": rows}


def _density_args(spec):
    ring = dec_ring(spec.get("ring", {"kind": "poly", "R": "1"}))
    if not isinstance(ring, PolyContext):
        raise SchemaError("density-demo needs a polynomial ring")
    point = dec_complex(require(spec, "point"))
    m = dec_int(require(spec, "m"))
    if m < 0:
        raise SchemaError("m must be nonnegative")
    return ring, point, m, _positive_eps(spec)


def run_density(spec) -> dict:
    ring, point, m, eps = _density_args(spec)
    cert = ideal_density_certificate(point, m, ring.R, eps)
    return {"element": enc_poly(cert.element), "bound": enc_rational(cert.bound),
            "degree": cert.degree, "exact": enc_rational(value(ring, 1 - cert.element))}


def verify_density(spec, res) -> list[str]:
    ring, point, m, eps = _density_args(spec)
    a = dec_poly(require(res, "element"))
    bound, exact = dec_rational(require(res, "bound")), dec_rational(require(res, "exact"))
    problems = []
    if not (Poly.linear(point) ** m).divides(a):
        problems.append("element is not in the ideal")
    if value(ring, 1 - a) != exact:
        problems.append("recorded exact norm differs")
    if not (exact <= bound < eps):
        problems.append("bound does not certify the tolerance")
    degree = require(res, "degree")
    if not isinstance(degree, int) or degree + m != a.degree:
        problems.append("recorded truncation degree differs")
    elif bound != density_bound(point, m, ring.R, degree):
        problems.append("bound differs from the tail bound at the recorded degree")
    return problems


def _rerun(runner):
    """Verifier for deterministic reports: recompute and compare."""
    def check(spec, res):
        return [] if runner(spec) == res else ["recomputation differs from the recorded result"]
    return check


COMMANDS = {
    "crt": (run_crt, verify_crt),
    "tcm-check": (run_tcm, verify_tcm),
    "interp-lagrange": (run_lagrange, verify_lagrange),
    "interp-hermite": (run_hermite, verify_hermite),
    "hyper-gap": (run_hyper_gap, _rerun(run_hyper_gap)),
    "hyper-net": (run_hyper_net, _rerun(run_hyper_net)),
    "densify-demo": (run_densify, verify_densify),
    "divergence-demo": (run_divergence, _rerun(run_divergence)),
    "density-demo": (run_density, verify_density),
}


def run_job(spec) -> dict:
    """Run one job spec; raises ``SchemaError`` or ``CratError``."""
    cmd = require(spec, "command")
    if cmd not in COMMANDS:
        raise SchemaError(f"unknown command {cmd!r}")
    out = {"command": cmd, "input": spec, "result": COMMANDS[cmd][0](spec)}
    out["digest"] = digest(out)
    return out


def verify_result(result) -> list[str]:
    """Problems found in a result produced by ``run_job`` (empty list = pass)."""
    try:
        cmd = require(result, "command")
        spec = require(result, "input")
        if cmd not in COMMANDS or require(spec, "command") != cmd:
            return ["unknown or inconsistent command"]
        problems = []
        if result.get("digest") != digest(result):
            problems.append("digest mismatch")
        problems += COMMANDS[cmd][1](spec, require(result, "result"))
        return problems
    except (SchemaError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return [f"malformed result: {exc}"]
    except CratError as exc:
        return [f"recomputation failed: {exc.reason}"]


def execute(spec) -> tuple[int, dict]:
    """Run a job and map failures onto exit codes."""
    try:
        return EXIT_OK, run_job(spec)
    except CratError as exc:
        return EXIT_SOLVER, {"error": exc.reason, "message": str(exc)}
    except (SchemaError, KeyError, TypeError, ValueError) as exc:
        return EXIT_SCHEMA, {"error": "schema", "message": str(exc)}


# ---------------------------------------------------------------------------
# argument parsing


def _read_input(path):
    text = open(path, encoding="utf-8").read() if path and path != "-" else sys.stdin.read()
    return json.loads(text)


def _emit(obj):
    sys.stdout.write(canonical(obj) + "\n")


SUBCOMMANDS = {
    ("crt",): "crt",
    ("tcm",): "tcm-check",
    ("interp", "lagrange"): "interp-lagrange",
    ("interp", "hermite"): "interp-hermite",
    ("hyper", "gap"): "hyper-gap",
    ("hyper", "net"): "hyper-net",
    ("demo", "densify"): "densify-demo",
    ("demo", "divergence"): "divergence-demo",
    ("demo", "density"): "density-demo",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True)

    def add_input(p):
        p.add_argument("--input", "-i", help="JSON file (default: stdin)")

    add_input(sub.add_parser("crt", help="approximate Chinese remainder solve"))
    add_input(sub.add_parser("tcm", help="topological co-maximality check"))
    for group, names in (("interp", ("lagrange", "hermite")), ("hyper", ("gap", "net")),
                         ("demo", ("densify", "divergence", "density"))):
        g = sub.add_parser(group).add_subparsers(dest="action", required=True)
        for name in names:
            add_input(g.add_parser(name))
    add_input(sub.add_parser("verify", help="re-check a result (or a list of results)"))
    run = sub.add_parser("run", help="run job specs carrying a 'command' field")
    add_input(run)
    run.add_argument("--jobs", "-j", type=int, default=1, help="parallel workers for a list of specs")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = _read_input(args.input)
    except (OSError, json.JSONDecodeError) as exc:
        _emit({"error": "schema", "message": str(exc)})
        return EXIT_SCHEMA

    if args.group == "verify":
        results = data if isinstance(data, list) else [data]
        report = [verify_result(r) for r in results]
        ok = all(not p for p in report)
        _emit({"ok": ok, "problems": report if isinstance(data, list) else report[0]})
        return EXIT_OK if ok else EXIT_VERIFY

    if args.group == "run":
        specs = data if isinstance(data, list) else [data]
        if args.jobs > 1 and len(specs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                outcomes = list(pool.map(execute, specs))
        else:
            outcomes = [execute(s) for s in specs]
        bodies = [body for _, body in outcomes]
        _emit(bodies if isinstance(data, list) else bodies[0])
        return max(code for code, _ in outcomes)

    key = (args.group,) + ((args.action,) if getattr(args, "action", None) else ())
    if not isinstance(data, dict):
        _emit({"error": "schema", "message": "a job spec is a JSON object"})
        return EXIT_SCHEMA
    spec = dict(data)
    spec["command"] = SUBCOMMANDS[key]
    code, body = execute(spec)
    _emit(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
