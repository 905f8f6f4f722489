"""JSON codecs for ring elements, ideals and bounds.

Rationals travel as ``"num/den"`` strings (integers as ``"n"``) so no
float ever enters a certificate. Encodings by ring kind:

* p-adic element: JSON integer; ideal: its generator.
* Z[sqrt 2] element: ``{"a": int, "b": int}``; ideal: its generator.
* polynomial: list of coefficients ``{"re": q, "im": q}``, constant first;
  ideal: ``{"factors": [[root, mult], ...]}``.
* exact values in Q(sqrt 2) (bounds on the real line): ``{"a": q, "b": q}``.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .numbers import CQ, QSqrt2, format_rational, parse_rational
from .poly import Poly
from .rings import PadicContext, PolyContext, PrincipalIdeal, QuadContext, RingContext


class SchemaError(ValueError):
    """Input JSON does not match the expected shape."""


def require(obj: dict, key: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object holding {key!r}")
    if key not in obj:
        raise SchemaError(f"missing field {key!r}")
    return obj[key]


def dec_int(x) -> int:
    if isinstance(x, bool):
        raise SchemaError("booleans are not integers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        q = dec_rational(x)
        if q.denominator == 1:
            return q.numerator
    raise SchemaError(f"expected an integer, got {x!r}")


def dec_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_rational(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(str(exc)) from exc
    raise SchemaError(f"expected a rational string 'num/den', got {x!r}")


def enc_rational(q) -> str:
    return format_rational(q)


def enc_complex(c: CQ) -> dict:
    return {"re": enc_rational(c.re), "im": enc_rational(c.im)}


def dec_complex(x) -> CQ:
    if isinstance(x, dict):
        return CQ(dec_rational(require(x, "re")), dec_rational(x.get("im", 0)))
    return CQ(dec_rational(x))


def enc_poly(f: Poly) -> list:
    return [enc_complex(c) for c in f.coeffs]


def dec_poly(x) -> Poly:
    if not isinstance(x, list):
        raise SchemaError("a polynomial is a list of coefficients")
    return Poly([dec_complex(c) for c in x])


def enc_quad(x: QSqrt2) -> dict:
    if x.is_integral():
        return {"a": int(x.a), "b": int(x.b)}
    return {"a": enc_rational(x.a), "b": enc_rational(x.b)}


def dec_quad(x) -> QSqrt2:
    if isinstance(x, dict):
        return QSqrt2(dec_rational(require(x, "a")), dec_rational(x.get("b", 0)))
    return QSqrt2(dec_rational(x))


def enc_value(v):
    """Exact valuation value: rational string or a Q(sqrt 2) object."""
    if isinstance(v, QSqrt2):
        return enc_rational(v.a) if v.b == 0 else enc_quad(v)
    return enc_rational(v)


def dec_value(x):
    if isinstance(x, dict):
        return dec_quad(x)
    return dec_rational(x)


def enc_ring(ring: RingContext) -> dict:
    return ring.descriptor()


def dec_ring(x) -> RingContext:
    kind = require(x, "kind")
    try:
        if kind == "padic":
            return PadicContext(dec_int(require(x, "p")))
        if kind == "quad":
            return QuadContext()
        if kind == "poly":
            return PolyContext(dec_rational(x.get("R", "1")))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown ring kind {kind!r}")


def enc_element(ring: RingContext, x):
    if isinstance(ring, PadicContext):
        return x
    if isinstance(ring, QuadContext):
        return enc_quad(x)
    return enc_poly(x)


def dec_element(ring: RingContext, x):
    if isinstance(ring, PadicContext):
        return dec_int(x)
    if isinstance(ring, QuadContext):
        q = dec_quad(x)
        if not q.is_integral():
            raise SchemaError(f"{q} is not in Z[sqrt 2]")
        return q
    if isinstance(x, list):
        return dec_poly(x)
    return Poly([dec_complex(x)])


def enc_ideal(I: PrincipalIdeal):
    ring = I.ring
    if isinstance(ring, PolyContext):
        if I.factors is not None:
            return {"factors": [[enc_complex(c), m] for c, m in I.factors]}
        return {"generator": enc_poly(I.generator)}
    return enc_element(ring, I.generator)


def dec_ideal(ring: RingContext, x) -> PrincipalIdeal:
    if isinstance(ring, PolyContext):
        if isinstance(x, dict) and "factors" in x:
            factors = x["factors"]
            if not isinstance(factors, list):
                raise SchemaError("factors must be a list")
            pairs = []
            for item in factors:
                if not (isinstance(item, list) and len(item) == 2):
                    raise SchemaError("each factor is [root, multiplicity]")
                mult = dec_int(item[1])
                if mult < 0:
                    raise SchemaError("negative multiplicity")
                pairs.append((dec_complex(item[0]), mult))
            return ring.ideal_from_roots(pairs)
        return ring.ideal(dec_element(ring, require(x, "generator")))
    return ring.ideal(dec_element(ring, x))


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj: dict) -> str:
    body = {k: v for k, v in obj.items() if k != "digest"}
    return hashlib.sha256(canonical(body).encode()).hexdigest()
