"""JSON persistence for pairs and certificates, plus corpus generation.

Rationals travel as reduced "p/q" strings, never as JSON numbers: float
parsing would silently destroy exactness, so documents containing JSON
floats are rejected outright.
"""

from __future__ import annotations

import json
import os
import random
import re
import tempfile
from fractions import Fraction

from .complements import ComplementCertificate, LiftRecord, RecursionLevel
from .convex import facet_structure, vpolytope
from .lattice import make_primitive
from .pairs import ToricPair, make_pair, validate

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class DocumentError(ValueError):
    """Malformed pair or certificate document."""


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise DocumentError(f"not a rational 'p/q' string: {text!r}")
    return Fraction(text)


def emit_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _reject_float(value: str):
    raise DocumentError(f"floating point numbers are not allowed in documents: {value}")


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_pair(text: str) -> ToricPair:
    doc = _loads(text)
    return pair_from_document(doc)


def pair_from_document(doc: dict) -> ToricPair:
    problems = []
    for key in ("dim", "rays", "coeffs"):
        if key not in doc:
            problems.append(f"missing field {key!r}")
    if problems:
        raise DocumentError("; ".join(problems))
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise DocumentError("dim must be a positive integer")
    rays = doc["rays"]
    if not isinstance(rays, list) or not all(
        isinstance(r, list) and all(isinstance(c, int) for c in r) for r in rays
    ):
        raise DocumentError("rays must be a list of integer arrays")
    coeffs = [parse_rational(c) for c in doc["coeffs"]]
    name = doc.get("name")
    pair = make_pair(dim, rays, coeffs, name=name)
    violations = validate(pair)
    if violations:
        raise DocumentError("; ".join(violations))
    return pair


def pair_document(pair: ToricPair) -> dict:
    doc = {
        "dim": pair.dim,
        "rays": [list(r) for r in pair.rays],
        "coeffs": [emit_rational(a) for a in pair.coeffs],
    }
    if pair.name is not None:
        doc["name"] = pair.name
    return doc


def emit_pair(pair: ToricPair) -> str:
    return _dumps(pair_document(pair))


def certificate_document(pair: ToricPair, cert: ComplementCertificate) -> dict:
    return {
        "pair": pair_document(pair),
        "basis": [list(phi) for phi in cert.basis],
        "witness": emit_rational(cert.witness),
        "n": cert.n,
        "divisor_coeffs": [emit_rational(m) for m in cert.divisor_coeffs],
        "mode": cert.mode,
        "epsilon": emit_rational(cert.epsilon),
        "budget": emit_rational(cert.budget),
        "trace": [
            {
                "dim": lv.dim,
                "phi": list(lv.phi),
                "w": emit_rational(lv.w),
                "w_minus": emit_rational(lv.w_minus),
                "w_plus": emit_rational(lv.w_plus),
                "t": emit_rational(lv.t),
                "gamma": emit_rational(lv.gamma),
                "epsilon": emit_rational(lv.epsilon),
                "fiber_witness": None
                if lv.fiber_witness is None
                else emit_rational(lv.fiber_witness),
                "lifts": [
                    {
                        "psi": list(rec.psi),
                        "phi_lifted": list(rec.phi_lifted),
                        "width": emit_rational(rec.width),
                    }
                    for rec in lv.lifts
                ],
            }
            for lv in cert.trace
        ],
    }


def emit_certificate(pair: ToricPair, cert: ComplementCertificate) -> str:
    return _dumps(certificate_document(pair, cert))


def parse_certificate(text: str) -> tuple[ToricPair, ComplementCertificate]:
    doc = _loads(text)
    for key in ("pair", "basis", "witness", "n", "divisor_coeffs", "mode", "epsilon", "budget"):
        if key not in doc:
            raise DocumentError(f"missing certificate field {key!r}")
    pair = pair_from_document(doc["pair"])
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise DocumentError("n must be a positive integer")
    trace = []
    for lv in doc.get("trace", []):
        trace.append(
            RecursionLevel(
                dim=lv["dim"],
                phi=tuple(lv["phi"]),
                w=parse_rational(lv["w"]),
                w_minus=parse_rational(lv["w_minus"]),
                w_plus=parse_rational(lv["w_plus"]),
                t=parse_rational(lv["t"]),
                gamma=parse_rational(lv["gamma"]),
                epsilon=parse_rational(lv["epsilon"]),
                fiber_witness=None
                if lv.get("fiber_witness") is None
                else parse_rational(lv["fiber_witness"]),
                lifts=tuple(
                    LiftRecord(
                        psi=tuple(rec["psi"]),
                        phi_lifted=tuple(rec["phi_lifted"]),
                        width=parse_rational(rec["width"]),
                    )
                    for rec in lv.get("lifts", [])
                ),
            )
        )
    cert = ComplementCertificate(
        basis=tuple(tuple(int(c) for c in phi) for phi in doc["basis"]),
        witness=parse_rational(doc["witness"]),
        n=n,
        divisor_coeffs=tuple(parse_rational(m) for m in doc["divisor_coeffs"]),
        trace=tuple(trace),
        mode=doc["mode"],
        epsilon=parse_rational(doc["epsilon"]),
        budget=parse_rational(doc["budget"]),
    )
    return pair, cert


class GenerationError(RuntimeError):
    """Random pair generation exhausted its retry budget."""


_MAX_RAY_ENTRY = 2
_MAX_TRIES = 2000


def random_pair(
    dim: int, ray_count: int, coeff_denominator_bound: int, seed
) -> ToricPair:
    """Deterministic random valid pair: primitive rays with 0 interior to the body."""
    if dim not in (1, 2, 3, 4):
        raise ValueError("random pairs support dimensions 1 through 4")
    if coeff_denominator_bound < 1:
        raise ValueError("coefficient denominator bound must be positive")
    rng = random.Random(f"{dim}|{ray_count}|{coeff_denominator_bound}|{seed}")

    def draw_coeff() -> Fraction:
        den = rng.randint(1, coeff_denominator_bound)
        return Fraction(rng.randint(1, den), den)

    if dim == 1:
        pair = make_pair(1, [(1,), (-1,)], [draw_coeff(), draw_coeff()])
        assert not validate(pair)
        return pair

    if ray_count < dim + 1:
        raise ValueError("need at least dim+1 rays for an interior origin")
    for _ in range(_MAX_TRIES):
        rays: set = set()
        attempts = 0
        while len(rays) < ray_count and attempts < 50 * ray_count:
            attempts += 1
            v = tuple(rng.randint(-_MAX_RAY_ENTRY, _MAX_RAY_ENTRY) for _ in range(dim))
            if all(c == 0 for c in v):
                continue
            rays.add(make_primitive(v))
        if len(rays) < ray_count:
            continue
        hull = vpolytope(sorted(rays))
        equalities, inequalities = facet_structure(hull)
        if equalities or any(offset >= 0 for _, offset in inequalities):
            continue
        coeffs = [draw_coeff() for _ in range(ray_count)]
        pair = make_pair(dim, sorted(rays), coeffs)
        if not validate(pair):
            return pair
    raise GenerationError(
        f"could not generate a valid pair (dim={dim}, rays={ray_count}) "
        f"within {_MAX_TRIES} tries"
    )


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
