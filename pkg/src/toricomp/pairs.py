"""Toric pair data model: rays, boundary coefficients, and the derived body.

A pair is stored purely as (rays, coefficients).  All invariants of the pair
are convex-geometric statements about the body conv(e_i / a_i): log
discrepancies are gauge values, the minimal log discrepancy is the smallest
gauge of a nonzero lattice point, and the moment polytope is the polar.
The toric-variety reading of these numbers additionally assumes the
anticanonical divisor class of the pair is R-free; the library computes the
convex-body semantics unconditionally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .convex import (
    HPolytope,
    VPolytope,
    dual_vertices,
    facet_structure,
    gauge,
    lattice_points,
    volume,
    vpolytope,
)
from .lattice import IntVec, dot, is_primitive


class InvalidPairError(ValueError):
    """Raised when an operation requires a valid pair and validation fails."""


@dataclass(frozen=True)
class ToricPair:
    dim: int
    rays: tuple[IntVec, ...]
    coeffs: tuple[Fraction, ...]
    name: str | None = None


@dataclass(frozen=True)
class PairBody:
    dim: int
    U: VPolytope


def make_pair(dim: int, rays, coeffs, name: str | None = None) -> ToricPair:
    return ToricPair(
        dim=dim,
        rays=tuple(tuple(int(c) for c in r) for r in rays),
        coeffs=tuple(Fraction(a) for a in coeffs),
        name=name,
    )


def validate(pair: ToricPair) -> list[str]:
    """Check the standing hypotheses; returns a list of violations (empty = ok)."""
    violations: list[str] = []
    if pair.dim < 1:
        violations.append("dimension must be at least 1")
        return violations
    if len(pair.rays) != len(pair.coeffs):
        violations.append("rays and coefficients must have equal length")
        return violations
    if not pair.rays:
        violations.append("pair needs at least one ray")
        return violations
    for i, ray in enumerate(pair.rays):
        if len(ray) != pair.dim:
            violations.append(f"ray {i} has wrong dimension")
            return violations
        if not is_primitive(ray):
            violations.append(f"ray {i} = {list(ray)} not primitive")
    if len(set(pair.rays)) != len(pair.rays):
        violations.append("duplicate rays")
    for i, a in enumerate(pair.coeffs):
        if not (0 < a <= 1):
            violations.append(f"coefficient {i} = {a} must be in (0, 1]")
    if violations:
        return violations
    equalities, inequalities = facet_structure(_body_polytope(pair))
    if equalities or any(offset >= 0 for _, offset in inequalities):
        violations.append("origin not interior to the pair body")
    return violations


def _require_valid(pair: ToricPair) -> None:
    violations = validate(pair)
    if violations:
        raise InvalidPairError("; ".join(violations))


def _body_polytope(pair: ToricPair) -> VPolytope:
    return vpolytope(
        tuple(Fraction(c) / a for c in ray)
        for ray, a in zip(pair.rays, pair.coeffs)
    )


def body(pair: ToricPair) -> PairBody:
    """The pair body conv(e_i / a_i)."""
    _require_valid(pair)
    return PairBody(dim=pair.dim, U=_body_polytope(pair))


def log_discrepancy(pair: ToricPair, e) -> Fraction:
    """Log discrepancy of the divisorial valuation at a nonzero lattice vector."""
    _require_valid(pair)
    ev = tuple(int(c) for c in e)
    if all(c == 0 for c in ev):
        raise InvalidPairError("log discrepancy is undefined at the zero vector")
    return gauge(_body_polytope(pair), ev)


def mld(pair: ToricPair) -> Fraction:
    """Minimal log discrepancy: the least gauge over nonzero lattice points.

    Searching N ∩ U suffices: every ray lies in U (its gauge is at most its
    coefficient), so the minimum is at most 1 and points outside U cannot
    attain it.
    """
    _require_valid(pair)
    U = _body_polytope(pair)
    best: Fraction | None = None
    for pt in lattice_points(U):
        if all(c == 0 for c in pt):
            continue
        g = gauge(U, pt)
        if best is None or g < best:
            best = g
    assert best is not None and 0 < best <= 1
    return best


def moment_polytope(pair: ToricPair) -> HPolytope:
    """{m : <m, e_i> >= -a_i}: polytope of the anticanonical class of the pair."""
    _require_valid(pair)
    return HPolytope(
        dim=pair.dim,
        inequalities=tuple(
            (tuple(Fraction(c) for c in ray), -a)
            for ray, a in zip(pair.rays, pair.coeffs)
        ),
    )


def anticanonical_volume(pair: ToricPair) -> Fraction:
    """Degree normalization dim! * vol of the moment polytope."""
    _require_valid(pair)
    return factorial(pair.dim) * volume(dual_vertices(moment_polytope(pair)))
