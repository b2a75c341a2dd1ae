"""Lattice width search over a convex body.

The searches enumerate primitive integer functionals whose width on the body
stays below a radius.  Coordinates of such functionals are bounded exactly:
the body contains a segment of length L_k through the origin along each
coordinate axis (endpoints reciprocal to the axis gauges), so a functional of
width <= W satisfies |phi_k| <= W / L_k.  Enumeration over that box is done
with integer arithmetic, vectorized when the magnitudes fit in int64 and with
plain Python integers otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convex import GeometryError, Interval, VPolytope, box_grid, gauge, width_interval
from .lattice import IntVec, dot, hermite_normal_form, is_primitive


class WidthRadiusExceeded(GeometryError):
    """No primitive functional has width within the requested radius."""


@dataclass(frozen=True)
class WidthResult:
    phi: IntVec
    interval: Interval
    w: Fraction
    w_minus: Fraction
    w_plus: Fraction


def _scaled_vertex_matrix(U: VPolytope) -> tuple[list[IntVec], int]:
    denom = 1
    for v in U.vertices:
        for x in v:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    return [tuple(int(x * denom) for x in v) for v in U.vertices], denom


def _axis_segment_lengths(U: VPolytope) -> list[Fraction]:
    d = U.dim
    lengths = []
    for k in range(d):
        pos = tuple(int(k == j) for j in range(d))
        neg = tuple(-int(k == j) for j in range(d))
        lengths.append(1 / gauge(U, pos) + 1 / gauge(U, neg))
    return lengths


def _normalize_sign(phi: IntVec) -> IntVec:
    lead = next(x for x in phi if x != 0)
    return phi if lead > 0 else tuple(-x for x in phi)


def functionals_within_width(U: VPolytope, radius) -> list[tuple[Fraction, IntVec]]:
    """All primitive functionals (sign-normalized) of width <= radius on U.

    Returns (width, phi) pairs sorted by width, then lexicographically by phi.
    Sign normalization keeps the representative whose first nonzero
    coordinate is positive; phi and -phi always have equal width.
    """
    radius = Fraction(radius)
    if radius < 0:
        return []
    d = U.dim
    verts, denom = _scaled_vertex_matrix(U)
    bounds = [int(radius / L) for L in _axis_segment_lengths(U)]
    box = [(-b, b) for b in bounds]
    grid = box_grid(box)

    max_vert = max((abs(c) for v in verts for c in v), default=0)
    max_phi = max(bounds, default=0)
    cutoff = radius * denom  # width*denom <= radius*denom, all integral scale
    int64_ok = (
        d * max_vert * max_phi < 2**61
        and cutoff.numerator < 2**61
        and cutoff.denominator * d * max_vert * max_phi < 2**61
    )
    vmat = np.asarray(verts, dtype=np.int64 if int64_ok else object).T
    dots = grid.astype(vmat.dtype) @ vmat
    spread = dots.max(axis=1) - dots.min(axis=1)
    keep = spread * cutoff.denominator <= cutoff.numerator
    candidates = grid[np.asarray(keep, dtype=bool)]
    spreads = spread[np.asarray(keep, dtype=bool)]

    out: dict[IntVec, Fraction] = {}
    for row, s in zip(candidates, spreads):
        phi = tuple(int(c) for c in row)
        if not is_primitive(phi):
            continue
        out[_normalize_sign(phi)] = Fraction(int(s), denom)
    return sorted(((w, phi) for phi, w in out.items()), key=lambda t: (t[0], t[1]))


def min_width_functional(U: VPolytope, radius) -> WidthResult:
    """A primitive functional of minimal width on U, searched within radius.

    Ties are broken by the lexicographically smallest sign-normalized
    coordinate vector.  The search radius is first shrunk to the best
    coordinate-functional width, which bounds the minimum from above.
    """
    radius = Fraction(radius)
    d = U.dim
    coord_widths = [
        width_interval(U, tuple(int(k == j) for j in range(d))).length for k in range(d)
    ]
    effective = min(radius, min(coord_widths))
    candidates = functionals_within_width(U, effective)
    if not candidates:
        raise WidthRadiusExceeded(f"no primitive functional of width <= {radius}")
    best_w, best_phi = candidates[0]
    assert all(w >= best_w for w, _ in candidates)
    interval = width_interval(U, best_phi)
    assert interval.length == best_w
    return WidthResult(
        phi=best_phi,
        interval=interval,
        w=best_w,
        w_minus=-interval.lo,
        w_plus=interval.hi,
    )


def check_endpoint_lower_bounds(result: WidthResult) -> list[str]:
    """Both endpoints of phi(U) must reach absolute value 1 on a valid pair body.

    A violation signals that the body is not the body of an effective pair.
    """
    violations = []
    if result.w_minus < 1:
        violations.append(f"lower endpoint {-result.w_minus} of phi(U) does not reach -1")
    if result.w_plus < 1:
        violations.append(f"upper endpoint {result.w_plus} of phi(U) does not reach 1")
    return violations


def min_basis_width_exact(U: VPolytope, cap) -> tuple[Fraction, tuple[IntVec, ...]]:
    """Smallest t such that the functionals of width <= t contain a lattice basis.

    Exhaustive: widths are scanned in increasing order and each new functional
    is tested against all (d-1)-subsets of the earlier ones for a unimodular
    completion.  Intended for small dimensions; cap must be at least the
    optimum (any constructed witness qualifies).
    """
    cap = Fraction(cap)
    d = U.dim
    candidates = functionals_within_width(U, cap)
    if d == 1:
        if not candidates:
            raise WidthRadiusExceeded(f"no basis within width cap {cap}")
        w, phi = candidates[0]
        return w, (phi,)
    import itertools

    seen: list[IntVec] = []
    for w, phi in candidates:
        seen.append(phi)
        if len(seen) < d:
            continue
        for subset in itertools.combinations(seen[:-1], d - 1):
            mat = subset + (phi,)
            h, _ = hermite_normal_form(mat)
            if all(h[i][i] == 1 for i in range(d)):
                return w, mat
    raise WidthRadiusExceeded(f"no basis within width cap {cap}")
