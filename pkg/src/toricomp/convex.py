"""Exact operations on rational convex bodies.

Bodies are primarily held in V-representation (generator lists whose convex
hull is the body; redundant generators are allowed).  H-representations are
derived on demand by exhaustive subset enumeration, which is entirely
adequate at the instance sizes this library targets (a dozen generators in
dimension <= 4) and keeps every predicate exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice import (
    IntVec,
    RatVec,
    complete_to_basis,
    det,
    dot,
    make_primitive,
    mat_vec,
    rat_nullspace,
    rat_rank,
    rat_solve,
    vec_gcd,
)


class GeometryError(ValueError):
    """Raised for geometric precondition failures (empty slice, unbounded dual, ...)."""


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise GeometryError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains_interior(self, x) -> bool:
        return self.lo < x < self.hi


@dataclass(frozen=True)
class VPolytope:
    """Convex body as a finite generator list (hull implied)."""

    dim: int
    vertices: tuple[RatVec, ...]

    def __post_init__(self):
        if not self.vertices:
            raise GeometryError("V-polytope needs at least one generator")
        for v in self.vertices:
            if len(v) != self.dim:
                raise GeometryError("generator dimension mismatch")


@dataclass(frozen=True)
class HPolytope:
    """Intersection of half-spaces <normal, x> >= offset."""

    dim: int
    inequalities: tuple[tuple[RatVec, Fraction], ...]


def _ratvec(point) -> RatVec:
    return tuple(Fraction(x) for x in point)


def vpolytope(points) -> VPolytope:
    """Build a VPolytope from any iterable of rational points (dedup + sort)."""
    pts = sorted(set(_ratvec(p) for p in points))
    if not pts:
        raise GeometryError("V-polytope needs at least one generator")
    return VPolytope(dim=len(pts[0]), vertices=tuple(pts))


def scale(P: VPolytope, factor) -> VPolytope:
    f = Fraction(factor)
    return vpolytope(tuple(f * x for x in v) for v in P.vertices)


def width_interval(P: VPolytope, phi) -> Interval:
    """The exact interval phi(P) = [min, max] over the generators."""
    if len(phi) != P.dim:
        raise GeometryError("functional dimension mismatch")
    values = [Fraction(dot(phi, v)) for v in P.vertices]
    return Interval(min(values), max(values))


def _coordinate_directions(d: int) -> list[RatVec]:
    return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]


def _hyperplane_through(points) -> tuple[IntVec, Fraction] | None:
    """Primitive integer normal and offset of the affine span of d points, if a hyperplane."""
    base = points[0]
    diffs = [tuple(x - y for x, y in zip(p, base)) for p in points[1:]]
    null = rat_nullspace(diffs, len(base))
    if len(null) != 1:
        return None
    direction = null[0]
    denom_lcm = 1
    for x in direction:
        denom_lcm = denom_lcm * x.denominator // math.gcd(denom_lcm, x.denominator)
    normal = make_primitive(tuple(int(x * denom_lcm) for x in direction))
    return normal, Fraction(dot(normal, base))


@lru_cache(maxsize=4096)
def facet_structure(
    P: VPolytope,
) -> tuple[tuple[tuple[RatVec, Fraction], ...], tuple[tuple[RatVec, Fraction], ...]]:
    """(equalities, inequalities) describing conv(P) exactly.

    Equalities pin the affine hull; inequalities are the facets.  Membership
    means satisfying every equality with '=' and every inequality with '>='.
    """
    pts = P.vertices
    d = P.dim
    base = pts[0]
    diffs = [tuple(x - y for x, y in zip(p, base)) for p in pts[1:]]
    rank = rat_rank(diffs) if diffs else 0

    equalities: list[tuple[RatVec, Fraction]] = []
    if rank < d:
        null = rat_nullspace(diffs, d) if diffs else _coordinate_directions(d)
        for direction in null:
            equalities.append((direction, Fraction(dot(direction, base))))

    if rank == 0:
        return tuple(equalities), ()

    if rank < d:
        # work inside the affine hull: project to coordinates where the
        # difference matrix has pivots, recurse on the full-dim image
        cols = _independent_columns(diffs, rank)
        proj = vpolytope(tuple(p[c] for c in cols) for p in pts)
        _, sub_ineqs = facet_structure(proj)
        lifted = []
        for normal, offset in sub_ineqs:
            full = [Fraction(0)] * d
            for c, nc in zip(cols, normal):
                full[c] = nc
            lifted.append((tuple(full), offset))
        return tuple(equalities), tuple(lifted)

    facets: dict[tuple[IntVec, Fraction], None] = {}
    for subset in itertools.combinations(pts, d):
        hp = _hyperplane_through(list(subset))
        if hp is None:
            continue
        normal, offset = hp
        values = [dot(normal, p) for p in pts]
        if all(v >= offset for v in values):
            facets.setdefault((normal, offset), None)
        elif all(v <= offset for v in values):
            facets.setdefault((tuple(-x for x in normal), -offset), None)
    ineqs = tuple(
        (tuple(Fraction(x) for x in normal), Fraction(offset))
        for normal, offset in sorted(facets)
    )
    return (), ineqs


def _independent_columns(rows, rank: int) -> list[int]:
    cols: list[int] = []
    for c in range(len(rows[0])):
        trial = cols + [c]
        sub = [[r[j] for j in trial] for r in rows]
        if rat_rank(sub) == len(trial):
            cols.append(c)
            if len(cols) == rank:
                break
    return cols


def contains(P: VPolytope, point) -> bool:
    """Exact membership of a point in conv(P)."""
    x = _ratvec(point)
    equalities, inequalities = facet_structure(P)
    for normal, offset in equalities:
        if dot(normal, x) != offset:
            return False
    for normal, offset in inequalities:
        if dot(normal, x) < offset:
            return False
    return True


def _interior_facets(P: VPolytope) -> tuple[tuple[RatVec, Fraction], ...]:
    equalities, inequalities = facet_structure(P)
    if equalities:
        raise GeometryError("body must contain origin in its interior (not full-dimensional)")
    for _, offset in inequalities:
        if offset >= 0:
            raise GeometryError("body must contain origin in its interior")
    return inequalities


def gauge(P: VPolytope, point) -> Fraction:
    """Minkowski gauge min{s >= 0 : x in s*P} for a 0-interior body.

    Computed from the facet representation: each facet <n, y> >= b with b < 0
    contributes the ratio <n, x>/b, and the gauge is the largest one.
    """
    x = _ratvec(point)
    inequalities = _interior_facets(P)
    best = Fraction(0)
    for normal, offset in inequalities:
        ratio = Fraction(dot(normal, x)) / offset
        if ratio > best:
            best = ratio
    return best


def gauge_lp(P: VPolytope, point) -> Fraction:
    """Gauge by exact linear programming over convex-cone coefficients.

    Minimizes sum(mu) subject to sum(mu_i * v_i) = x, mu >= 0, by enumerating
    basic solutions on linearly independent generator subsets.  Independent of
    the facet-based route in :func:`gauge`.
    """
    x = _ratvec(point)
    _interior_facets(P)  # same precondition as the facet route
    if all(c == 0 for c in x):
        return Fraction(0)
    d = P.dim
    best: Fraction | None = None
    for subset in itertools.combinations(P.vertices, d):
        cols = tuple(zip(*subset))
        mu = rat_solve(cols, x)
        if mu is None or any(m < 0 for m in mu):
            continue
        value = sum(mu, Fraction(0))
        if best is None or value < best:
            best = value
    if best is None:
        raise GeometryError("point not in the generator cone; body is not 0-interior")
    return best


def polar_dual(P: VPolytope) -> HPolytope:
    """Polar body {y : <y, v> >= -1 for all generators v} of a 0-interior P."""
    _interior_facets(P)
    return HPolytope(dim=P.dim, inequalities=tuple((v, Fraction(-1)) for v in P.vertices))


def _int_scaled_inequalities(H: HPolytope) -> list[tuple[IntVec, Fraction]]:
    out = []
    for normal, offset in H.inequalities:
        denom_lcm = 1
        for x in normal:
            denom_lcm = denom_lcm * x.denominator // math.gcd(denom_lcm, x.denominator)
        scaled = tuple(int(x * denom_lcm) for x in normal)
        if all(c == 0 for c in scaled):
            continue
        g = vec_gcd(scaled)
        out.append((tuple(c // g for c in scaled), Fraction(offset) * denom_lcm / g))
    return out


def _is_bounded(H: HPolytope) -> bool:
    """Exact boundedness: the recession cone {x : <n_k, x> >= 0} is {0}.

    A nontrivial recession cone either contains a line (the normals do not
    span) or has an extreme ray lying on d-1 linearly independent normals.
    """
    d = H.dim
    normals = [n for n, _ in _int_scaled_inequalities(H)]
    if rat_rank(normals) < d:
        return False
    for subset in itertools.combinations(normals, d - 1):
        null = rat_nullspace(list(subset), d) if subset else _coordinate_directions(d)
        if len(null) != 1:
            continue
        ray = null[0]
        for candidate in (ray, tuple(-x for x in ray)):
            if all(dot(n, candidate) >= 0 for n in normals):
                return False
    return True


def dual_vertices(H: HPolytope) -> VPolytope:
    """All vertices of a bounded H-polytope by exhaustive d-subset solving."""
    d = H.dim
    if not _is_bounded(H):
        raise GeometryError("H-polytope is unbounded")
    ineqs = H.inequalities
    found: set[RatVec] = set()
    for subset in itertools.combinations(ineqs, d):
        rows = [n for n, _ in subset]
        rhs = [b for _, b in subset]
        x = rat_solve(rows, rhs)
        if x is None:
            continue
        if all(dot(n, x) >= b for n, b in ineqs):
            found.add(x)
    if not found:
        raise GeometryError("H-polytope has no vertices (empty or degenerate)")
    return vpolytope(found)


def slice_body(P: VPolytope, phi, level) -> VPolytope:
    """Exact section P ∩ {phi = level}, in kernel-lattice coordinates.

    Section points come from generators lying on the hyperplane and from
    crossings of generator segments.  Each point x is decomposed against the
    canonical (preimage, kernel basis) splitting of phi and the kernel
    coordinates of x - level*preimage are returned; widths of functionals on
    the section are unaffected by that translation.
    """
    p = Fraction(level)
    if len(phi) != P.dim:
        raise GeometryError("functional dimension mismatch")
    interval = width_interval(P, phi)
    if p < interval.lo or p > interval.hi:
        raise GeometryError(f"slice level {p} outside {phi}(P) = [{interval.lo}, {interval.hi}]")
    values = {v: Fraction(dot(phi, v)) for v in P.vertices}
    section: set[RatVec] = {v for v, val in values.items() if val == p}
    for a, b in itertools.combinations(P.vertices, 2):
        va, vb = values[a], values[b]
        if (va < p < vb) or (vb < p < va):
            t = (p - va) / (vb - va)
            section.add(tuple(x + t * (y - x) for x, y in zip(a, b)))
    if not section:
        raise GeometryError("empty slice")
    v = complete_to_basis(tuple(phi))
    coords = [mat_vec(v, pt) for pt in sorted(section)]
    return vpolytope(tuple(c[1:]) for c in coords)


def difference_body(P: VPolytope) -> VPolytope:
    """P + (-P): the 0-symmetric hull of pairwise generator differences."""
    return vpolytope(
        tuple(x - y for x, y in zip(a, b))
        for a in P.vertices
        for b in P.vertices
    )


def bounding_box(P: VPolytope) -> list[tuple[int, int]]:
    """Exact integer bounding box [ceil(min), floor(max)] per coordinate."""
    box = []
    for k in range(P.dim):
        coords = [v[k] for v in P.vertices]
        box.append((math.ceil(min(coords)), math.floor(max(coords))))
    return box


_CELL_LIMIT = 40_000_000


def box_grid(box) -> np.ndarray:
    """All integer points of a coordinate box as an (n, d) int64 array."""
    total = 1
    for lo, hi in box:
        total *= hi - lo + 1
    if total > _CELL_LIMIT:
        raise GeometryError(f"enumeration box too large ({total} cells)")
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _scale_constraint(normal, offset) -> tuple[IntVec, Fraction]:
    denom_lcm = 1
    for x in normal:
        denom_lcm = denom_lcm * x.denominator // math.gcd(denom_lcm, x.denominator)
    return tuple(int(x * denom_lcm) for x in normal), Fraction(offset) * denom_lcm


def _int64_safe(box, normal, b: Fraction) -> bool:
    bound = sum(abs(n) * max(abs(lo), abs(hi)) for n, (lo, hi) in zip(normal, box))
    return bound * b.denominator < 2**62 and abs(b.numerator) < 2**62


def lattice_points(P: VPolytope) -> list[IntVec]:
    """All integer points of conv(P): exact box scan + facet membership."""
    box = bounding_box(P)
    if any(lo > hi for lo, hi in box):
        return []
    equalities, inequalities = facet_structure(P)
    constraints = [(c, True) for c in equalities] + [(c, False) for c in inequalities]

    grid = box_grid(box)
    if grid.size == 0:
        return []
    keep = np.ones(len(grid), dtype=bool)
    for (normal, offset), is_eq in constraints:
        n, b = _scale_constraint(normal, offset)
        if _int64_safe(box, n, b):
            vals = grid @ np.asarray(n, dtype=np.int64)
            lhs = vals * b.denominator
        else:
            vals = grid.astype(object) @ np.asarray(n, dtype=object)
            lhs = vals * b.denominator
        keep &= (lhs == b.numerator) if is_eq else (lhs >= b.numerator)
    return [tuple(int(c) for c in row) for row in grid[keep]]


def volume(P: VPolytope) -> Fraction:
    """Exact Euclidean volume by fan triangulation from one generator."""
    pts = list(dict.fromkeys(P.vertices))
    d = P.dim
    base = pts[0]
    diffs = [tuple(x - y for x, y in zip(p, base)) for p in pts[1:]]
    if not diffs or rat_rank(diffs) < d:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _triangulate(tuple(sorted(pts)), d):
        rows = [tuple(x - y for x, y in zip(p, simplex[0])) for p in simplex[1:]]
        total += abs(det(rows))
    return total / math.factorial(d)


def _triangulate(pts: tuple[RatVec, ...], rank: int) -> list[tuple[RatVec, ...]]:
    """Triangulation of a full-dimensional point configuration.

    Fans from pts[0] over the facets that do not contain it; facets are
    triangulated recursively after an injective coordinate projection.
    """
    if rank == 1:
        lo, hi = min(pts), max(pts)
        return [(lo, hi)] if lo != hi else []
    body = vpolytope(pts)
    _, inequalities = facet_structure(body)
    apex = pts[0]
    simplices: list[tuple[RatVec, ...]] = []
    for normal, offset in inequalities:
        if dot(normal, apex) == offset:
            continue
        facet_pts = [p for p in pts if dot(normal, p) == offset]
        drop = next(j for j in range(len(apex)) if normal[j] != 0)
        proj_map = {tuple(x for j, x in enumerate(p) if j != drop): p for p in facet_pts}
        proj_pts = tuple(sorted(proj_map))
        for sub in _triangulate(proj_pts, rank - 1):
            simplices.append((apex,) + tuple(proj_map[q] for q in sub))
    return simplices
