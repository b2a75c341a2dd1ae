"""Recursive construction of bounded dual bases and complement certificates.

The construction picks a primitive functional of minimal width on the body,
slices through the origin, recurses on the (rescaled) slice body one
dimension down, and lifts the basis of the slice lattice back up with
controlled widths.  The per-level strict inequality

    witness(level) < w(level) + witness(fiber level)

and the budget bound witness <= index_budget(d, eps) are asserted exactly at
every level of every run in strict mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .convex import VPolytope, lattice_points, scale, slice_body, width_interval
from .lattice import IntVec, det, dot
from .lifting import LiftProblem, lift_functional
from .pairs import ToricPair, _require_valid, anticanonical_volume, body, mld, validate
from .width import (
    WidthRadiusExceeded,
    WidthResult,
    check_endpoint_lower_bounds,
    functionals_within_width,
)

MODE_STRICT = "strict"
MODE_SHARP = "sharp"


class ConstructionError(RuntimeError):
    """Internal invariant violated during construction; carries the trace so far."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class LambdaBudget:
    dim: int
    epsilon: Fraction
    value: Fraction


def index_budget(dim: int, epsilon) -> Fraction:
    """The recursive complement-index budget.

    budget(1, e) = 2/e and budget(n, e) = n(n+1)/e + budget(n-1, e^2/(n(n+1))).
    """
    epsilon = Fraction(epsilon)
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if not (0 < epsilon <= 1):
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if dim == 1:
        return 2 / epsilon
    step = Fraction(dim * (dim + 1))
    return step / epsilon + index_budget(dim - 1, epsilon * epsilon / step)


def lambda_budget(dim: int, epsilon) -> LambdaBudget:
    e = Fraction(epsilon)
    return LambdaBudget(dim=dim, epsilon=e, value=index_budget(dim, e))


def budget_sum_bound(dim: int, epsilon) -> Fraction:
    """Closed upper bound sum_{i<dim} (dim(dim+1)/epsilon)^(2^i)."""
    epsilon = Fraction(epsilon)
    base = Fraction(dim * (dim + 1)) / epsilon
    return sum((base ** (2**i) for i in range(dim)), Fraction(0))


def check_budget_closed_forms(dim: int, epsilon) -> list[str]:
    """Compare the recursion against the dimension-2 and -3 closed forms."""
    epsilon = Fraction(epsilon)
    if dim == 2:
        expected = 6 / epsilon + 12 / epsilon**2
    elif dim == 3:
        expected = 12 / epsilon + 72 / epsilon**2 + 1728 / epsilon**4
    else:
        raise ValueError("closed forms are available for dimensions 2 and 3 only")
    actual = index_budget(dim, epsilon)
    if actual != expected:
        return [f"recursion gives {actual}, closed form gives {expected}"]
    return []


@dataclass(frozen=True)
class LiftRecord:
    psi: IntVec
    phi_lifted: IntVec
    width: Fraction


@dataclass(frozen=True)
class RecursionLevel:
    dim: int
    phi: IntVec
    w: Fraction
    w_minus: Fraction
    w_plus: Fraction
    t: Fraction
    gamma: Fraction
    epsilon: Fraction
    fiber_witness: Fraction | None
    lifts: tuple[LiftRecord, ...]


@dataclass(frozen=True)
class BasisConstruction:
    basis: tuple[IntVec, ...]
    witness: Fraction
    trace: tuple[RecursionLevel, ...]
    mode: str


def construct_basis(U: VPolytope, epsilon, mode: str = MODE_STRICT) -> BasisConstruction:
    """Unimodular dual basis with all widths on U bounded by the budget.

    Strict mode follows the guaranteed recursion: rescale the origin slice by
    the chosen width w and recurse at epsilon/w, so every intermediate body is
    again a valid pair body and the endpoint bounds are asserted throughout.
    Sharp mode recurses on the unscaled slice at the same epsilon; the
    endpoint assertion is skipped on fiber levels.

    When several functionals tie for the minimal width, every tied choice is
    explored at every level and the path with the smallest final witness is
    returned (first such path in lexicographic choice order).  The resulting
    witness value is therefore invariant under unimodular coordinate changes
    of the body, which a fixed coordinate-dependent tie-break would not be.
    """
    epsilon = Fraction(epsilon)
    if mode not in (MODE_STRICT, MODE_SHARP):
        raise ValueError(f"unknown mode {mode!r}")
    if not (0 < epsilon <= 1):
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    paths = _construct_paths(U, epsilon, mode, check_endpoints=True)
    basis, witness, levels = min(paths, key=lambda p: p[1])
    d = U.dim
    if abs(det(basis)) != 1:
        raise ConstructionError(f"constructed basis is not unimodular: {basis}", levels)
    if mode == MODE_STRICT and witness > index_budget(d, epsilon):
        raise ConstructionError(
            f"witness {witness} exceeds budget {index_budget(d, epsilon)}", levels
        )
    return BasisConstruction(
        basis=tuple(basis), witness=witness, trace=tuple(levels), mode=mode
    )


def _construct_paths(
    U: VPolytope, epsilon: Fraction, mode: str, check_endpoints: bool
) -> list[tuple[list[IntVec], Fraction, list[RecursionLevel]]]:
    """Every construction path (one per chain of tied width minimizers)."""
    d = U.dim
    if d == 1:
        interval = width_interval(U, (1,))
        result = WidthResult(
            phi=(1,),
            interval=interval,
            w=interval.length,
            w_minus=-interval.lo,
            w_plus=interval.hi,
        )
        _assert_endpoints(result, check_endpoints, [])
        level = RecursionLevel(
            dim=1,
            phi=(1,),
            w=result.w,
            w_minus=result.w_minus,
            w_plus=result.w_plus,
            t=1 / result.w,
            gamma=min(result.w_minus, result.w_plus) / result.w,
            epsilon=epsilon,
            fiber_witness=None,
            lifts=(),
        )
        _assert_budget(result.w, 1, epsilon, [level])
        return [([(1,)], result.w, [level])]

    radius = Fraction(d * (d + 1)) / epsilon
    ties = _minimal_width_ties(U, radius)
    paths: list[tuple[list[IntVec], Fraction, list[RecursionLevel]]] = []
    for choice in ties:
        w = choice.w
        _assert_endpoints(choice, check_endpoints, [])
        gamma = min(choice.w_minus, choice.w_plus) / w
        if check_endpoints and not gamma >= 1 / w:
            raise ConstructionError(f"barycentric coordinate {gamma} below 1/{w}")
        t = 1 / w

        U0 = slice_body(U, choice.phi, 0)
        if mode == MODE_STRICT:
            fiber_body = scale(U0, w)
            fiber_epsilon = epsilon / w
        else:
            fiber_body = U0
            fiber_epsilon = epsilon
        fiber_paths = _construct_paths(
            fiber_body, fiber_epsilon, mode, check_endpoints and mode == MODE_STRICT
        )
        for fiber_basis, fiber_witness, fiber_levels in fiber_paths:
            basis: list[IntVec] = [choice.phi]
            lifts: list[LiftRecord] = []
            widths = [w]
            for psi in fiber_basis:
                prob = LiftProblem.build(choice.phi, U, 0, psi)
                lifted = lift_functional(prob)
                lw = width_interval(U, lifted).length
                basis.append(lifted)
                widths.append(lw)
                lifts.append(LiftRecord(psi=psi, phi_lifted=lifted, width=lw))
            witness = max(widths)

            level = RecursionLevel(
                dim=d,
                phi=choice.phi,
                w=w,
                w_minus=choice.w_minus,
                w_plus=choice.w_plus,
                t=t,
                gamma=gamma,
                epsilon=epsilon,
                fiber_witness=fiber_witness,
                lifts=tuple(lifts),
            )
            levels = [level] + fiber_levels
            if mode == MODE_STRICT:
                if not witness < w + fiber_witness:
                    raise ConstructionError(
                        f"recursion inequality failed: witness {witness} "
                        f"vs {w} + {fiber_witness}",
                        levels,
                    )
                _assert_budget(witness, d, epsilon, levels)
            paths.append((basis, witness, levels))
    return paths


def _minimal_width_ties(U: VPolytope, radius: Fraction) -> list[WidthResult]:
    d = U.dim
    coord_widths = [
        width_interval(U, tuple(int(k == j) for j in range(d))).length for k in range(d)
    ]
    effective = min(radius, min(coord_widths))
    candidates = functionals_within_width(U, effective)
    if not candidates:
        raise WidthRadiusExceeded(f"no primitive functional of width <= {radius}")
    w_min = candidates[0][0]
    results = []
    for w, phi in candidates:
        if w != w_min:
            break
        interval = width_interval(U, phi)
        results.append(
            WidthResult(
                phi=phi, interval=interval, w=w, w_minus=-interval.lo, w_plus=interval.hi
            )
        )
    return results


def _assert_endpoints(result: WidthResult, check: bool, trace) -> None:
    if not check:
        return
    violations = check_endpoint_lower_bounds(result)
    if violations:
        raise ConstructionError(
            "body fails the effective-pair endpoint bounds for "
            f"{result.phi}: {'; '.join(violations)}",
            trace,
        )


def _assert_budget(witness: Fraction, dim: int, epsilon: Fraction, trace) -> None:
    budget = index_budget(dim, epsilon)
    if witness > budget:
        raise ConstructionError(f"witness {witness} exceeds budget {budget}", trace)


@dataclass(frozen=True)
class ComplementCertificate:
    basis: tuple[IntVec, ...]
    witness: Fraction
    n: int
    divisor_coeffs: tuple[Fraction, ...]
    trace: tuple[RecursionLevel, ...]
    mode: str
    epsilon: Fraction
    budget: Fraction


class CertificateError(ValueError):
    """A certificate check failed during assembly."""


def assemble_certificate(
    pair: ToricPair,
    construction: BasisConstruction,
    epsilon,
    n: int | None = None,
) -> ComplementCertificate:
    """Package a constructed basis as an index-n complement certificate.

    n defaults to ceil(witness).  Each +-basis functional must land in the
    n-fold moment polytope; the divisor coefficient at ray e_j is
    n*a_j + min over the symmetric basis set of the pairings with e_j.
    """
    _require_valid(pair)
    epsilon = Fraction(epsilon)
    witness = construction.witness
    if n is None:
        n = math.ceil(witness)
    if n < 1:
        raise CertificateError("complement index must be a positive integer")
    coeffs = []
    for j, (ray, a) in enumerate(zip(pair.rays, pair.coeffs)):
        pairings = []
        for phi in construction.basis:
            value = dot(phi, ray)
            for signed in (value, -value):
                if signed < -n * a:
                    raise CertificateError(
                        f"basis functional {phi} leaves the {n}-fold moment polytope "
                        f"at ray index {j}"
                    )
                pairings.append(Fraction(signed))
        m_j = n * a + min(pairings)
        if m_j < 0:
            raise CertificateError(f"negative divisor coefficient {m_j} at ray index {j}")
        coeffs.append(m_j)
    return ComplementCertificate(
        basis=construction.basis,
        witness=witness,
        n=n,
        divisor_coeffs=tuple(coeffs),
        trace=construction.trace,
        mode=construction.mode,
        epsilon=epsilon,
        budget=index_budget(pair.dim, epsilon),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def verify_certificate(pair: ToricPair, cert: ComplementCertificate) -> VerificationReport:
    """Re-check a certificate from the pair and the certificate data alone.

    Checks: basis unimodularity; membership of every +-basis functional in
    the n-fold moment polytope; the discrepancy lower bound 1/n for the
    completed pair (symbolically via unimodularity, numerically on all
    lattice points of the doubled body); the divisor-coefficient identity;
    and the anticanonical volume against witness^(-dim).
    """
    checks: list[CheckResult] = []
    d = pair.dim
    violations = validate(pair)
    checks.append(CheckResult("pair-valid", not violations, "; ".join(violations)))
    if violations:
        return VerificationReport(tuple(checks))

    basis = cert.basis
    n = cert.n

    determinant = abs(det(basis)) if len(basis) == d else Fraction(0)
    checks.append(
        CheckResult(
            "basis-unimodular",
            determinant == 1,
            f"|det| = {determinant}",
        )
    )

    membership_ok = True
    membership_detail = ""
    for i, phi in enumerate(basis):
        for j, (ray, a) in enumerate(zip(pair.rays, pair.coeffs)):
            if abs(dot(phi, ray)) > n * a:
                membership_ok = False
                membership_detail = f"functional {i} vs ray {j}: |<phi, e>| > n*a"
                break
        if not membership_ok:
            break
    checks.append(CheckResult("membership-n-fold-polytope", membership_ok, membership_detail))

    klt_ok = determinant == 1
    klt_detail = "unimodular basis forces max_i |<phi_i, e>| >= 1 for e != 0"
    if klt_ok:
        doubled = scale(body(pair).U, 2)
        for e in lattice_points(doubled):
            if all(c == 0 for c in e):
                continue
            if max(abs(dot(phi, e)) for phi in basis) < 1:
                klt_ok = False
                klt_detail = f"discrepancy bound fails at lattice point {e}"
                break
    else:
        klt_detail = "skipped: basis not unimodular"
    checks.append(CheckResult("klt-discrepancy-bound", klt_ok, klt_detail))

    coeff_ok = len(cert.divisor_coeffs) == len(pair.rays)
    coeff_detail = "" if coeff_ok else "coefficient count mismatch"
    if coeff_ok:
        for j, (ray, a) in enumerate(zip(pair.rays, pair.coeffs)):
            pairings = [Fraction(s * dot(phi, ray)) for phi in basis for s in (1, -1)]
            expected = n * a + min(pairings)
            if cert.divisor_coeffs[j] != expected or expected < 0:
                coeff_ok = False
                coeff_detail = (
                    f"ray {j}: stored {cert.divisor_coeffs[j]}, recomputed {expected}"
                )
                break
    checks.append(CheckResult("divisor-coefficients", coeff_ok, coeff_detail))

    vol = anticanonical_volume(pair)
    vol_bound = Fraction(1) / cert.witness**d
    checks.append(
        CheckResult(
            "anticanonical-volume",
            vol >= vol_bound,
            f"volume {vol} vs witness^(-dim) = {vol_bound}",
        )
    )
    return VerificationReport(tuple(checks))


def construct_certificate(
    pair: ToricPair,
    epsilon=None,
    mode: str = MODE_STRICT,
    n: int | None = None,
) -> ComplementCertificate:
    """End-to-end: validate, choose epsilon (default: the exact mld), build, assemble."""
    _require_valid(pair)
    eps = Fraction(epsilon) if epsilon is not None else mld(pair)
    construction = construct_basis(body(pair).U, eps, mode=mode)
    return assemble_certificate(pair, construction, eps, n=n)
