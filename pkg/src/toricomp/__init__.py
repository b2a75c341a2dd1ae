"""Exact klt complements of bounded index on toric weak log Fano pairs."""

from .complements import (
    BasisConstruction,
    ComplementCertificate,
    LambdaBudget,
    VerificationReport,
    assemble_certificate,
    budget_sum_bound,
    check_budget_closed_forms,
    construct_basis,
    construct_certificate,
    index_budget,
    verify_certificate,
)
from .convex import (
    HPolytope,
    Interval,
    VPolytope,
    difference_body,
    dual_vertices,
    gauge,
    gauge_lp,
    lattice_points,
    polar_dual,
    slice_body,
    volume,
    vpolytope,
    width_interval,
)
from .jsonio import emit_certificate, emit_pair, parse_certificate, parse_pair, random_pair
from .lattice import (
    complete_to_basis,
    hermite_normal_form,
    is_primitive,
    kernel_lattice_basis,
)
from .lifting import LiftProblem, best_shift, lift_functional
from .pairs import (
    PairBody,
    ToricPair,
    anticanonical_volume,
    body,
    log_discrepancy,
    make_pair,
    mld,
    moment_polytope,
    validate,
)
from .width import (
    WidthResult,
    check_endpoint_lower_bounds,
    min_basis_width_exact,
    min_width_functional,
)

__version__ = "0.1.0"
