import random
from fractions import Fraction as F

import pytest

from toricomp.convex import vpolytope, width_interval
from toricomp.jsonio import random_pair
from toricomp.lattice import det, dot, make_primitive, mat_vec
from toricomp.pairs import body, mld
from toricomp.width import (
    WidthRadiusExceeded,
    check_endpoint_lower_bounds,
    functionals_within_width,
    min_basis_width_exact,
    min_width_functional,
)

from .oracles import random_unimodular, transform_body

P2_BODY = vpolytope([(1, 0), (0, 1), (-1, -1)])
P12_BODY = vpolytope([(1, 0), (0, 1), (-1, -2)])


class TestMinWidthFunctional:
    def test_projective_plane(self):
        r = min_width_functional(P2_BODY, 6)
        assert r.w == 2
        assert (r.interval.lo, r.interval.hi) == (-1, 1)
        assert r.phi == (0, 1)  # lex-least of the tied minimizers

    def test_one_dimensional(self):
        seg = vpolytope([(F(-3, 2),), (F(5, 2),)])
        r = min_width_functional(seg, 10)
        assert r.phi == (1,) and r.w == 4
        assert r.w_minus == F(3, 2) and r.w_plus == F(5, 2)

    def test_skew_body(self):
        r = min_width_functional(P12_BODY, 6)
        assert r.w == 2
        # both (1,-1) and (1,0) attain width 2; the lex-least wins
        assert r.phi == (1, -1)
        assert (r.interval.lo, r.interval.hi) == (-1, 1)

    def test_radius_exceeded(self):
        with pytest.raises(WidthRadiusExceeded):
            min_width_functional(P2_BODY, F(1, 2))

    def test_optimality_against_candidates(self):
        cands = functionals_within_width(P2_BODY, 6)
        best = min_width_functional(P2_BODY, 6)
        assert all(w >= best.w for w, _ in cands)
        assert {phi for w, phi in cands if w == 2} == {(0, 1), (1, 0), (1, -1)}

    def test_enumeration_completeness(self):
        # transforms of a known width-2 functional must appear in the set
        rng = random.Random(29)
        for _ in range(15):
            A = random_unimodular(rng, 2)
            U = transform_body(P2_BODY, A)
            cands = functionals_within_width(U, 6)
            phis = {phi for _, phi in cands}
            # (0,1) has width 2 on the original; its pushforward keeps it
            inv_t = _inverse_transpose(A)
            pushed = make_primitive(mat_vec(inv_t, (0, 1)))
            if pushed[next(i for i, c in enumerate(pushed) if c != 0)] < 0:
                pushed = tuple(-c for c in pushed)
            assert pushed in phis


class TestEndpointBounds:
    def test_valid_body(self):
        r = min_width_functional(P2_BODY, 6)
        assert check_endpoint_lower_bounds(r) == []

    def test_constructed_counterexample(self):
        thin = vpolytope([(1, 0), (-1, 0), (0, F(1, 2)), (0, F(-1, 2))])
        r = min_width_functional(thin, 6)
        assert r.w == 1
        assert len(check_endpoint_lower_bounds(r)) == 2

    def test_random_pair_bodies(self):
        # every primitive functional on a valid pair body reaches both +-1
        for i in range(20):
            d = 1 + i % 3
            pair = random_pair(d, 2 if d == 1 else d + 2, 4, f"lw:{i}")
            U = body(pair).U
            for w, phi in functionals_within_width(U, 8):
                iv = width_interval(U, phi)
                assert iv.lo <= -1 and iv.hi >= 1, (pair, phi)

    def test_flatness_radius_never_fails(self):
        for i in range(25):
            d = 1 + i % 3
            pair = random_pair(d, 2 if d == 1 else d + 2, 4, f"flat:{i}")
            eps = mld(pair)
            radius = F(d * (d + 1)) / eps
            result = min_width_functional(body(pair).U, radius)
            assert result.w <= radius


class TestExactBasisWidth:
    def test_projective_plane(self):
        lam, basis = min_basis_width_exact(P2_BODY, 18)
        assert lam == 2
        assert abs(det(basis)) == 1
        for phi in basis:
            assert width_interval(P2_BODY, phi).length <= lam

    def test_one_dimensional(self):
        seg = vpolytope([(F(-3, 2),), (F(5, 2),)])
        lam, basis = min_basis_width_exact(seg, 10)
        assert lam == 4 and basis == ((1,),)

    def test_cap_too_small(self):
        with pytest.raises(WidthRadiusExceeded):
            min_basis_width_exact(P2_BODY, 1)

    def test_oracle_below_constructed_witness(self):
        from toricomp.complements import construct_certificate

        for i in range(10):
            pair = random_pair(2, 4, 4, f"sandwich:{i}")
            cert = construct_certificate(pair)
            lam, basis = min_basis_width_exact(body(pair).U, cert.witness)
            assert lam <= cert.witness
            assert abs(det(basis)) == 1


def _inverse_transpose(A):
    from toricomp.lattice import mat_inverse_unimodular, transpose

    return transpose(mat_inverse_unimodular(A))
