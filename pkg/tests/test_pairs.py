import itertools
import random
from fractions import Fraction as F

import pytest

from toricomp.convex import dual_vertices, gauge, gauge_lp, polar_dual
from toricomp.lattice import dot
from toricomp.pairs import (
    InvalidPairError,
    anticanonical_volume,
    body,
    log_discrepancy,
    make_pair,
    mld,
    moment_polytope,
    validate,
)

from .oracles import mld_bisection

P2 = make_pair(2, [(1, 0), (0, 1), (-1, -1)], [1, 1, 1])
P1_HALF = make_pair(1, [(1,), (-1,)], [F(1, 2), F(1, 2)])
P1 = make_pair(1, [(1,), (-1,)], [1, 1])
P12 = make_pair(2, [(1, 0), (0, 1), (-1, -2)], [1, 1, 1])


class TestValidate:
    def test_projective_plane(self):
        assert validate(P2) == []

    def test_non_primitive_ray(self):
        bad = make_pair(2, [(2, 0), (0, 1), (-1, -1)], [1, 1, 1])
        assert any("primitive" in v for v in validate(bad))

    def test_origin_not_interior(self):
        degenerate = make_pair(2, [(1, 0), (0, 1)], [1, 1])
        assert any("interior" in v for v in validate(degenerate))

    def test_coefficient_range(self):
        for a in (F(0), F(3, 2), F(-1, 2)):
            bad = make_pair(1, [(1,), (-1,)], [a, F(1, 2)])
            assert any("(0, 1]" in v for v in validate(bad))

    def test_duplicate_rays(self):
        dup = make_pair(2, [(1, 0), (1, 0), (0, 1), (-1, -1)], [1, 1, 1, 1])
        assert any("duplicate" in v for v in validate(dup))


class TestBody:
    def test_unit_coefficients(self):
        assert set(body(P2).U.vertices) == {(F(1), F(0)), (F(0), F(1)), (F(-1), F(-1))}

    def test_scaling(self):
        assert set(body(P1_HALF).U.vertices) == {(F(-2),), (F(2),)}

    def test_skew(self):
        assert set(body(P12).U.vertices) == {(F(1), F(0)), (F(0), F(1)), (F(-1), F(-2))}

    def test_invalid_pair_raises(self):
        with pytest.raises(InvalidPairError):
            body(make_pair(2, [(1, 0), (0, 1)], [1, 1]))


class TestMld:
    def test_projective_plane(self):
        assert mld(P2) == 1

    def test_weighted_line(self):
        assert mld(P1_HALF) == F(1, 2)

    def test_skew(self):
        assert mld(P12) == 1
        assert log_discrepancy(P12, (0, -1)) == 1

    def test_bisection_oracle_agreement(self):
        for pair in (P2, P1_HALF, P12, make_pair(2, [(1, 0), (0, 1), (-1, -1)], [F(1, 3), 1, F(2, 3)])):
            assert mld(pair) == mld_bisection(pair)

    def test_range(self):
        rng = random.Random(23)
        from toricomp.jsonio import random_pair

        for i in range(15):
            p = random_pair(2, 4, 4, f"mldrange:{i}")
            value = mld(p)
            assert 0 < value <= 1

    def test_monotone_in_coefficients(self):
        # raising a coefficient shrinks the body, so no gauge drops: the mld
        # can only rise (d=1 closed form: mld = min(a+, a-))
        base = make_pair(2, [(1, 0), (0, 1), (-1, -1)], [F(1, 2), F(2, 3), F(3, 4)])
        raised = make_pair(2, [(1, 0), (0, 1), (-1, -1)], [F(3, 4), F(2, 3), F(3, 4)])
        assert mld(raised) >= mld(base)
        assert mld(P1) >= mld(P1_HALF)


class TestLogDiscrepancy:
    def test_ray_value(self):
        assert log_discrepancy(P2, (1, 0)) == 1

    def test_gauge_scaling(self):
        assert log_discrepancy(P1_HALF, (2,)) == 1

    def test_interior_direction(self):
        assert log_discrepancy(P2, (1, 1)) == 2
        assert gauge_lp(body(P2).U, (1, 1)) == 2

    def test_zero_rejected(self):
        with pytest.raises(InvalidPairError):
            log_discrepancy(P2, (0, 0))

    def test_homogeneity(self):
        for e in [(1, 0), (1, 1), (-1, -2), (2, -1)]:
            base = log_discrepancy(P2, e)
            for k in (2, 3, 5):
                scaled = tuple(k * c for c in e)
                assert log_discrepancy(P2, scaled) == k * base

    def test_at_most_coefficient_on_rays(self):
        pair = make_pair(2, [(1, 0), (0, 1), (-1, -1)], [F(1, 2), F(2, 3), F(3, 4)])
        for ray, a in zip(pair.rays, pair.coeffs):
            assert log_discrepancy(pair, ray) <= a


class TestMomentPolytope:
    def test_projective_plane(self):
        verts = dual_vertices(moment_polytope(P2))
        assert set(verts.vertices) == {(F(2), F(-1)), (F(-1), F(2)), (F(-1), F(-1))}

    def test_interval(self):
        verts = dual_vertices(moment_polytope(P1))
        assert set(verts.vertices) == {(F(-1),), (F(1),)}

    def test_homogeneous_scaling(self):
        s = F(1, 3)
        base = dual_vertices(moment_polytope(P2))
        scaled_pair = make_pair(2, [(1, 0), (0, 1), (-1, -1)], [s, s, s])
        scaled = dual_vertices(moment_polytope(scaled_pair))
        assert set(scaled.vertices) == {tuple(s * x for x in v) for v in base.vertices}

    def test_polar_matches_body_gauge(self):
        # moment polytope and body are polar: gauges agree on sampled points
        U = body(P2).U
        box = dual_vertices(moment_polytope(P2))
        dual_back = dual_vertices(polar_dual(box))
        for pt in itertools.product(range(-2, 3), repeat=2):
            assert gauge(U, pt) == gauge(dual_back, pt)


class TestAnticanonicalVolume:
    def test_projective_plane(self):
        assert anticanonical_volume(P2) == 9

    def test_line(self):
        assert anticanonical_volume(P1) == 2

    def test_weighted_line(self):
        assert anticanonical_volume(P1_HALF) == 1
