import json
from fractions import Fraction as F

import pytest

from toricomp.complements import construct_certificate, verify_certificate
from toricomp.jsonio import (
    DocumentError,
    emit_certificate,
    emit_pair,
    parse_certificate,
    parse_pair,
    parse_rational,
    random_pair,
)
from toricomp.pairs import make_pair, validate

P2_TEXT = '{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"coeffs":["1","1","1"]}'


class TestRationalStrings:
    def test_parse(self):
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational("-7") == -7
        assert parse_rational(5) == 5

    def test_reject_decimals_and_junk(self):
        for bad in ("0.5", "1/0", "1/-2", "a/b", "", "1.0", None):
            with pytest.raises(DocumentError):
                parse_rational(bad)


class TestPairDocuments:
    def test_parse_projective_plane(self):
        pair = parse_pair(P2_TEXT)
        assert pair.dim == 2 and len(pair.rays) == 3
        assert validate(pair) == []

    def test_fractional_coefficients(self):
        pair = parse_pair('{"dim":1,"rays":[[1],[-1]],"coeffs":["1/2","1/2"]}')
        assert pair.coeffs == (F(1, 2), F(1, 2))

    def test_zero_coefficient_rejected(self):
        with pytest.raises(DocumentError, match=r"\(0, 1\]"):
            parse_pair('{"dim":1,"rays":[[1],[-1]],"coeffs":["0","1"]}')

    def test_float_rejected(self):
        with pytest.raises(DocumentError, match="float"):
            parse_pair('{"dim":1,"rays":[[1],[-1]],"coeffs":[0.5,"1"]}')

    def test_non_primitive_rejected(self):
        with pytest.raises(DocumentError, match="primitive"):
            parse_pair('{"dim":2,"rays":[[2,0],[0,1],[-1,-1]],"coeffs":["1","1","1"]}')

    def test_round_trip_canonical(self):
        pair = parse_pair(P2_TEXT)
        text = emit_pair(pair)
        again = parse_pair(text)
        assert again == pair
        assert emit_pair(again) == text

    def test_reduced_output(self):
        pair = make_pair(1, [(1,), (-1,)], [F(2, 4), F(6, 6)])
        doc = json.loads(emit_pair(pair))
        assert doc["coeffs"] == ["1/2", "1"]


class TestCertificateDocuments:
    def test_round_trip(self):
        pair = parse_pair(P2_TEXT)
        cert = construct_certificate(pair)
        text = emit_certificate(pair, cert)
        pair2, cert2 = parse_certificate(text)
        assert pair2 == pair
        assert cert2 == cert
        assert emit_certificate(pair2, cert2) == text

    def test_verifies_after_load(self):
        pair = parse_pair(P2_TEXT)
        cert = construct_certificate(pair)
        _, loaded = parse_certificate(emit_certificate(pair, cert))
        assert verify_certificate(pair, loaded).ok

    def test_missing_field(self):
        with pytest.raises(DocumentError, match="missing certificate field"):
            parse_certificate('{"pair": ' + P2_TEXT + "}")


class TestRandomPair:
    def test_deterministic(self):
        a = random_pair(2, 4, 4, 1)
        b = random_pair(2, 4, 4, 1)
        assert a == b
        c = random_pair(2, 4, 4, 2)
        assert c != a

    def test_line_pairs(self):
        pair = random_pair(1, 2, 4, 99)
        assert pair.rays == ((1,), (-1,))
        assert validate(pair) == []

    def test_always_valid(self):
        for i in range(25):
            d = 1 + i % 4
            pair = random_pair(d, 2 if d == 1 else d + 2, 3, f"rv:{i}")
            assert validate(pair) == []

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            random_pair(5, 7, 3, 0)
