import json
import os

import pytest

from toricomp.cli import main

P2_DOC = '{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "coeffs": ["1","1","1"]}\n'


@pytest.fixture()
def p2_file(tmp_path):
    path = tmp_path / "p2.json"
    path.write_text(P2_DOC)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBasicCommands:
    def test_validate(self, capsys, p2_file):
        code, out, _ = run(capsys, "validate", p2_file)
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_validate_bad_pair(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim":2,"rays":[[2,0],[0,1],[-1,-1]],"coeffs":["1","1","1"]}')
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert "primitive" in json.loads(err)["detail"]

    def test_mld(self, capsys, p2_file):
        code, out, _ = run(capsys, "mld", p2_file)
        assert code == 0
        assert json.loads(out) == {"mld": "1"}

    def test_width(self, capsys, p2_file):
        code, out, _ = run(capsys, "width", p2_file)
        assert code == 0
        doc = json.loads(out)
        assert doc["w"] == "2" and doc["interval"] == ["-1", "1"]

    def test_volume(self, capsys, p2_file):
        code, out, _ = run(capsys, "volume", p2_file)
        assert code == 0
        doc = json.loads(out)
        assert doc["anticanonical_volume"] == "9" and doc["ok"] is True

    def test_table(self, capsys):
        code, out, _ = run(capsys, "table", "--dim", "2", "--epsilons", "1,1/2")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["budget"] for r in rows] == ["18", "60"]

    def test_table_csv(self, capsys, tmp_path):
        target = tmp_path / "t.csv"
        code, out, _ = run(
            capsys, "table", "--dim", "2", "--epsilons", "1,1/2", "--csv", str(target)
        )
        assert code == 0
        lines = target.read_text().strip().splitlines()
        assert lines[0] == "epsilon,budget,sum_bound"
        assert lines[1].startswith("1,18,")

    def test_oracle_lambda(self, capsys, p2_file):
        code, out, _ = run(capsys, "oracle-lambda", p2_file)
        assert code == 0
        assert json.loads(out)["lambda"] == "2"


class TestConstructVerifyPipeline:
    def test_end_to_end(self, capsys, p2_file, tmp_path):
        cert = tmp_path / "cert.json"
        code, out, _ = run(capsys, "construct", p2_file, "-o", str(cert))
        assert code == 0
        assert json.loads(out)["witness"] == "2"
        code, out, _ = run(capsys, "verify", p2_file, str(cert))
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_construct_deterministic_bytes(self, capsys, p2_file):
        code1, out1, _ = run(capsys, "construct", p2_file)
        code2, out2, _ = run(capsys, "construct", p2_file)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_verify_detects_tampering(self, capsys, p2_file, tmp_path):
        cert = tmp_path / "cert.json"
        run(capsys, "construct", p2_file, "-o", str(cert))
        doc = json.loads(cert.read_text())
        doc["divisor_coeffs"] = ["1", "1", "2"]
        cert.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify", p2_file, str(cert))
        assert code == 1
        failing = [c for c in json.loads(out)["checks"] if not c["ok"]]
        assert any(c["name"] == "divisor-coefficients" for c in failing)

    def test_verify_wrong_pair(self, capsys, p2_file, tmp_path):
        cert = tmp_path / "cert.json"
        run(capsys, "construct", p2_file, "-o", str(cert))
        other = tmp_path / "other.json"
        other.write_text('{"dim":1,"rays":[[1],[-1]],"coeffs":["1","1"]}')
        code, _, err = run(capsys, "verify", str(other), str(cert))
        assert code == 1
        assert "different pair" in json.loads(err)["error"]

    def test_sharp_mode_flag(self, capsys, p2_file):
        code, out, _ = run(capsys, "construct", p2_file, "--mode", "sharp")
        assert code == 0
        assert json.loads(out)["mode"] == "sharp"

    def test_explicit_index(self, capsys, p2_file):
        code, out, _ = run(capsys, "construct", p2_file, "--n", "7")
        assert code == 0
        assert json.loads(out)["n"] == 7


class TestErrorsAndExitCodes:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "mld", "/nonexistent/pair.json")
        assert code == 2
        assert "error" in json.loads(err)

    def test_usage_error(self, capsys):
        code = main(["no-such-command"])
        assert code == 2

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "mld", str(bad))
        assert code == 2
        assert "JSON" in json.loads(err)["detail"]


class TestCorpus:
    def test_generate(self, capsys, tmp_path):
        out_dir = tmp_path / "corpus"
        code, out, _ = run(
            capsys,
            "corpus", "--dim", "2", "--count", "4", "--seed", "11", "--out", str(out_dir),
        )
        assert code == 0
        files = sorted(os.listdir(out_dir))
        assert files == [f"pair_2d_{i:03d}.json" for i in range(4)]
        code, _, _ = run(capsys, "validate", str(out_dir / files[0]))
        assert code == 0

    def test_seed_env_override(self, capsys, tmp_path, monkeypatch):
        a, b = tmp_path / "a", tmp_path / "b"
        monkeypatch.setenv("SEED", "321")
        run(capsys, "corpus", "--dim", "1", "--count", "2", "--out", str(a))
        run(capsys, "corpus", "--dim", "1", "--count", "2", "--seed", "321", "--out", str(b))
        for name in os.listdir(a):
            assert (a / name).read_text() == (b / name).read_text()
