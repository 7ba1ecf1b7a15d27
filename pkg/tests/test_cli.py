import json

import numpy as np
import pytest

import ltisym
from ltisym.cli import main

from conftest import REF_A, REF_B, REF_C, REF_D, planted_relaxation


@pytest.fixture()
def ref_file(tmp_path):
    doc = json.dumps({"n": 2, "m": 3, "A": REF_A, "B": REF_B, "C": REF_C, "D": REF_D})
    path = tmp_path / "bench.json"
    path.write_text(doc)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_benchmark_text(self, capsys, ref_file):
        code, out, _ = run(capsys, "analyze", ref_file, "--tol", "1e-4")
        assert code == 0
        assert "external symmetry: no" in out
        assert "internal symmetry: no" in out
        assert "symmetrizable: yes" in out
        assert "achievable signatures: -5 -3 3 5" in out
        assert "kernel dimension: 2" in out

    def test_benchmark_json(self, capsys, ref_file):
        code, out, _ = run(capsys, "analyze", ref_file, "--tol", "1e-4", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["external"]["symmetric"] is False
        assert doc["signatures"] == [-5, -3, 3, 5]
        assert doc["kernel_dimension"] == 2

    def test_random_system_not_symmetrizable(self, capsys, tmp_path):
        rng = np.random.default_rng(1)
        ss = ltisym.StateSpace(
            rng.standard_normal((3, 3)), rng.standard_normal((3, 3)),
            rng.standard_normal((3, 3)), rng.standard_normal((3, 3)),
        )
        path = tmp_path / "sys.json"
        path.write_text(ltisym.dump_system(ss))
        code, out, _ = run(capsys, "analyze", str(path))
        assert code == 0
        assert "symmetrizable: no" in out

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "analyze", "/nonexistent/path.json")
        assert code == 1
        assert "no such file" in err

    def test_defective_structure_exit(self, capsys, tmp_path):
        # jordan-block system matrix
        doc = json.dumps({"n": 1, "m": 1, "A": [[1.0]], "B": [[1.0]],
                          "C": [[0.0]], "D": [[1.0]]})
        path = tmp_path / "defective.json"
        path.write_text(doc)
        code, _, err = run(capsys, "analyze", str(path))
        assert code == 3
        assert "unsupported structure" in err


class TestSymmetrize:
    def test_benchmark_with_target(self, capsys, ref_file):
        code, out, _ = run(capsys, "symmetrize", ref_file, "--signature", "-3",
                           "--tol", "1e-4")
        assert code == 0
        doc = json.loads(out)
        assert doc["symmetrizable"] is True
        cert = ltisym.certificate_from_json(json.dumps(doc["certificate"]))
        assert cert.signature == -3
        transformed = ltisym.load_system(json.dumps(doc["system"]))
        sig = ltisym.check_internal_symmetry(ltisym.system_matrix(transformed), tol=1e-3)
        assert sig is not None
        _, sigma_e = ltisym.split_signature(sig, transformed.n)
        assert sigma_e.signature == 1

    def test_not_symmetrizable_is_decided(self, capsys, tmp_path):
        rng = np.random.default_rng(2)
        while True:
            ss = ltisym.StateSpace(
                rng.standard_normal((3, 3)), rng.standard_normal((3, 3)),
                rng.standard_normal((3, 3)), rng.standard_normal((3, 3)),
            )
            if ltisym.is_minimal(ss):
                break
        path = tmp_path / "sys.json"
        path.write_text(ltisym.dump_system(ss))
        code, out, _ = run(capsys, "symmetrize", str(path))
        assert code == 0
        assert json.loads(out)["symmetrizable"] is False

    def test_parity_incompatible_signature_is_usage_error(self, capsys, ref_file):
        code, _, err = run(capsys, "symmetrize", ref_file, "--signature", "4")
        assert code == 1
        assert "parity" in err

    def test_output_file(self, capsys, ref_file, tmp_path):
        out_path = tmp_path / "result.json"
        code, out, _ = run(capsys, "symmetrize", ref_file, "--tol", "1e-4",
                           "--out", str(out_path))
        assert code == 0 and out == ""
        assert json.loads(out_path.read_text())["symmetrizable"] is True


class TestSignatures:
    def test_benchmark(self, capsys, ref_file):
        code, out, _ = run(capsys, "signatures", ref_file, "--tol", "1e-4")
        assert code == 0
        assert out.strip() == "achievable signatures: -5 -3 3 5"

    def test_json_format(self, capsys, ref_file):
        code, out, _ = run(capsys, "signatures", ref_file, "--tol", "1e-4",
                           "--format", "json")
        assert json.loads(out) == {"signatures": [-5, -3, 3, 5]}

    def test_complex_spectrum_exit(self, capsys, tmp_path):
        doc = json.dumps({"n": 1, "m": 1, "A": [[0.0]], "B": [[1.0]],
                          "C": [[-1.0]], "D": [[0.0]]})
        path = tmp_path / "rot.json"
        path.write_text(doc)
        code, _, err = run(capsys, "signatures", str(path))
        assert code == 3


class TestController:
    def test_relaxation_system(self, capsys, tmp_path):
        rng = np.random.default_rng(3)
        ss = planted_relaxation(rng, 2, 2)
        path = tmp_path / "relax.json"
        path.write_text(ltisym.dump_system(ss))
        code, out, _ = run(capsys, "controller", str(path), "--alpha", "2.0",
                           "--format", "json")
        assert code == 0
        doc = json.loads(out)
        gain = np.array(doc["gain"])
        want = -(1 / 2.0) * (ss.D - ss.C @ np.linalg.solve(ss.A, ss.B))
        np.testing.assert_allclose(gain, want, atol=1e-10)
        assert np.linalg.eigvalsh(np.array(doc["R"])).min() > 0

    def test_precondition_reported(self, capsys, tmp_path):
        rng = np.random.default_rng(4)
        while True:
            ss = ltisym.StateSpace(
                rng.standard_normal((2, 2)), rng.standard_normal((2, 2)),
                rng.standard_normal((2, 2)), rng.standard_normal((2, 2)),
            )
            if ltisym.is_minimal(ss):
                break
        path = tmp_path / "sys.json"
        path.write_text(ltisym.dump_system(ss))
        code, out, _ = run(capsys, "controller", str(path), "--format", "json")
        assert code == 0
        assert json.loads(out)["controller"] is None


class TestGenerators:
    def test_tank_roundtrip(self, capsys):
        code, out, _ = run(capsys, "tank", "--gamma1", "0.8")
        assert code == 0
        ss = ltisym.load_system(out)
        assert (ss.n, ss.m) == (4, 2)

    def test_random_deterministic(self, capsys):
        code1, out1, _ = run(capsys, "random", "--n", "3", "--m", "2", "--seed", "11")
        code2, out2, _ = run(capsys, "random", "--n", "3", "--m", "2", "--seed", "11")
        assert code1 == code2 == 0
        assert out1 == out2
        ss = ltisym.load_system(out1)
        P = ltisym.system_matrix(ss)
        assert ltisym.check_internal_symmetry(P) is not None

    def test_random_with_signature(self, capsys):
        code, out, _ = run(capsys, "random", "--n", "2", "--m", "2",
                           "--sigma=-1,-1,1,1", "--seed", "0")
        assert code == 0
        P = ltisym.system_matrix(ltisym.load_system(out))
        sig = np.array([-1.0, -1.0, 1.0, 1.0])
        assert np.abs(sig[:, None] * P.P - P.P.T * sig[None, :]).max() == 0.0

    def test_bad_sigma(self, capsys):
        code, _, err = run(capsys, "random", "--n", "2", "--m", "1",
                           "--sigma", "fish")
        assert code == 1


class TestUsage:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1

    def test_bad_tank_params(self, capsys):
        code, _, err = run(capsys, "tank", "--T1", "-5")
        assert code == 1
