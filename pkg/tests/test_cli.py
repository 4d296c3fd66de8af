from __future__ import annotations

import cmath
import json
import math
import os

import jsonschema
import pytest
from click.testing import CliRunner
from hypothesis import given
from hypothesis import strategies as st

from monodromy_lab.cli import cli, dumps, load_schema, parse_loop_file
from monodromy_lab.pendulum import certify, trace_circuit


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)


def loop_text(coeffs_of_t, n=64):
    lines = ["# cubic loop", f"t_count={n}"]
    for k in range(n):
        a, b, c, d = coeffs_of_t(k / n)
        lines.append(" ".join(repr(complex(v)).strip("()") for v in (a, b, c, d)))
    return "\n".join(lines) + "\n"


class TestVerify:
    def test_passes(self, runner):
        res = run(runner, "verify")
        assert res.exit_code == 0, res.stderr
        report = json.loads(res.stdout)
        assert report["kind"] == "verify" and report["passed"]
        assert all(line.startswith("PASS") for line in res.stderr.strip().splitlines())

    def test_impossible_tolerance_fails(self, runner):
        res = run(runner, "verify", "--tol", "jacobi=1e-30")
        assert res.exit_code == 1
        assert "FAIL jacobi" in res.stderr

    @pytest.mark.parametrize("tol", ["bogus=1", "jacobi", "jacobi=abc", "jacobi=-1", "jacobi=inf"])
    def test_bad_tolerance_is_usage_error(self, runner, tol):
        assert run(runner, "verify", "--tol", tol).exit_code == 2

    def test_csv(self, runner, tmp_path):
        out = tmp_path / "v.csv"
        assert run(runner, "verify", "--format", "csv", "--out", out).exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("#") and "schema=1" in lines[0]
        assert lines[1] == "name,residual,tolerance,cases,status"


class TestPendulum:
    def test_json_certificate(self, runner, tmp_path):
        out = tmp_path / "cert.json"
        res = run(runner, "pendulum", "--samples", 512, "--out", out)
        assert res.exit_code == 0, res.stderr
        report = json.loads(out.read_text())
        jsonschema.validate(report, load_schema())
        cert = certify(trace_circuit(0.05, 512))
        assert report["certificate"]["m"] == cert.m
        assert report["certificate"]["delta_theta_hat"] == cert.delta_theta_hat
        assert report["provenance"]["config"]["samples"] == 512
        assert len(report["trace"]["rows"]) == report["provenance"]["sample_count"] + 1

    def test_deterministic(self, runner, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(runner, "pendulum", "--samples", 256, "--out", a)
        run(runner, "pendulum", "--samples", 256, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_csv_with_sidecar(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        assert run(runner, "pendulum", "--samples", 256, "--format", "csv", "--out", out).exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# pendulum circuit trace")
        assert len(lines) == 2 + 256 + 1
        sidecar = json.loads((tmp_path / "trace.certificate.json").read_text())
        assert sidecar["kind"] == "certificate"

    def test_control_circuit_is_trivial(self, runner):
        res = run(runner, "pendulum", "--samples", 256, "--center", "0.3,0.5")
        assert res.exit_code == 0, res.stderr
        cert = json.loads(res.stdout)["certificate"]
        assert cert["m"] == 0
        assert cert["classical_matrix"] == [[1, 0], [0, 1]]

    def test_turns_and_reverse(self, runner):
        one = json.loads(run(runner, "pendulum", "--samples", 256).stdout)["certificate"]["m"]
        two = json.loads(run(runner, "pendulum", "--samples", 256, "--turns", 2).stdout)["certificate"]["m"]
        back = json.loads(run(runner, "pendulum", "--samples", 256, "--reverse").stdout)["certificate"]["m"]
        assert two == 2 * one and back == -one and one != 0

    @pytest.mark.parametrize(
        "args",
        [
            ("--samples", 300),
            ("--samples", 128),
            ("--epsilon", 0.5),
            ("--epsilon", 0),
            ("--turns", 0),
            ("--center", "1"),
            ("--format", "xml"),
        ],
    )
    def test_bad_config(self, runner, args):
        assert run(runner, "pendulum", *args).exit_code == 2

    def test_uncertifiable_variation_fails(self, runner):
        res = run(runner, "pendulum", "--samples", 256, "--tol", "integer=1e-300")
        assert res.exit_code == 1
        assert "not integral" in res.stderr


class TestGate:
    @pytest.mark.parametrize("m, quarter", [(1, 1), (2, 2), (3, 3), (4, 0), (-1, 3)])
    def test_m(self, runner, m, quarter):
        res = run(runner, "gate", "--m", m)
        assert res.exit_code == 0, res.stderr
        report = json.loads(res.stdout)
        assert report["quarter_turns"] == quarter
        assert report["is_identity"] == (quarter == 0)
        assert report["residual"] < 1e-11

    def test_from_certificate(self, runner, tmp_path):
        cert = tmp_path / "cert.json"
        run(runner, "pendulum", "--samples", 256, "--out", cert)
        m = json.loads(cert.read_text())["certificate"]["m"]
        res = run(runner, "gate", "--certificate", cert)
        assert res.exit_code == 0
        assert json.loads(res.stdout)["m"] == m

    def test_needs_exactly_one_source(self, runner, tmp_path):
        assert run(runner, "gate").exit_code == 2
        cert = tmp_path / "c.json"
        cert.write_text("{}")
        assert run(runner, "gate", "--m", 1, "--certificate", cert).exit_code == 2

    @pytest.mark.parametrize("content", ["not json", "{}", '{"schema": 1, "kind": "gate", "version": "0"}'])
    def test_bad_certificate(self, runner, tmp_path, content):
        cert = tmp_path / "c.json"
        cert.write_text(content)
        assert run(runner, "gate", "--certificate", cert).exit_code == 2

    @pytest.mark.parametrize("m", ["x", "1.5", "99"])
    def test_bad_m(self, runner, m):
        assert run(runner, "gate", "--m", m).exit_code == 2


class TestBraid:
    def test_example(self, runner):
        res = run(runner, "braid", "--example")
        assert res.exit_code == 0, res.stderr
        report = json.loads(res.stdout)
        assert report["permutation"] == [0, 2, 1]
        assert report["matrix"] == [[1, 1], [0, 1]]
        assert report["det"] == 1

    def test_constant_family(self, runner, tmp_path):
        path = tmp_path / "const.txt"
        path.write_text(loop_text(lambda t: (1, 0, -3, 0.5)))
        report = json.loads(run(runner, "braid", path).stdout)
        assert report["word"] == "e" or report["letters"] == []
        assert report["permutation"] == [0, 1, 2]

    def test_full_loop_around_both_discriminant_points(self, runner, tmp_path):
        # x^3 - 3x + c with |c| = 3 encloses c = -2 and c = 2
        path = tmp_path / "big.txt"
        path.write_text(loop_text(lambda t: (1, 0, -3, 3 * cmath.exp(2j * math.pi * t)), n=128))
        res = run(runner, "braid", path)
        assert res.exit_code == 0, res.stderr
        report = json.loads(res.stdout)
        assert sorted(report["permutation"]) == [0, 1, 2] and report["permutation"] != [0, 1, 2]
        assert report["det"] == 1

    @pytest.mark.parametrize(
        "content",
        ["", "t_count=3\n1 0 0\n", "t_count=x\n", "t_count=2\n1 0 -3 0\n", "t_count=2\n1 0 -3 q\n1 0 -3 0\n"],
    )
    def test_corrupt_file(self, runner, tmp_path, content):
        path = tmp_path / "bad.txt"
        path.write_text(content)
        assert run(runner, "braid", path).exit_code == 2

    def test_binary_file(self, runner, tmp_path):
        path = tmp_path / "bin.txt"
        path.write_bytes(b"\xff\xfe\x00\x81")
        assert run(runner, "braid", path).exit_code == 2

    def test_loop_through_discriminant_fails(self, runner, tmp_path):
        # the sample at t = 0 sits on c = 2, a double root
        path = tmp_path / "hit.txt"
        path.write_text(loop_text(lambda t: (1, 0, -3, 2 + 0.5 * (1 - cmath.exp(2j * math.pi * t)))))
        assert run(runner, "braid", path).exit_code == 1

    def test_example_and_file_conflict(self, runner, tmp_path):
        path = tmp_path / "const.txt"
        path.write_text(loop_text(lambda t: (1, 0, -3, 0.5)))
        assert run(runner, "braid", path, "--example").exit_code == 2
        assert run(runner, "braid").exit_code == 2


class TestCurve:
    def test_lemniscatic(self, runner):
        res = run(runner, "curve", "--g2", 4, "--g3", 0)
        assert res.exit_code == 0, res.stderr
        report = json.loads(res.stdout)
        assert report["roots"] == pytest.approx([1, 0, -1], abs=1e-15)
        assert report["tau"] == pytest.approx([0, 1], abs=1e-9)

    def test_singular_is_usage_error(self, runner):
        # 4x^3 - 3x + 1 = (x + 1)(2x - 1)^2
        assert run(runner, "curve", "--g2", 3, "--g3", -1).exit_code == 2


class TestTheta:
    def test_values(self, runner):
        res = run(runner, "theta", "--z", "0.1+0.05j", "--tau", "0.2+1.1j")
        assert res.exit_code == 0, res.stderr
        values = json.loads(res.stdout)["values"]
        assert set(values) >= {"theta1", "theta2", "theta3", "theta4", "level_theta"}

    def test_csv(self, runner):
        res = run(runner, "theta", "--format", "csv")
        lines = res.stdout.splitlines()
        assert lines[1] == "name,real,imag"
        assert len(lines) == 2 + 6

    @pytest.mark.parametrize("args", [("--tau", "-1j"), ("--tau", "abc"), ("--z", "nan")])
    def test_bad_input(self, runner, args):
        assert run(runner, "theta", *args).exit_code == 2


class TestSerialisation:
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_round_trip(self, x):
        assert json.loads(dumps({"x": x}))["x"] == x

    def test_integral_floats_stay_floats(self):
        assert dumps([1.0, 2]) == "[1.0, 2]"

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            dumps({"x": math.nan})

    def test_failed_render_leaves_no_files(self, runner, tmp_path, monkeypatch):
        import monodromy_lab.cli as cli_mod

        def boom(report):
            raise RuntimeError("render failed")

        monkeypatch.setattr(cli_mod, "_validated", boom)
        out = tmp_path / "trace.csv"
        with pytest.raises(RuntimeError):
            run(runner, "pendulum", "--samples", 256, "--format", "csv", "--out", out)
        assert os.listdir(tmp_path) == []

    def test_overwrite_is_atomic(self, runner, tmp_path):
        out = tmp_path / "g.json"
        out.write_text("old")
        run(runner, "gate", "--m", 2, "--out", out)
        assert json.loads(out.read_text())["m"] == 2
        assert sorted(os.listdir(tmp_path)) == ["g.json"]


class TestLoopParser:
    def test_comments_and_blanks(self):
        body = "\n\n".join(f"1 0 -3 0.5+{k / 100}j" for k in range(16))
        loop = parse_loop_file(f"# c\n\nt_count=16\n{body}\n")
        assert len(loop) == 16

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            parse_loop_file("t_count=3\n1 0 -3 0\n1 0 -3 1\n")
