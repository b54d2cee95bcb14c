"""The command line front end, driven through ``main`` and once as a subprocess."""
import json
import subprocess
import sys

import numpy as np
import pytest

from razzaboni import io
from razzaboni.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main

CASE1 = ["--case", "case1", "--A", "0.5", "--B", "0.5", "--grid", "0:1:64,0:0.25:64",
         "--profile", "1.5"]


def report(out, command):
    return json.loads((out / f"{command}_report.json").read_text())


def criteria(rep, suite):
    return {c["name"]: c for c in rep["suites"][suite]["criteria"]}


class TestSolve:
    def test_constant_case1(self, tmp_path):
        assert main(["solve", "--out", str(tmp_path)] + CASE1) == EXIT_PASS
        rep = report(tmp_path, "solve")
        assert rep["schema"] == "razzaboni-report/1"
        assert criteria(rep, "solve")["gmc_residual"]["value"] < 1e-12
        assert (tmp_path / "fields.txt").is_file()

    def test_dym_summary(self, tmp_path):
        code = main(["solve", "--out", str(tmp_path), "--case", "euclidean", "--A", "1",
                     "--B", "0", "--grid", "0:6.283185307179586:64,0:0.001:16",
                     "--periodic-u", "--profile", "1+0.1*sin(u)"])
        assert code == EXIT_PASS
        dym = criteria(report(tmp_path, "solve"), "solve")["dym"]
        assert dym["value"] < 1e-2 and {"max", "l2", "argmax"} <= set(dym["detail"])

    @pytest.mark.parametrize("extra", [
        ["--A", "0", "--B", "0"],
        ["--grid", "0:1:32"],
        ["--profile", "u**2"],
        ["--mode", "b0"],
        ["--tol", "nonsense=1"],
        ["--boundary", "1,2"],
    ])
    def test_config_errors(self, tmp_path, extra, capsys):
        args = dict(zip(CASE1[::2], CASE1[1::2]))
        args.update(dict(zip(extra[::2], extra[1::2])))
        argv = ["solve", "--out", str(tmp_path)] + [x for kv in args.items() for x in kv]
        assert main(argv) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_step_guard_recorded(self, tmp_path):
        argv = ["solve", "--out", str(tmp_path)] + CASE1
        argv[argv.index("0:1:64,0:0.25:64")] = "0:1:64,0:1:4"
        assert main(argv) == EXIT_FAIL
        rep = report(tmp_path, "solve")
        assert criteria(rep, "solve")["step_guard"]["detail"]["error"] == "StepTooLarge"
        assert main(["verify", "--out", str(tmp_path)]) == EXIT_FAIL
        assert not criteria(report(tmp_path, "verify"), "solve")["step_guard"]["passed"]


class TestPipeline:
    """solve -> synthesize -> transform -> verify in one directory."""

    def test_full_constant_pipeline(self, tmp_path):
        out = str(tmp_path)
        assert main(["solve", "--out", out] + CASE1) == EXIT_PASS
        assert main(["synthesize", "--out", out]) == EXIT_PASS
        assert criteria(report(tmp_path, "synthesize"), "surface")["compatibility"]["value"] < 1e-3
        assert main(["transform", "--out", out]) == EXIT_PASS
        rep = report(tmp_path, "transform")
        assert set(rep["suites"]) == {"transform", "double_transform"}
        assert main(["verify", "--out", out, "--seed", "5"]) == EXIT_PASS
        assert set(report(tmp_path, "verify")["suites"]) == {
            "solve", "surface", "transform", "double_transform", "dual_files", "algebra"}

    def test_plane_diagnostic(self, tmp_path):
        g = io.GridSpec(0, 1, 16, 0, 1, 16)
        from razzaboni.frenet import BertrandParams
        from razzaboni.gmc import GmcFields
        from razzaboni.lorentz import SignatureCase
        z = np.zeros(g.shape)
        f = GmcFields(g, SignatureCase.CASE1, BertrandParams(1, 1), z, z, z + 1, z)
        io.write_manifest(tmp_path / "manifest.json", g, f.sig, f.params, "general")
        io.write_fields(tmp_path / "fields.txt", f)
        assert main(["synthesize", "--out", str(tmp_path)]) == EXIT_PASS
        rep = report(tmp_path, "synthesize")
        assert rep["suites"]["surface"]["notes"]["planarity"] < 1e-14
        assert (tmp_path / "mesh.obj").is_file()

    def test_nan_fields_rejected(self, tmp_path, capsys):
        assert main(["solve", "--out", str(tmp_path)] + CASE1) == EXIT_PASS
        path = tmp_path / "fields.txt"
        path.write_text(path.read_text().replace("1.5 ", "nan ", 1))
        assert main(["synthesize", "--out", str(tmp_path)]) == EXIT_USAGE
        assert "non-finite" in capsys.readouterr().err

    def test_identity_transform(self, tmp_path):
        out = str(tmp_path)
        argv = ["solve", "--out", out, "--case", "case2", "--A", "0", "--B", "1",
                "--grid", "0:1:64,0:0.25:64", "--profile", "1.5"]
        assert main(argv) == EXIT_PASS
        assert main(["synthesize", "--out", out]) == EXIT_PASS
        assert main(["transform", "--out", out]) == EXIT_PASS
        rep = report(tmp_path, "transform")["suites"]["transform"]
        c = {x["name"]: x["value"] for x in rep["criteria"]}
        assert c["distance"] == c["perp_b"] == c["perp_bstar"] == c["identity"] == 0
        assert "identity" in rep["notes"]

    def test_constant_curvature_transform(self, tmp_path):
        out = str(tmp_path)
        argv = ["solve", "--out", out, "--case", "case1", "--A", "1", "--B", "0",
                "--grid", "0:1:64,0:0.0001:32", "--profile", "1"]
        assert main(argv) == EXIT_PASS
        assert main(["synthesize", "--out", out]) == EXIT_PASS
        assert main(["transform", "--out", out]) == EXIT_PASS
        c = criteria(report(tmp_path, "transform"), "transform")
        assert c["torsion_product"]["passed"] and c["opposite_curvature"]["passed"]

    def test_causal_obstruction(self, tmp_path):
        out = str(tmp_path)
        argv = ["solve", "--out", out, "--case", "case2", "--A", "0.5", "--B", "0.5",
                "--grid", "0:1:64,0:0.25:64", "--profile", "1.5"]
        assert main(argv) == EXIT_PASS
        assert main(["synthesize", "--out", out]) == EXIT_PASS
        assert main(["transform", "--out", out]) == EXIT_USAGE

    def test_euclidean_transform_refused(self, tmp_path):
        out = str(tmp_path)
        argv = ["solve", "--out", out, "--case", "euclidean", "--A", "0.5", "--B", "0.5",
                "--grid", "0:1:64,0:0.25:64", "--profile", "1.5"]
        assert main(argv) == EXIT_PASS
        assert main(["synthesize", "--out", out]) == EXIT_PASS
        assert main(["transform", "--out", out]) == EXIT_USAGE


class TestVerify:
    def test_empty_directory(self, tmp_path, capsys):
        assert main(["verify", "--out", str(tmp_path)]) == EXIT_USAGE
        assert "missing file" in capsys.readouterr().err

    def test_deterministic(self, tmp_path):
        out = str(tmp_path)
        main(["solve", "--out", out] + CASE1)
        main(["synthesize", "--out", out])
        texts = []
        for _ in range(2):
            assert main(["verify", "--out", out, "--seed", "11"]) == EXIT_PASS
            texts.append([line for line in (tmp_path / "verify_report.json").read_text()
                          .splitlines() if '"timestamp"' not in line])
        assert texts[0] == texts[1]

    def test_tolerance_override_fails(self, tmp_path):
        out = str(tmp_path)
        main(["solve", "--out", out] + CASE1)
        main(["synthesize", "--out", out])
        assert main(["verify", "--out", out, "--tol", "compatibility=1e-12"]) == EXIT_FAIL


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "razzaboni.cli", "verify", "--out",
                           str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE
    proc = subprocess.run([sys.executable, "-m", "razzaboni.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "solve" in proc.stdout
