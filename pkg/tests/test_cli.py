import json
import math

import pytest

from thinfem import cli, covering, mesh


def run(args):
    return cli.main(args)


def fig_mesh_file(tmp_path, K, alpha, name="m.msh"):
    path = tmp_path / name
    rc = run(["gen", "square-six", "--K", str(K), "--alpha", str(alpha), "-o", str(path)])
    assert rc == 0
    return path


class TestGen:
    def test_square_six(self, tmp_path, capsys):
        path = fig_mesh_file(tmp_path, 10, 0.1)
        out = capsys.readouterr().out
        assert "321 vertices" in out and "600 elements" in out
        m = mesh.read_mesh(path)
        assert m.n_vertices == 321

    def test_uniform_right(self, tmp_path):
        path = tmp_path / "u.msh"
        assert run(["gen", "uniform-right", "--K", "4", "-o", str(path)]) == 0
        assert mesh.read_mesh(path).n_elements == 32

    def test_refined_diag(self, tmp_path):
        path = tmp_path / "r.msh"
        assert run(["gen", "refined-diag", "--K", "2", "-o", str(path)]) == 0
        assert mesh.read_mesh(path).n_elements == 24

    def test_missing_K_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["gen", "square-six", "--alpha", "0.1", "-o", str(tmp_path / "x")])
        assert exc.value.code == 2

    def test_square_six_without_alpha_fails(self, tmp_path, capsys):
        rc = run(["gen", "square-six", "--K", "2", "-o", str(tmp_path / "x.msh")])
        assert rc == 1
        assert "alpha" in capsys.readouterr().err

    def test_deterministic_output(self, tmp_path):
        p1 = fig_mesh_file(tmp_path, 3, 0.01, "a.msh")
        p2 = fig_mesh_file(tmp_path, 3, 0.01, "b.msh")
        assert p1.read_bytes() == p2.read_bytes()


class TestClassify:
    def test_fig30_counts(self, tmp_path):
        path = fig_mesh_file(tmp_path, 4, 0.01)
        out = tmp_path / "cls.json"
        rc = run(["classify", "--mesh", str(path), "--theta", "0.26", "-o", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["counts"]["bad"] == 32
        assert payload["elements"] == 96
        assert payload["classes"].count("B") == 32

    def test_report_byte_determinism(self, tmp_path):
        path = fig_mesh_file(tmp_path, 2, 0.01)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run(["classify", "--mesh", str(path), "--theta", "0.3",
                        "-o", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_degrees_flag(self, tmp_path):
        path = fig_mesh_file(tmp_path, 2, 0.01)
        out = tmp_path / "cls.json"
        rc = run([
            "classify", "--mesh", str(path), "--theta",
            str(math.degrees(0.26)), "--deg", "-o", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["theta"] == pytest.approx(0.26)


class TestCheckCover:
    def test_auto_mode_satisfied(self, tmp_path):
        path = fig_mesh_file(tmp_path, 4, 0.01)
        out = tmp_path / "cover.json"
        rc = run(["check-cover", "--mesh", str(path), "--phi", "0.6", "-o", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["satisfied"] is True
        assert payload["config"]["covers"] == 32

    def test_auto_mode_failure_exit_1_with_report(self, tmp_path):
        path = fig_mesh_file(tmp_path, 4, 0.0001)
        out = tmp_path / "cover.json"
        rc = run(["check-cover", "--mesh", str(path), "--phi", "1.0", "-o", str(out)])
        assert rc == 1
        payload = json.loads(out.read_text())
        assert payload["satisfied"] is False

    def test_plan_mode(self, tmp_path):
        path = fig_mesh_file(tmp_path, 2, 0.01)
        m = mesh.read_mesh(path)
        plan = covering.derive_isosceles_cover(m, 0.6)
        plan_path = tmp_path / "plan.txt"
        covering.write_plan(plan, plan_path)
        out = tmp_path / "report.json"
        rc = run([
            "check-cover", "--mesh", str(path), "--plan", str(plan_path),
            "-o", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["mode"] == "general"
        assert payload["satisfied"] is True

    def test_plan_mode_matches_auto_mode(self, tmp_path):
        # deriving covers, writing them to a plan file and re-checking via
        # the general verifier must agree with the auto mode end to end
        path = fig_mesh_file(tmp_path, 10, 0.01)
        m = mesh.read_mesh(path)
        plan = covering.derive_isosceles_cover(m, 0.6)
        plan_path = tmp_path / "plan.txt"
        covering.write_plan(plan, plan_path)
        out_auto = tmp_path / "auto.json"
        out_plan = tmp_path / "plan.json"
        assert run(["check-cover", "--mesh", str(path), "--phi", "0.6",
                    "-o", str(out_auto)]) == 0
        assert run(["check-cover", "--mesh", str(path), "--plan", str(plan_path),
                    "-o", str(out_plan)]) == 0
        a = json.loads(out_auto.read_text())
        b = json.loads(out_plan.read_text())
        assert a["satisfied"] and b["satisfied"]
        assert a["params"] == b["params"]
        assert a["multiplicity"] == b["multiplicity"] == 1

    def test_both_modes_rejected(self, tmp_path, capsys):
        path = fig_mesh_file(tmp_path, 1, 0.1)
        rc = run([
            "check-cover", "--mesh", str(path), "--phi", "0.6", "--plan", "x",
        ])
        assert rc == 1
        assert "exactly one" in capsys.readouterr().err


class TestInterpError:
    def test_linear_field_near_zero(self, tmp_path):
        path = fig_mesh_file(tmp_path, 2, 0.01)
        out = tmp_path / "ie.json"
        rc = run([
            "interp-error", "--mesh", str(path), "--phi", "0.6",
            "--field", "linear", "-o", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["error_pi1"] <= 1e-12
        assert payload["error_pistar"] <= 1e-12

    def test_quartic_schema(self, tmp_path):
        path = fig_mesh_file(tmp_path, 4, 0.0001)
        out = tmp_path / "ie.json"
        rc = run([
            "interp-error", "--mesh", str(path), "--phi", "0.6", "--field",
            "quartic", "-o", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        for key in ("h", "error_pi1", "error_pistar", "h2_seminorm", "ratio"):
            assert key in payload
        assert payload["h2_seminorm"] == pytest.approx(math.sqrt(22 / 45), abs=1e-10)
        assert payload["ratio"] == pytest.approx(
            payload["error_pistar"] / (payload["h"] * payload["h2_seminorm"])
        )
        # the covering-modified interpolant beats plain Lagrange on flat cells
        assert payload["error_pistar"] < payload["error_pi1"]


class TestSolve:
    def test_solve_json(self, tmp_path):
        path = fig_mesh_file(tmp_path, 10, 0.1)
        out = tmp_path / "sol.json"
        rc = run(["solve", "--mesh", str(path), "-o", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["e_h"] == pytest.approx(1.8002e-2, rel=2e-3)
        assert payload["residual"] <= 1e-12
        assert payload["iterations"] > 0


class TestTable1:
    def test_single_cell(self, tmp_path):
        out = tmp_path / "t.csv"
        rc = run(["table1", "--K", "10", "--alpha", "0.1", "-o", str(out)])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "K,alpha,h,e_h,e_h_over_h"
        assert len(lines) == 2
        rec = lines[1].split(",")
        assert rec[0] == "10"
        assert float(rec[3]) == pytest.approx(1.8002e-2, rel=2e-3)
        assert rec[4] == "0.17485"

    def test_reference_columns(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        rc = run([
            "table1", "--K", "10", "--alpha", "0.01", "--reference", "table1",
            "-o", str(out),
        ])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert "ref_e_h" in lines[0]
        rec = lines[1].split(",")
        assert float(rec[6]) < 2e-3  # rel deviation against the bundled value
        assert "max relative e_h deviation" in capsys.readouterr().err

    def test_jobs_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["table1", "--K", "2", "--K", "4", "--alpha", "0.1"]
        assert run(base + ["-o", str(a)]) == 0
        assert run(base + ["--jobs", "2", "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestTetrahedraViaCli:
    def test_classify_3d_mesh_file(self, tmp_path):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2, 3)], [0, 1, 2, 3])
        path = tmp_path / "tet.msh"
        mesh.write_mesh(m, path)
        out = tmp_path / "cls.json"
        rc = run(["classify", "--mesh", str(path), "--theta", "0.3", "-o", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["dim"] == 3
        assert payload["counts"]["ordinary"] == 0


class TestErrorPaths:
    def test_missing_mesh_file(self, tmp_path, capsys):
        rc = run(["classify", "--mesh", str(tmp_path / "none.msh"), "--theta", "0.3"])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_field(self, tmp_path, capsys):
        path = fig_mesh_file(tmp_path, 1, 0.1)
        rc = run(["solve", "--mesh", str(path), "--field", "bogus"])
        assert rc == 1
        assert "unknown field" in capsys.readouterr().err
