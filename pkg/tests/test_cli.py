import json
import math
import subprocess
import sys

import numpy as np
import pytest

from floatdual.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_cube(capsys):
    code, out, _ = run_cli(["analyze", "--gen", "cube", "--dim", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["g"] == pytest.approx(0.70710678, abs=1e-7)
    assert report["g_cone_form"] == pytest.approx(report["g"], abs=1e-9)
    assert len(report["per_vertex"]) == 4


def test_analyze_hexagon(capsys):
    code, out, _ = run_cli(["analyze", "--gen", "hexagon", "--eps", "0.25"], capsys)
    assert code == 0
    report = json.loads(out)
    eps = 0.25
    g = 2 * math.sqrt(2) * (1 + eps) ** 0.5 * (1 - eps) ** 1.5 / (3 - 2 * eps)
    c0 = (1 + eps) ** 0.5 * (1 - eps) ** 1.5 / (math.sqrt(2) * (2 - eps) * (3 - 2 * eps))
    assert report["g"] == pytest.approx(g, rel=1e-9)
    assert report["c_star"] == pytest.approx(c0, rel=1e-9)


def test_analyze_cross3(capsys):
    code, out, _ = run_cli(["analyze", "--gen", "cross", "--dim", "3"], capsys)
    assert code == 0
    assert json.loads(out)["g"] == pytest.approx(0.6299605, abs=1e-7)


def test_analyze_csv_format(capsys):
    code, out, _ = run_cli(
        ["analyze", "--gen", "cube", "--dim", "2", "--format", "csv"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "vertex,alpha,beta,cone_density,cone_density_polar"
    assert any(line.startswith("G,") for line in lines)


def test_analyze_from_file(tmp_path, capsys):
    path = tmp_path / "poly.json"
    path.write_text(json.dumps({
        "dim": 2,
        "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]],
    }))
    code, out, _ = run_cli(["analyze", "--input", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["g"] == pytest.approx(math.sqrt(2) / 2, rel=1e-9)


# ---------------------------------------------------------------------------
# polar
# ---------------------------------------------------------------------------

def test_polar_cube_gives_cross(capsys):
    code, out, _ = run_cli(["polar", "--gen", "cube", "--dim", "2"], capsys)
    assert code == 0
    verts = np.array(json.loads(out)["vertices"])
    expect = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    for e in expect:
        assert np.min(np.linalg.norm(verts - e[None, :], axis=1)) <= 1e-9


def test_polar_hexagon_prints_dual_vertices(capsys):
    eps = 0.25
    code, out, _ = run_cli(["polar", "--gen", "hexagon", "--eps", "0.25"], capsys)
    assert code == 0
    verts = np.array(json.loads(out)["vertices"])
    r = math.sqrt(1 - eps**2)
    expect = np.array([
        [1 / r, 0], [-1 / r, 0],
        [(1 - eps) / r, 1], [(1 - eps) / r, -1],
        [-(1 - eps) / r, 1], [-(1 - eps) / r, -1],
    ])
    assert verts.shape == (6, 2)
    for e in expect:
        assert np.min(np.linalg.norm(verts - e[None, :], axis=1)) <= 1e-9


def test_polar_double_application_is_identity(tmp_path, capsys):
    code, out, _ = run_cli(["polar", "--gen", "hexagon", "--eps", "0.3"], capsys)
    assert code == 0
    mid = tmp_path / "polar.json"
    mid.write_text(out)
    code, out2, _ = run_cli(["polar", "--input", str(mid)], capsys)
    assert code == 0
    verts = np.array(json.loads(out2)["vertices"])
    from floatdual.invariants import generator
    orig = generator("hexagon", eps=0.3).vertices
    for v in orig:
        assert np.min(np.linalg.norm(verts - v[None, :], axis=1)) <= 1e-9


# ---------------------------------------------------------------------------
# verify / check-bound
# ---------------------------------------------------------------------------

def test_verify_empty_deltas_header_only(capsys):
    code, out, _ = run_cli(
        ["verify", "--gen", "cube", "--dim", "2", "--deltas", ""], capsys
    )
    assert code == 0
    assert out == "delta,d_P,normalized,best_delta_prime,G_closed_form\n"


def test_verify_small_run(tmp_path, capsys):
    out_path = tmp_path / "table.csv"
    code, _, err = run_cli(
        ["verify", "--gen", "cube", "--dim", "2", "--grid", "512",
         "--deltas", "1e-3,1e-4", "--out", str(out_path)], capsys
    )
    assert code == 0, err
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "delta,d_P,normalized,best_delta_prime,G_closed_form"
    assert len(lines) == 4  # two rows plus the extrapolated one
    row = lines[1].split(",")
    assert float(row[0]) == 1e-3
    assert float(row[1]) > 1.0
    assert float(row[4]) == pytest.approx(math.sqrt(2) / 2, rel=1e-9)
    extrap = lines[3].split(",")
    assert float(extrap[0]) == 0.0


def test_verify_chain_report(tmp_path, capsys):
    table = tmp_path / "table.csv"
    chain = tmp_path / "chain.json"
    code, _, err = run_cli(
        ["verify", "--gen", "cross", "--dim", "2", "--grid", "512",
         "--deltas", "1e-3", "--out", str(table),
         "--chain-report", str(chain)], capsys
    )
    assert code == 0, err
    rows = json.loads(chain.read_text())
    assert len(rows) == 1
    assert rows[0]["floating_inside"] is True
    assert rows[0]["polar_illumination_inside"] is True
    assert rows[0]["illumination_outside"] is True


def test_run_config_validation():
    from floatdual.config import RunConfig
    from floatdual.errors import BadParameter

    RunConfig().validate()
    with pytest.raises(BadParameter):
        RunConfig(incidence_tolerance=0.0).validate()
    with pytest.raises(BadParameter):
        RunConfig(grid_sizes={2: 16}).validate()
    with pytest.raises(BadParameter):
        RunConfig(output_format="xml").validate()


def test_check_bound_square(tmp_path, capsys):
    out_path = tmp_path / "bound.json"
    code, _, err = run_cli(
        ["check-bound", "--gen", "cube", "--dim", "2", "--grid", "512",
         "--deltas", "0,1e-2,1e-3", "--out", str(out_path)], capsys
    )
    assert code == 0, err
    report = json.loads(out_path.read_text())
    assert report["passed"] is True
    assert report["constant"] == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)
    assert all(row["margin"] >= 0.0 for row in report["rows"])


def test_check_bound_rejects_unsandwiched(tmp_path, capsys):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({
        "dim": 2,
        "vertices": [[3, 3], [3, -3], [-3, 3], [-3, -3]],
    }))
    code, _, err = run_cli(
        ["check-bound", "--input", str(path), "--grid", "256",
         "--deltas", "1e-3"], capsys
    )
    assert code == 3
    assert "NotInJohnSandwich" in err


# ---------------------------------------------------------------------------
# exit codes and determinism
# ---------------------------------------------------------------------------

def test_exit_code_unknown_generator(capsys):
    code, _, _ = run_cli(["analyze", "--gen", "simplex"], capsys)
    assert code == 2


def test_exit_code_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, _ = run_cli(["analyze", "--input", str(path)], capsys)
    assert code == 2


def test_exit_code_missing_fields(tmp_path, capsys):
    path = tmp_path / "fields.json"
    path.write_text(json.dumps({"dim": 2}))
    code, _, _ = run_cli(["analyze", "--input", str(path)], capsys)
    assert code == 2


def test_exit_code_geometry_error_names_invariant(tmp_path, capsys):
    path = tmp_path / "redundant.json"
    path.write_text(json.dumps({
        "dim": 2,
        "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1], [0, 0]],
    }))
    code, _, err = run_cli(["analyze", "--input", str(path)], capsys)
    assert code == 3
    assert "DegenerateInput" in err


def test_exit_code_inclusion_chain_violation(tmp_path, capsys, monkeypatch):
    import floatdual.cli as cli_mod

    class FakeChain:
        ok = False
        floating_inside = False
        polar_illumination_inside = True
        illumination_outside = True

    monkeypatch.setattr(cli_mod, "inclusion_chain", lambda *a, **k: FakeChain())
    code, _, err = run_cli(
        ["verify", "--gen", "cube", "--dim", "2", "--grid", "256",
         "--deltas", "1e-3"], capsys
    )
    assert code == 4
    assert "inclusion-chain" in err


def test_exit_code_bound_violation(tmp_path, capsys, monkeypatch):
    import floatdual.cli as cli_mod
    from floatdual.oracles import BoundCheckReport, BoundCheckRow

    fake = BoundCheckReport(1.0, (BoundCheckRow(1e-3, 2.0, 1.5, -0.5),))
    monkeypatch.setattr(cli_mod, "uniform_bound_check", lambda *a, **k: fake)
    code, _, err = run_cli(
        ["check-bound", "--gen", "cube", "--dim", "2", "--grid", "256",
         "--deltas", "1e-3"], capsys
    )
    assert code == 5


def test_determinism_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        cmd = [
            sys.executable, "-m", "floatdual.cli", "verify", "--gen", "cube",
            "--dim", "2", "--grid", "256", "--deltas", "1e-3",
            "--seed", "0", "--out", str(p),
        ]
        res = subprocess.run(cmd, capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
    assert paths[0].read_bytes() == paths[1].read_bytes()
