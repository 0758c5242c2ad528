"""
Tests for the qg command line.
"""

import numpy as np
import pytest

import qgraph.tools.validation as validation
from conftest import GRAPHS, SCENARIOS, equilateral
from qgraph.cli import main
from qgraph.config import get_settings
from qgraph.tools.exporters import field_table, write_text
from qgraph.tools.qgfft import forward
from qgraph.tools.scenario import build_field


@pytest.fixture
def triangle_field(tmp_path):
    g = equilateral("triangle")
    field = build_field(g, 8, {"0": "tent", "1": "sin_pi", "2": "0.5"})
    return write_text(tmp_path / "field.csv", field_table(field))


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("QG_OUTPUT_DIR", str(tmp_path / "out"))
    get_settings.cache_clear()
    yield tmp_path / "out"
    get_settings.cache_clear()


# ==================== SPECTRUM ====================

def test_spectrum_cube(capsys):
    assert main(["spectrum", str(GRAPHS / "cube.graph")]) == 0
    out = capsys.readouterr().out
    assert out.count("0.666666666667") == 3
    assert out.count("1.333333333333") == 3
    assert "pi-space dimension:   6" in out
    assert "25 entries" in out


def test_spectrum_triangle(capsys):
    assert main(["spectrum", str(GRAPHS / "triangle.graph")]) == 0
    out = capsys.readouterr().out
    assert "pi-space dimension:   0" in out
    assert "2pi-space dimension:  2" in out


def test_spectrum_with_leaves_fails(capsys):
    assert main(["spectrum", str(GRAPHS / "single_edge.graph")]) == 1
    err = capsys.readouterr().err
    assert "❌" in err
    assert "degree at least 2" in err


def test_spectrum_doubled_tree(capsys):
    assert main(["spectrum", str(GRAPHS / "tree.graph"), "--double-leaves"]) == 0
    assert "12 unit edges" in capsys.readouterr().out


def test_missing_graph_file(capsys, tmp_path):
    assert main(["spectrum", str(tmp_path / "nowhere.graph")]) == 1
    assert "❌" in capsys.readouterr().err


# ==================== VALIDATE ====================

def test_validate_cube(capsys):
    assert main(["--quiet", "validate", str(GRAPHS / "cube.graph"), "--n", "64"]) == 0
    out = capsys.readouterr().out
    assert "All checks within tolerance" in out
    assert "Orthonormality (N = 16" in out


def test_validate_dump_and_trace(capsys, output_dir):
    assert main(["--quiet", "validate", str(GRAPHS / "triangle.graph"), "--dump", "--trace"]) == 0
    assert (output_dir / "triangle_gram" / "gram_N16_m0.npy").exists()
    assert "Decision trace:" in capsys.readouterr().out


def test_validate_threshold_failure(capsys, monkeypatch):
    monkeypatch.setenv("QG_TOL_ROUNDTRIP", "1e-30")
    monkeypatch.setenv("QG_TOL_ORTHO", "1e-30")
    get_settings.cache_clear()
    try:
        assert main(["--quiet", "validate", str(GRAPHS / "cube.graph"), "--n", "16"]) == 1
    finally:
        get_settings.cache_clear()
    assert "Checks outside tolerance" in capsys.readouterr().out


# ==================== SIMULATE ====================

def test_simulate_writes_csv(capsys, tmp_path):
    out = tmp_path / "wave"
    assert main(["--quiet", "simulate", str(SCENARIOS / "wave_bridge.scn"), "--out", str(out)]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert len(files) == 8
    assert "field_t00001.0000.csv" in files


def test_simulate_defaults_to_output_dir(capsys, output_dir):
    assert main(["simulate", str(SCENARIOS / "heat_cube.scn")]) == 0
    assert (output_dir / "heat_cube" / "field_t00005.0000.csv").exists()
    assert "files written" in capsys.readouterr().out


def test_simulate_bad_scenario(capsys, tmp_path):
    bad = write_text(tmp_path / "bad.scn", "graph = x.graph\nequation = heat\ndt = -1\nt_end = 1\n")
    assert main(["simulate", str(bad)]) == 1
    assert "Invalid scenario" in capsys.readouterr().err


# ==================== BENCH ====================

def test_bench_smoke(capsys):
    assert main(["--quiet", "bench", str(GRAPHS / "cube.graph"), "--n", "16,32", "--seed", "7", "--repeats", "1"]) == 0
    out = capsys.readouterr().out
    assert "seed 7" in out
    assert len([line for line in out.splitlines() if line.strip().startswith("12")]) == 2


def test_bench_mismatch_exits_nonzero(capsys, monkeypatch):
    def broken(basis, f, workers=None):
        c = forward(basis, f, workers)
        return c.with_values(c.values + 1e-3)

    monkeypatch.setattr(validation, "forward", broken)
    assert main(["--quiet", "bench", str(GRAPHS / "cube.graph"), "--n", "16", "--repeats", "1"]) == 1
    assert "differ" in capsys.readouterr().err


def test_bench_rejects_bad_list():
    with pytest.raises(SystemExit):
        main(["bench", str(GRAPHS / "cube.graph"), "--n", "16,x"])


# ==================== PATH / EXPORT / TRANSFORM ====================

def test_path_projection(capsys, triangle_field):
    assert main(["path", str(GRAPHS / "triangle.graph"), "--vertices", "0,1,2", "--field", str(triangle_field)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "s,re,im,abs2"
    assert len(lines) == 1 + 2 * 8 + 1
    s, re = (float(v) for v in lines[5].split(",")[:2])
    assert s == pytest.approx(0.5)
    assert re == pytest.approx(1.0)


def test_path_rejects_field_from_another_graph(capsys, triangle_field):
    assert main(["path", str(GRAPHS / "cube.graph"), "--vertices", "0,1", "--field", str(triangle_field)]) == 1


def test_export_basis(tmp_path):
    out = tmp_path / "basis.csv"
    assert main(["--quiet", "export-basis", str(GRAPHS / "triangle.graph"), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,omega,edge,re_gamma,im_gamma,re_delta,im_delta"
    assert len(lines) == 1 + 7 * 3
    k, omega, edge, re_gamma, im_gamma = lines[1].split(",")[:5]
    assert (k, edge) == ("0", "0")
    assert float(omega) == 0.0
    assert float(re_gamma) == pytest.approx(1.0 / (2.0 * np.sqrt(3.0)), abs=1e-15)
    assert float(im_gamma) == 0.0


def test_transform_round_trip(capsys, triangle_field, tmp_path):
    out = tmp_path / "coefficients.csv"
    assert main(["--quiet", "transform", str(GRAPHS / "triangle.graph"), "--field", str(triangle_field),
                 "--out", str(out)]) == 0
    report = capsys.readouterr().out
    assert "round trip max error" in report
    assert "not continuous" not in report
    lines = out.read_text().splitlines()
    assert lines[0] == "k,m,re,im"
    assert len(lines) == 1 + 7 * 4


def test_transform_n_mismatch(capsys, triangle_field):
    assert main(["transform", str(GRAPHS / "triangle.graph"), "--field", str(triangle_field), "--n", "16"]) == 1
    assert "--n asked for 16" in capsys.readouterr().err


def test_transform_edge_mismatch(capsys, triangle_field):
    assert main(["transform", str(GRAPHS / "cube.graph"), "--field", str(triangle_field)]) == 1
    assert "graph has 12" in capsys.readouterr().err
