import io
import json
import math
import subprocess
import sys

import pytest

from pdwtiling import cli, export, tiling
from pdwtiling.errors import DomainError

PI = math.pi
ALPHA = "acos(-1/(2*sqrt(7)))"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_expr():
    assert cli.parse_expr("4*pi/3") == pytest.approx(4 * PI / 3)
    assert cli.parse_expr(ALPHA) == math.acos(-1 / (2 * math.sqrt(7)))
    assert cli.parse_expr("arccos(1/3)") == math.acos(1 / 3)
    assert cli.parse_expr("-2**2") == -4
    for bad in ("__import__('os')", "x", "1/0", "acos(2)", "pi.real", ""):
        with pytest.raises(DomainError):
            cli.parse_expr(bad)


def test_run_config_invariants():
    with pytest.raises(DomainError):
        cli.RunConfig("phase", res=1)
    with pytest.raises(DomainError):
        cli.RunConfig("tiling", tol=0.0)


def test_classify_special():
    code, out, _ = call("classify", "--n", "6", "--alpha", ALPHA, "--gamma", "4*pi/3")
    assert code == 0
    d = json.loads(out)
    assert d["region"] == "B3" and d["multiplicity"] == 1
    s, = d["solutions"]
    assert s["branch"] == "double" and s["a"] == pytest.approx(math.acos(1 / 3), abs=1e-12)


def test_classify_in_degrees():
    code, out, _ = call("classify", "--n", "6", "--alpha", "120", "--gamma", "120", "--deg")
    assert code == 0 and json.loads(out)["region"] == "B1"


def test_classify_singular_angle_is_domain_error():
    code, _, err = call("classify", "--n", "6", "--alpha", "pi/2", "--gamma", "2")
    assert code == 2 and "pi/2" in err


def test_tile_command():
    code, out, _ = call("tile", "--n", "6", "--alpha", "0.55*pi", "--gamma", "1.32*pi")
    assert code == 0
    quads = json.loads(out)
    assert len(quads) == 2


def test_tiling_json_and_obj(tmp_path):
    code, out, err = call("tiling", "--n", "6", "--phi", "-pi/3", "--a", "acos(1/3)")
    assert code == 0 and "edge_agreement" in err
    t = export.loads(out)
    assert tiling.verify(t).ok
    path = tmp_path / "t.obj"
    code, out, _ = call("tiling", "--n", "6", "--alpha", ALPHA, "--gamma", "4*pi/3",
                        "--format", "obj", "--chords", "4", "--out", str(path))
    assert code == 0 and out == ""
    V = export.obj_vertices(path.read_text())
    assert len(V) == 14 + 24 * 3


def test_tiling_outside_rectangles():
    code, _, err = call("tiling", "--n", "6", "--phi", "pi/6", "--a", "pi/2")
    assert code == 2
    assert "A1 needs" in err and "A4 needs" in err


def test_tiling_verification_failure():
    code, _, err = call("tiling", "--n", "6", "--phi", "0.3", "--a", "0.8", "--tol", "1e-30")
    assert code == 3 and "FAIL" in err


def test_tiling_needs_parameters():
    assert call("tiling", "--n", "6")[0] == 2
    assert call("tiling", "--n", "6", "--phi", "0.3")[0] == 2
    # region with no tile
    assert call("tiling", "--n", "6", "--alpha", "0.1", "--gamma", "0.1")[0] == 2


def test_matchings():
    code, out, _ = call("matchings", "--faces", "6")
    d = json.loads(out)
    assert code == 0 and d["count"] == 8 and len(d["matchings"]) == 8 and d["orbits"] == 1
    assert call("matchings", "--faces", "7")[0] == 2


def test_phase_csv_is_byte_stable(tmp_path):
    code, first, _ = call("phase", "--n", "4", "--res", "16")
    assert code == 0
    _, second, _ = call("phase", "--n", "4", "--res", "16")
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "alpha,gamma,region,multiplicity,a_minus,a_plus,discriminant"
    assert len(lines) == 1 + 16 * 16
    path = tmp_path / "p.csv"
    call("phase", "--n", "4", "--res", "16", "--out", str(path))
    assert path.read_text() == first


def test_phase_axis_guard_band():
    ax = cli.phase_axis(4)     # cell centres pi/4, 3pi/4, 5pi/4, 7pi/4
    assert ax == pytest.approx([PI / 4, 3 * PI / 4, 5 * PI / 4, 7 * PI / 4])
    for res in (2, 3, 8, 200):
        for x in cli.phase_axis(res):
            assert all(abs(x - b) > cli.GUARD_BAND for b in (PI / 2, PI))


def test_phase_rows_consistent_with_multiplicity():
    for row in cli.phase_rows(6, 24):
        mult = int(row[3])
        filled = sum(1 for x in row[4:6] if x)
        assert filled == (2 if mult == 2 else mult) or row[4] == row[5] != ""


def test_search_command():
    code, out, _ = call("search", "--n", "6", "--alpha", "2*pi/3", "--gamma", "2*pi/3", "--reflect")
    assert code == 0
    d, = json.loads(out)
    assert len(d["layouts"]) == 1 and d["layouts"][0]["isohedral"]


def test_special_command(tmp_path):
    code, out, _ = call("special", "--out", str(tmp_path))
    assert code == 0
    d = json.loads(out)
    assert d["isohedral"]["isohedral"] and not d["non_isohedral"]["isohedral"]
    assert d["isohedral"]["verified"] and d["non_isohedral"]["verified"]
    for name in ("isohedral", "non_isohedral"):
        assert tiling.verify(export.load(tmp_path / f"{name}.json")).ok


@pytest.mark.parametrize("argv", [[], ["bogus"], ["classify", "--n", "6"],
                                  ["classify", "--n", "6", "--alpha", "1", "--gamma", "1", "--what"],
                                  ["phase", "--n", "6", "--res", "1"]])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "pdwtiling.cli", "matchings", "--faces", "6"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["count"] == 8
    r = subprocess.run([sys.executable, "-m", "pdwtiling.cli", "nope"], capture_output=True, text=True)
    assert r.returncode == 2
