import json
import math

import numpy as np
import pytest

from pdwtiling import export, tiling
from pdwtiling.errors import DomainError
from pdwtiling.tiling import Coords

PI = math.pi


def same_tiling(s, t):
    assert s.n == t.n and s.skeleton.faces == t.skeleton.faces
    for v in t.skeleton.vertices:
        assert np.array_equal(s.point(v), t.point(v))
    assert tiling.layout_of(s) == tiling.layout_of(t)
    assert s.values == t.values


def test_json_schema(pair9):
    iso, _ = pair9
    d = json.loads(export.dumps(iso))
    assert d["n"] == 6
    assert d["phi"] == pytest.approx(-PI / 3, abs=1e-12)
    assert d["a"] == pytest.approx(math.acos(1 / 3), abs=1e-12)
    assert len(d["vertices"]) == 14 and len(d["faces"]) == 12
    v = d["vertices"][0]
    assert set(v) == {"id", "xyz"} and len(v["xyz"]) == 3
    f = d["faces"][0]
    assert set(f) == {"corners", "angles", "edges"}
    assert all(len(f[k]) == 4 for k in f)
    assert f["corners"] == ["N", "v0", "v1", "v2"]


def test_json_roundtrip_is_exact(pair9, tmp_path):
    for t in pair9:
        same_tiling(export.loads(export.dumps(t)), t)
        path = tmp_path / "t.json"
        export.save(t, path)
        same_tiling(export.load(path), t)


def test_json_without_tile_key_uses_coordinates():
    t = tiling.from_coords(5, Coords(0.4, 0.7))
    d = json.loads(export.dumps(t))
    del d["tile"]
    back = export.tiling_from_dict(d)
    for k, x in t.values.items():
        assert back.values[k] == pytest.approx(x, abs=1e-12)
    assert tiling.verify(back).ok


def test_json_errors(pair9):
    iso, _ = pair9
    with pytest.raises(DomainError):
        export.loads("{not json")
    with pytest.raises(DomainError):
        export.loads('{"n": 6}')
    d = json.loads(export.dumps(iso))
    d["faces"][3]["angles"][0] += 0.1
    with pytest.raises(DomainError, match="face 3"):
        export.tiling_from_dict(d)


def test_obj_vertices_roundtrip(pair9):
    iso, _ = pair9
    text = export.to_obj(iso)
    V = export.obj_vertices(text)
    names = iso.skeleton.vertices
    for i, v in enumerate(names):
        assert np.allclose(V[i], iso.point(v), atol=1e-9, rtol=0)
    # every arc interior point lies on the sphere
    assert np.allclose(np.linalg.norm(V, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("chords", [1, 4, 32])
def test_obj_structure(pair9, chords):
    iso, _ = pair9
    text = export.to_obj(iso, chords)
    lines = text.splitlines()
    E, F, V = 24, 12, 14
    assert sum(ln.startswith("v ") for ln in lines) == V + E * (chords - 1)
    ls = [ln for ln in lines if ln.startswith("l ")]
    fs = [ln for ln in lines if ln.startswith("f ")]
    assert len(ls) == E and all(len(ln.split()) == chords + 2 for ln in ls)
    assert len(fs) == F and all(len(ln.split()) == 4 * chords + 1 for ln in fs)


def test_obj_arcs_follow_great_circles(pair9):
    iso, _ = pair9
    text = export.to_obj(iso, 8)
    V = export.obj_vertices(text)
    for ln in (x for x in text.splitlines() if x.startswith("l ")):
        ids = [int(s) - 1 for s in ln.split()[1:]]
        p, q = V[ids[0]], V[ids[-1]]
        normal = np.cross(p, q)
        normal /= np.linalg.norm(normal)
        steps = [math.acos(np.clip(np.dot(V[i], V[j]), -1, 1)) for i, j in zip(ids, ids[1:])]
        assert np.allclose(V[ids] @ normal, 0.0, atol=1e-12)
        assert max(steps) - min(steps) < 1e-9


def test_obj_rejects_zero_chords(pair9):
    with pytest.raises(DomainError):
        export.to_obj(pair9[0], 0)
