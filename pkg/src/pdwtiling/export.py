"""JSON and OBJ serialization of tilings."""
from __future__ import annotations

import json
import math

import numpy as np

from . import pdwgraph, tiling
from .errors import DomainError
from .pdwgraph import Labeling, face_edges
from .sphgeom import UnitVector

MATCH_TOL = 1e-9


def tiling_to_dict(t: tiling.Tiling) -> dict:
    c = tiling.to_coords(t)
    sk = t.skeleton
    faces = []
    for k, face in enumerate(sk.faces):
        labels = t.face_labels(k)
        faces.append({
            "corners": list(face),
            "angles": [ang for ang, _ in labels],
            "edges": [e for _, e in labels],
        })
    return {
        "n": t.n,
        "phi": c.phi,
        "a": c.a,
        "vertices": [{"id": v, "xyz": list(t.positions[v])} for v in sk.vertices],
        "faces": faces,
        # optional: the reference tile, so any layout can be read back
        "tile": {k: float(x) for k, x in t.values.items()},
    }


def dumps(t: tiling.Tiling) -> str:
    # repr-based float output is the shortest string that round-trips
    return json.dumps(tiling_to_dict(t), indent=1)


def _tile_values(d: dict) -> dict:
    if "tile" in d:
        return {k: float(x) for k, x in d["tile"].items()}
    ref = tiling.from_coords(int(d["n"]), tiling.Coords(float(d["phi"]), float(d["a"])))
    return dict(ref.values)


def tiling_from_dict(d: dict) -> tiling.Tiling:
    try:
        n = int(d["n"])
        sk = pdwgraph.build_skeleton(2 * n)
        pos = {v["id"]: UnitVector.from_array(v["xyz"]) for v in d["vertices"]}
        faces = d["faces"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed tiling document: {exc}") from exc
    if set(pos) != set(sk.vertices) or len(faces) != sk.F:
        raise DomainError("vertex ids or face count do not fit the skeleton")
    values = _tile_values(d)
    placements = [tiling.Placement(m, s) for m in (False, True) for s in range(4)]
    corners, edges = {}, {}
    for k, face in enumerate(faces):
        want = list(zip(face["angles"], face["edges"]))
        order = face["corners"]
        if tuple(order) != sk.faces[k]:
            raise DomainError(f"face {k} corners {order} differ from the skeleton")
        for pl in placements:
            cyc = pl.cycle()
            if all(abs(values[c] - x) <= MATCH_TOL and abs(values[e] - y) <= MATCH_TOL
                   for (c, e), (x, y) in zip(cyc, want)):
                break
        else:
            raise DomainError(f"face {k} labels are not a copy of the tile")
        for v, e, (cn, en) in zip(sk.faces[k], face_edges(sk.faces[k]), cyc):
            corners[(k, v)] = cn
            edges[(k, e)] = en
    return tiling.Tiling(n, sk, pos, Labeling(values, corners, edges))


def loads(text: str) -> tiling.Tiling:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not JSON: {exc}") from exc
    return tiling_from_dict(d)


def save(t: tiling.Tiling, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(t) + "\n")


def load(path) -> tiling.Tiling:
    with open(path) as fh:
        return loads(fh.read())


# -- OBJ -----------------------------------------------------------------------

def arc_points(p: np.ndarray, q: np.ndarray, chords: int) -> np.ndarray:
    """Points along the minor arc p -> q splitting it into ``chords`` pieces."""
    omega = math.atan2(np.linalg.norm(np.cross(p, q)), float(np.dot(p, q)))
    ts = np.linspace(0.0, 1.0, chords + 1)
    if omega < 1e-15:
        return np.array([p for _ in ts])
    s = math.sin(omega)
    return np.array([(math.sin((1 - t) * omega) * p + math.sin(t * omega) * q) / s for t in ts])


def to_obj(t: tiling.Tiling, chords: int = 32) -> str:
    """Wavefront OBJ text: tiling vertices first, then arc interiors.

    Each edge becomes an ``l`` polyline of ``chords`` segments; each face an
    ``f`` polygon through its subdivided boundary.
    """
    if chords < 1:
        raise DomainError("chords must be >= 1")
    sk = t.skeleton
    lines = [f"# spherical tiling n={t.n}, {sk.F} faces, {chords} chords per edge"]
    index = {}
    for v in sk.vertices:
        x, y, z = t.positions[v]
        index[v] = len(index) + 1
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    count = len(index)
    arcs = {}
    for e in sk.edges:
        u, w = sorted(e, key=sk.vertices.index)
        pts = arc_points(t.point(u), t.point(w), chords)
        ids = [index[u]]
        for p in pts[1:-1]:
            count += 1
            lines.append(f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
            ids.append(count)
        ids.append(index[w])
        arcs[(u, w)] = ids
    for (u, w), ids in arcs.items():
        lines.append("l " + " ".join(map(str, ids)))
    for face in sk.faces:
        ring = []
        for i, u in enumerate(face):
            w = face[(i + 1) % len(face)]
            ids = arcs[(u, w)] if (u, w) in arcs else arcs[(w, u)][::-1]
            ring.extend(ids[:-1])
        lines.append("f " + " ".join(map(str, ring)))
    return "\n".join(lines) + "\n"


def obj_vertices(text: str) -> np.ndarray:
    """All ``v`` records of an OBJ document, in order."""
    rows = [list(map(float, ln.split()[1:4])) for ln in text.splitlines() if ln.startswith("v ")]
    return np.array(rows)
