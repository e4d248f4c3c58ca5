"""Realized tilings over pseudo-double wheels.

A tiling by ``2n`` copies of one quadrangle sits on the skeleton with
``F = 2n`` faces. ``assemble`` and ``from_coords`` produce the standard
layout (every face read beta, alpha, delta, gamma from its hub);
``exhaustive_layouts`` searches all layouts of a given tile.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import pdwgraph, quadcore, sphgeom
from .errors import DomainError, VerificationError
from .pdwgraph import Labeling, PdwSkeleton, face_edges
from .quadcore import Quadrangle, TileParams
from .sphgeom import UnitVector

PI = math.pi
TWO_PI = 2.0 * math.pi
TOL = 1e-9
AXIS_TOL = 1e-7
PLACE_TOL = 1e-6

DIRECT = (("beta", "a"), ("alpha", "b"), ("delta", "c"), ("gamma", "a"))
MIRRORED = (("beta", "a"), ("gamma", "c"), ("delta", "b"), ("alpha", "a"))


@dataclass(frozen=True)
class Coords:
    phi: float
    a: float


@dataclass(frozen=True)
class Tiling:
    n: int
    skeleton: PdwSkeleton
    positions: dict = field(compare=False)   # vertex name -> UnitVector
    labeling: Labeling = field(compare=False)

    def point(self, v: str) -> np.ndarray:
        return self.positions[v].xyz

    def face_points(self, k: int) -> np.ndarray:
        return np.array([self.point(v) for v in self.skeleton.faces[k]])

    @property
    def values(self) -> dict:
        return self.labeling.values

    def face_labels(self, k: int) -> list[tuple[float, float]]:
        """(corner angle, following edge length) counterclockwise around face k."""
        vals = self.labeling.values
        return [(vals[c], vals[e]) for c, e in self.labeling.face_cycle(self.skeleton, k)]

    def reference_cycle(self) -> list[tuple[float, float]]:
        vals = self.labeling.values
        return [(vals[c], vals[e]) for c, e in DIRECT]


def tile_values(q: Quadrangle) -> dict:
    return dict(alpha=q.alpha, beta=q.beta, gamma=q.gamma, delta=q.delta, a=q.a, b=q.b, c=q.c)


def _pdw_positions(n: int, phi_prime: float, a: float) -> dict:
    F = 2 * n
    pos = {"N": UnitVector(0.0, 0.0, 1.0), "S": UnitVector(0.0, 0.0, -1.0)}
    for i in range(n):
        lon = TWO_PI * i / n
        pos[f"v{2 * i}"] = sphgeom.from_polar(a, lon)
        pos[f"v{(2 * i + 1) % F}"] = sphgeom.from_polar(PI - a, lon + phi_prime)
    return pos


def assemble(n: int, q: Quadrangle) -> Tiling:
    """Lay 2n copies of ``q`` around the poles in the standard pattern."""
    if q.n != n:
        raise DomainError(f"tile is for n={q.n}, not {n}")
    bad = quadcore.check_quadrangle(q)
    if bad:
        raise DomainError("not a valid tile: " + "; ".join(bad))
    phi_prime = math.atan2(q.v1.y, q.v1.x) - math.atan2(q.v0.y, q.v0.x)
    sk = pdwgraph.build_skeleton(2 * n)
    pos = _pdw_positions(n, phi_prime, q.a)
    return Tiling(n, sk, pos, pdwgraph.standard_labeling(sk, tile_values(q)))


# -- verification ------------------------------------------------------------

@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)   # name -> (passed, max residual)
    tol: float = TOL

    def add(self, name: str, residual: float, passed: bool | None = None):
        ok = residual <= self.tol if passed is None else passed
        self.checks[name] = (bool(ok), float(residual))

    @property
    def ok(self) -> bool:
        return all(p for p, _ in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, (p, _) in self.checks.items() if not p]

    def __str__(self):
        return "\n".join(f"{k:16s} {'pass' if p else 'FAIL'}  {r:.3e}"
                         for k, (p, r) in self.checks.items())


def _cyclic_match(cycle, ref) -> float:
    """Smallest max-deviation between ``cycle`` and a rotation of ``ref``."""
    best = math.inf
    k = len(ref)
    for s in range(k):
        dev = max(max(abs(cycle[j][0] - ref[(j + s) % k][0]),
                      abs(cycle[j][1] - ref[(j + s) % k][1])) for j in range(k))
        best = min(best, dev)
    return best


def _mirror_cycle(ref):
    """The same tile read clockwise, as (corner, following edge) pairs."""
    k = len(ref)
    return [(ref[-j % k][0], ref[(-j - 1) % k][1]) for j in range(k)]


def verify(t: Tiling, tol: float = TOL) -> VerificationReport:
    """Check the defining properties of a monohedral edge-to-edge tiling."""
    rep = VerificationReport(tol=tol)
    sk = t.skeleton
    angles, areas = {}, []
    flat = 0.0
    ok_geom = True
    for k, face in enumerate(sk.faces):
        pts = t.face_points(k)
        try:
            angs = sphgeom.interior_angles(pts)
        except DomainError:
            ok_geom = False
            angs = [math.nan] * 4
        for v, x in zip(face, angs):
            angles[(k, v)] = x
        areas.append(sum(angs) - 2 * PI)
        flat = max(flat, max((1.0 if abs(x - PI) <= tol else 0.0) for x in angs))

    # edge agreement: realized arc against the label on both sides
    edge_res = 0.0
    for k, face in enumerate(sk.faces):
        for e in face_edges(face):
            u, w = tuple(e)
            d = sphgeom.distance(t.point(u), t.point(w))
            edge_res = max(edge_res, abs(d - t.labeling.edge_value(k, e)))
    rep.add("edge_agreement", _nan_inf(edge_res))

    sums = {}
    for (k, v), x in angles.items():
        sums[v] = sums.get(v, 0.0) + x
    rep.add("angle_sums", _nan_inf(max(abs(s - TWO_PI) for s in sums.values())))
    rep.add("area_sum", _nan_inf(abs(sum(areas) - 4 * PI)))

    label_res = max(abs(angles[(k, v)] - t.labeling.corner_value(k, v))
                    for k, face in enumerate(sk.faces) for v in face)
    rep.add("corner_labels", _nan_inf(label_res))

    ref = t.reference_cycle()
    mir = _mirror_cycle(ref)
    cong = 0.0
    for k, face in enumerate(sk.faces):
        pts = t.face_points(k)
        cyc = [(angles[(k, v)], sphgeom.distance(pts[j], pts[(j + 1) % 4]))
               for j, v in enumerate(face)]
        cong = max(cong, min(_cyclic_match(cyc, ref), _cyclic_match(cyc, mir)))
    rep.add("congruence", _nan_inf(cong))
    rep.add("no_flat_angle", flat, passed=(flat == 0.0 and ok_geom))
    return rep


def _nan_inf(x: float) -> float:
    return math.inf if math.isnan(x) else x


def require_verified(t: Tiling) -> Tiling:
    rep = verify(t)
    if not rep.ok:
        raise VerificationError("tiling failed: " + ", ".join(rep.failures))
    return t


# -- the <phi, a> coordinates -------------------------------------------------

def rectangles(n: int) -> dict[int, tuple[tuple[float, float], tuple[float, float]]]:
    """The open rectangles A^(1..4) as ((phi_lo, phi_hi), (a_lo, a_hi))."""
    b = TWO_PI / n
    return {
        1: ((b - PI, 0.0), (0.0, PI / 2)),
        2: ((0.0, b), (0.0, PI / 2)),
        3: ((b, PI), (0.0, PI / 2)),
        4: ((0.0, b), (PI / 2, PI)),
    }


def region_of_coords(n: int, c: Coords) -> int | None:
    """Index 1..4 of the open rectangle holding ``c``; None when outside."""
    for i, ((p0, p1), (a0, a1)) in rectangles(n).items():
        if p0 < c.phi < p1 and a0 < c.a < a1:
            return i
    return None


def _bounds_message(n: int, c: Coords) -> str:
    parts = []
    for i, ((p0, p1), (a0, a1)) in rectangles(n).items():
        bad = []
        if not p0 < c.phi < p1:
            bad.append(f"{p0:.6g} < phi < {p1:.6g}")
        if not a0 < c.a < a1:
            bad.append(f"{a0:.6g} < a < {a1:.6g}")
        parts.append(f"A{i} needs " + " and ".join(bad))
    return f"(phi, a) = ({c.phi!r}, {c.a!r}) lies in no A_{n} rectangle: " + "; ".join(parts)


def from_coords(n: int, c: Coords) -> Tiling:
    """The standard tiling with coordinates ``c``."""
    if n < 3 or int(n) != n:
        raise DomainError(f"n must be an integer >= 3, got {n!r}")
    if region_of_coords(n, c) is None:
        raise DomainError(_bounds_message(n, c))
    pos = _pdw_positions(n, TWO_PI / n - c.phi, c.a)
    q = _quadrangle_from(n, [pos[v] for v in ("N", "v0", "v1", "v2")])
    sk = pdwgraph.build_skeleton(2 * n)
    return Tiling(n, sk, pos, pdwgraph.standard_labeling(sk, tile_values(q)))


def _quadrangle_from(n: int, corners) -> Quadrangle:
    N, v0, v1, v2 = corners
    beta, alpha, delta, gamma = sphgeom.interior_angles([N, v0, v1, v2])
    return Quadrangle(
        n=n, N=N, v0=v0, v1=v1, v2=v2, alpha=alpha, beta=beta, gamma=gamma, delta=delta,
        a=sphgeom.distance(N, v0), b=sphgeom.distance(v0, v1), c=sphgeom.distance(v1, v2),
    )


def to_coords(t: Tiling) -> Coords:
    """<phi, a> of a tiling: phi is the longitude of v2 minus that of v1."""
    N, v0, v1 = t.point("N"), t.point("v0"), t.point("v1")
    phi_prime = sphgeom.corner_angle(v0, N, v1)        # longitude of v1 from v0
    phi = TWO_PI / t.n - phi_prime
    if phi <= TWO_PI / t.n - PI:
        phi += TWO_PI
    return Coords(phi, sphgeom.distance(N, v0))


def tile_of(t: Tiling) -> Quadrangle:
    """The face 0 tile as a Quadrangle in its realized position."""
    return _quadrangle_from(t.n, [t.positions[v] for v in t.skeleton.faces[0]])


# -- symmetry ------------------------------------------------------------------

@dataclass
class IsohedralReport:
    isohedral: bool
    transitive: bool
    preserving: list                   # label-preserving automorphisms
    orbits: list                       # face orbits of that subgroup
    witness_faces: tuple | None        # two faces no preserving map relates
    witness_automorphism: object | None

    def __bool__(self):
        return self.isohedral


def is_isohedral(t: Tiling) -> IsohedralReport:
    """Every graph automorphism must respect the corner and edge labels.

    Only automorphisms keeping the hub pair {N, S} are quantified over. For
    n >= 4 that is all of them; on the cube (n = 3) the others move a hub
    onto the rim and can never match a generic tile.
    """
    sk = t.skeleton
    autos = [g for g in pdwgraph.automorphisms(sk) if {g("N"), g("S")} == {"N", "S"}]
    keep, bad = [], None
    for g in autos:
        if pdwgraph.is_label_preserving(sk, g, t.labeling):
            keep.append(g)
        elif bad is None:
            bad = g
    orbits = pdwgraph.face_orbits(sk, keep)
    transitive = len(orbits) == 1
    witness = None if transitive else (orbits[0][0], orbits[1][0])
    return IsohedralReport(bad is None, transitive, keep, orbits, witness, bad)


@dataclass(frozen=True)
class Axis:
    u: np.ndarray
    order: int
    through: str      # "vertex", "edge" or "face"


def _match_index(P: np.ndarray, Q: np.ndarray, tol: float):
    """Index of the point of P closest to each row of Q, or None if any is far."""
    d = np.linalg.norm(Q[:, None, :] - P[None, :, :], axis=2)
    idx = d.argmin(axis=1)
    if d[np.arange(len(Q)), idx].max() > tol:
        return None
    return idx


def _symmetry_ok(t: Tiling, R: np.ndarray, names, P, tol) -> bool:
    idx = _match_index(P, P @ R.T, tol)
    if idx is None or len(set(idx.tolist())) != len(names):
        return False
    img = {v: names[i] for v, i in zip(names, idx)}
    sk = t.skeleton
    for k, face in enumerate(sk.faces):
        try:
            gk = sk.face_index(img[v] for v in face)
        except DomainError:
            return False
        for v in face:
            if abs(t.labeling.corner_value(gk, img[v]) - t.labeling.corner_value(k, v)) > TOL:
                return False
    return True


def detect_axes(t: Tiling, tol: float = AXIS_TOL) -> list[Axis]:
    """Rotation axes of the labeled tiling with their maximal orders.

    Candidates pass through vertices, edge midpoints and face centroids.
    """
    sk = t.skeleton
    names = list(sk.vertices)
    P = np.array([t.point(v) for v in names])
    cands = [(p, "vertex") for p in P]
    for e in sk.edges:
        u, w = tuple(e)
        m = t.point(u) + t.point(w)
        if np.linalg.norm(m) > 1e-9:
            cands.append((m / np.linalg.norm(m), "edge"))
    for k in range(sk.F):
        m = t.face_points(k).sum(axis=0)
        if np.linalg.norm(m) > 1e-9:
            cands.append((m / np.linalg.norm(m), "face"))

    axes: list[Axis] = []
    for u, kind in cands:
        if any(abs(abs(float(np.dot(u, ax.u))) - 1.0) < 1e-12 or
               np.linalg.norm(np.cross(u, ax.u)) < tol for ax in axes):
            continue
        best = 1
        for k in range(len(names), 1, -1):
            if _symmetry_ok(t, sphgeom.rotation_matrix(u, TWO_PI / k), names, P, tol):
                best = k
                break
        if best > 1:
            axes.append(Axis(np.asarray(u, dtype=float), best, kind))
    axes.sort(key=lambda ax: (-ax.order, tuple(np.round(ax.u, 9))))
    return axes


def has_dihedral_axes(t: Tiling, n: int, axes=None) -> bool:
    """An n-fold axis plus n distinct 2-fold axes perpendicular to it."""
    axes = detect_axes(t) if axes is None else axes
    for main in axes:
        if main.order % n:
            continue
        perp = [ax for ax in axes if ax.order % 2 == 0
                and abs(float(np.dot(ax.u, main.u))) < AXIS_TOL]
        if len(perp) >= n:
            return True
    return False


# -- layout search ---------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    mirrored: bool
    shift: int

    def cycle(self):
        cyc = MIRRORED if self.mirrored else DIRECT
        return [cyc[(j + self.shift) % 4] for j in range(4)]


def _value_classes(values: dict, names) -> dict:
    """Map each name to the first name with the same value (within TOL)."""
    out = {}
    for nm in names:
        out[nm] = next(m for m in names if abs(values[m] - values[nm]) <= TOL)
    return out


def _labeling_from(sk: PdwSkeleton, values: dict, layout) -> Labeling:
    corners, edges = {}, {}
    for k, (face, pl) in enumerate(zip(sk.faces, layout)):
        for v, e, (cn, en) in zip(face, face_edges(face), pl.cycle()):
            corners[(k, v)] = cn
            edges[(k, e)] = en
    return Labeling(dict(values), corners, edges)


def _combinatorial_layouts(sk: PdwSkeleton, values: dict, allow_reflection: bool):
    """Backtrack over face placements; edges and vertex angle sums must fit."""
    options = [Placement(False, s) for s in range(4)]
    if allow_reflection:
        options += [Placement(True, s) for s in range(4)]
    # placements reading the same values around the face are interchangeable
    classes = _value_classes(values, list(values))
    distinct = {}
    for pl in options:
        distinct.setdefault(tuple((classes[c], classes[e]) for c, e in pl.cycle()), pl)
    options = list(distinct.values())
    faces = sk.faces
    F = len(faces)
    at_vertex = {v: sum(v in f for f in faces) for v in sk.vertices}
    min_angle = min(values[c] for c, _ in DIRECT)
    ang_sum = {v: 0.0 for v in sk.vertices}
    seen = {v: 0 for v in sk.vertices}
    edge_len: dict = {}
    layout: list[Placement] = []
    out = []

    def place(k):
        if k == F:
            out.append(tuple(layout))
            return
        face = faces[k]
        fe = face_edges(face)
        for pl in options:
            cyc = pl.cycle()
            ok = True
            for e, (_, en) in zip(fe, cyc):
                if e in edge_len and abs(edge_len[e] - values[en]) > TOL:
                    ok = False
                    break
            if not ok:
                continue
            for v, (cn, _) in zip(face, cyc):
                s = ang_sum[v] + values[cn]
                left = at_vertex[v] - seen[v] - 1
                if left == 0:
                    ok = abs(s - TWO_PI) <= 1e-8
                else:
                    ok = s + left * min_angle <= TWO_PI + 1e-8
                if not ok:
                    break
            if not ok:
                continue
            new_edges = [e for e in fe if e not in edge_len]
            for e, (_, en) in zip(fe, cyc):
                if e in new_edges:
                    edge_len[e] = values[en]
            for v, (cn, _) in zip(face, cyc):
                ang_sum[v] += values[cn]
                seen[v] += 1
            layout.append(pl)
            place(k + 1)
            layout.pop()
            for v, (cn, _) in zip(face, cyc):
                ang_sum[v] -= values[cn]
                seen[v] -= 1
            for e in new_edges:
                del edge_len[e]

    place(0)
    return out


def _tile_points(q: Quadrangle, mirrored: bool) -> dict:
    """Tile corners by name; the mirror copy is reflected in the xz-plane."""
    pts = dict(beta=q.N.xyz, alpha=q.v0.xyz, delta=q.v1.xyz, gamma=q.v2.xyz)
    if mirrored:
        flip = np.array([1.0, -1.0, 1.0])
        pts = {k: v * flip for k, v in pts.items()}
    return pts


def _realize(sk: PdwSkeleton, q: Quadrangle, layout) -> dict | None:
    """Place the tiles face by face, breadth-first from face 0."""
    src = []
    for face, pl in zip(sk.faces, layout):
        tp = _tile_points(q, pl.mirrored)
        src.append(np.array([tp[cn] for cn, _ in pl.cycle()]))
    pos: dict[str, np.ndarray] = dict(zip(sk.faces[0], src[0]))
    done = {0}
    queue = deque([0])
    ef = sk.edge_faces()
    while queue:
        k = queue.popleft()
        for e in face_edges(sk.faces[k]):
            for j in ef[e]:
                if j in done:
                    continue
                face = sk.faces[j]
                known = [i for i, v in enumerate(face) if v in pos]
                R = sphgeom.best_rotation(src[j][known], np.array([pos[face[i]] for i in known]))
                placed = src[j] @ R.T
                for i, v in enumerate(face):
                    if v in pos:
                        if np.linalg.norm(pos[v] - placed[i]) > PLACE_TOL:
                            return None
                    else:
                        pos[v] = placed[i]
                done.add(j)
                queue.append(j)
    return pos


def _normalizing_rotation(N: np.ndarray, v0: np.ndarray) -> np.ndarray:
    z = N / np.linalg.norm(N)
    x = v0 - np.dot(v0, z) * z
    x /= np.linalg.norm(x)
    y = np.cross(z, x)
    return np.array([x, y, z])


def _layout_key(sk: PdwSkeleton, lab: Labeling, classes: dict, g=None):
    """Labels as value classes, transported by automorphism ``g``."""
    m = g.mapping if g is not None else {v: v for v in sk.vertices}
    items = []
    for k, face in enumerate(sk.faces):
        gk = sk.face_index(m[v] for v in face) if g is not None else k
        for v in face:
            items.append(((gk, m[v]), classes[lab.corners[(k, v)]]))
        for e in face_edges(face):
            ge = frozenset(m[v] for v in e)
            items.append(((gk, tuple(sorted(ge, key=pdwgraph._vkey))),
                          classes[lab.edges[(k, e)]]))
    items.sort(key=lambda kv: (kv[0][0], str(kv[0][1])))
    return tuple(items)


def tiling_from_layout(n: int, q: Quadrangle, layout) -> Tiling | None:
    sk = pdwgraph.build_skeleton(2 * n)
    pos = _realize(sk, q, layout)
    if pos is None:
        return None
    R = _normalizing_rotation(pos["N"], pos["v0"])
    positions = {v: UnitVector.from_array(R @ p) for v, p in pos.items()}
    return Tiling(n, sk, positions, _labeling_from(sk, tile_values(q), layout))


def exhaustive_layouts(n: int, q: Quadrangle, allow_reflection: bool = True) -> list[Tiling]:
    """All tilings of the sphere by copies of ``q`` over PDW with 2n faces.

    Results are representatives modulo rotations, ordered canonically.
    """
    bad = quadcore.check_quadrangle(q)
    if bad:
        raise DomainError("not a valid tile: " + "; ".join(bad))
    sk = pdwgraph.build_skeleton(2 * n)
    values = tile_values(q)
    classes = _value_classes(values, list(values))
    rotations = [g for g in pdwgraph.automorphisms(sk) if g.orientation == pdwgraph.PRESERVING]

    found: dict = {}
    for layout in _combinatorial_layouts(sk, values, allow_reflection):
        lab = _labeling_from(sk, values, layout)
        key = min(_layout_key(sk, lab, classes, g) for g in rotations)
        if key in found:
            continue
        t = tiling_from_layout(n, q, layout)
        if t is None or not verify(t).ok:
            continue
        found[key] = (layout, t)
    return [found[k][1] for k in sorted(found, key=repr)]


def layout_of(t: Tiling) -> list[Placement]:
    """Recover the face placements from a tiling's labeling."""
    out = []
    for k in range(t.skeleton.F):
        cyc = t.labeling.face_cycle(t.skeleton, k)
        for pl in [Placement(m, s) for m in (False, True) for s in range(4)]:
            if pl.cycle() == cyc:
                out.append(pl)
                break
        else:
            raise DomainError(f"face {k} does not read as a tile copy")
    return out


# -- the double-root pair --------------------------------------------------------

SPECIAL_N = 6


def special_params() -> tuple[TileParams, float]:
    alpha = math.acos(-1.0 / (2.0 * math.sqrt(7.0)))
    return TileParams(SPECIAL_N, alpha, 4.0 * PI / 3.0), math.acos(1.0 / 3.0)


def special_tile() -> Quadrangle:
    p, a = special_params()
    return quadcore.build_quadrangle(p, a)


def _fixture_layout():
    try:
        text = resources.files("pdwtiling").joinpath("data/special_layout.json").read_text()
    except (FileNotFoundError, OSError):
        return None
    data = json.loads(text)
    return [Placement(bool(m), int(s)) for m, s in data["layout"]]


def special_layout_json(layout) -> str:
    return json.dumps({"n": SPECIAL_N, "layout": [[int(p.mirrored), p.shift] for p in layout]})


def special_pair(search: bool = False) -> tuple[Tiling, Tiling]:
    """The isohedral and the non-isohedral tiling by the double-root tile.

    The non-isohedral layout comes from the stored fixture unless ``search``
    is set or the fixture is missing, in which case the layout search runs.
    """
    q = special_tile()
    iso = require_verified(assemble(SPECIAL_N, q))
    other = None
    layout = None if search else _fixture_layout()
    if layout is not None:
        other = tiling_from_layout(SPECIAL_N, q, layout)
    if other is None:
        for t in exhaustive_layouts(SPECIAL_N, q, allow_reflection=True):
            if not is_isohedral(t).isohedral:
                other = t
                break
    if other is None:
        raise VerificationError("layout search found no non-isohedral tiling")
    return iso, require_verified(other)

