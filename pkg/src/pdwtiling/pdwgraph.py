"""Pseudo-double wheel maps, their automorphisms and perfect face-matchings.

Vertices are named ``"N"``, ``"S"`` and ``"v0" .. "v{F-1}"``. N is joined to
the even rim vertices, S to the odd ones. Faces are listed counterclockwise
(seen from outside) and indexed so that face ``2i`` is the N-face
``(N, v2i, v2i+1, v2i+2)`` and face ``2i+1`` the S-face
``(S, v2i+3, v2i+2, v2i+1)``; consecutive faces share a rim edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import DomainError

Edge = frozenset

ANGLE_TOL = 1e-9


def rim(i: int, F: int) -> str:
    return f"v{i % F}"


@dataclass(frozen=True)
class PdwSkeleton:
    F: int
    vertices: tuple[str, ...]
    faces: tuple[tuple[str, str, str, str], ...]
    adjacency: dict = field(repr=False, compare=False)
    rotation: dict = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.F // 2

    @property
    def edges(self) -> list[Edge]:
        seen = []
        for face in self.faces:
            for e in face_edges(face):
                if e not in seen:
                    seen.append(e)
        return seen

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def edge_faces(self) -> dict[Edge, tuple[int, int]]:
        """The two faces on either side of each edge."""
        out: dict[Edge, list[int]] = {}
        for k, face in enumerate(self.faces):
            for e in face_edges(face):
                out.setdefault(e, []).append(k)
        return {e: tuple(ks) for e, ks in out.items()}

    def face_index(self, corners) -> int:
        """Index of the face with the given corner set."""
        key = frozenset(corners)
        for k, face in enumerate(self.faces):
            if frozenset(face) == key:
                return k
        raise DomainError(f"no face with corners {sorted(key)}")


def face_edges(face) -> list[Edge]:
    k = len(face)
    return [Edge((face[i], face[(i + 1) % k])) for i in range(k)]


def build_skeleton(F: int) -> PdwSkeleton:
    """The pseudo-double wheel with ``F`` faces."""
    if int(F) != F or F < 6 or F % 2:
        raise DomainError(f"F must be an even integer >= 6, got {F!r}")
    F = int(F)
    n = F // 2
    faces = []
    for i in range(n):
        faces.append(("N", rim(2 * i, F), rim(2 * i + 1, F), rim(2 * i + 2, F)))
        faces.append(("S", rim(2 * i + 3, F), rim(2 * i + 2, F), rim(2 * i + 1, F)))
    vertices = ("N", "S") + tuple(rim(i, F) for i in range(F))

    adjacency: dict[str, set[str]] = {v: set() for v in vertices}
    rotation: dict[str, dict[str, str]] = {v: {} for v in vertices}
    for face in faces:
        for i, v in enumerate(face):
            u, w = face[i - 1], face[(i + 1) % 4]
            adjacency[v].update((u, w))
            # counterclockwise around v the edge vu follows vw
            rotation[v][w] = u
    sk = PdwSkeleton(F, vertices, tuple(faces),
                     {v: frozenset(s) for v, s in adjacency.items()}, rotation)
    V, E = len(vertices), len(sk.edges)
    if V - E + F != 2 or E != 2 * F:
        raise AssertionError(f"Euler check failed: V={V} E={E} F={F}")
    return sk


# -- automorphisms -----------------------------------------------------------

PRESERVING = "preserving"
REVERSING = "reversing"


@dataclass(frozen=True)
class Automorphism:
    perm: tuple[tuple[str, str], ...]   # sorted (vertex, image) pairs
    orientation: str | None              # PRESERVING, REVERSING or None

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.perm)

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def edge(self, e: Edge) -> Edge:
        m = self.mapping
        return Edge(m[v] for v in e)

    def face(self, sk: PdwSkeleton, k: int) -> int:
        m = self.mapping
        return sk.face_index(m[v] for v in sk.faces[k])

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.perm)


def _make(sk: PdwSkeleton, mapping: dict[str, str]) -> Automorphism:
    return Automorphism(tuple(sorted(mapping.items(), key=lambda kv: _vkey(kv[0]))),
                        _orientation(sk, mapping))


def _vkey(v: str):
    return (0, 0) if v == "N" else (0, 1) if v == "S" else (1, int(v[1:]))


def _orientation(sk: PdwSkeleton, g: dict[str, str]) -> str | None:
    rot = sk.rotation
    fwd = all(rot[g[v]][g[w]] == g[rot[v][w]] for v in rot for w in rot[v])
    if fwd:
        return PRESERVING
    inverse = {v: {u: w for w, u in r.items()} for v, r in rot.items()}
    back = all(inverse[g[v]][g[w]] == g[rot[v][w]] for v in rot for w in rot[v])
    return REVERSING if back else None


def automorphisms(sk: PdwSkeleton) -> list[Automorphism]:
    """All graph automorphisms, by backtracking over adjacency-preserving maps.

    Each vertex after the first is chosen to have as many assigned
    neighbours as possible, and its image must be adjacent to theirs.
    """
    adj = sk.adjacency
    # greedy order: next is the vertex with the most assigned neighbours
    order = [sk.vertices[0]]
    rest = sorted(sk.vertices[1:], key=_vkey)
    while rest:
        v = max(rest, key=lambda w: sum(u in adj[w] for u in order))
        rest.remove(v)
        order.append(v)
    parent = {}
    for i, v in enumerate(order[1:], 1):
        parent[v] = next(u for u in order[:i] if u in adj[v])

    found: list[dict[str, str]] = []
    img: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int):
        if i == len(order):
            found.append(dict(img))
            return
        v = order[i]
        pool = sk.vertices if i == 0 else sorted(adj[img[parent[v]]], key=_vkey)
        for w in pool:
            if w in used or len(adj[w]) != len(adj[v]):
                continue
            ok = all((u in adj[v]) == (img[u] in adj[w]) for u in img)
            if not ok:
                continue
            img[v] = w
            used.add(w)
            extend(i + 1)
            del img[v]
            used.discard(w)

    extend(0)
    autos = [_make(sk, m) for m in found]
    autos.sort(key=lambda g: [_vkey(w) for _, w in g.perm])
    return autos


def compose(sk: PdwSkeleton, g: Automorphism, h: Automorphism) -> Automorphism:
    """g after h."""
    gm, hm = g.mapping, h.mapping
    return _make(sk, {v: gm[hm[v]] for v in hm})


def inverse(sk: PdwSkeleton, g: Automorphism) -> Automorphism:
    return _make(sk, {w: v for v, w in g.perm})


def map_automorphisms(sk: PdwSkeleton) -> list[Automorphism]:
    """Automorphisms that keep or globally reverse the rotation system."""
    return [g for g in automorphisms(sk) if g.orientation is not None]


# -- perfect face-matchings -------------------------------------------------

@dataclass(frozen=True)
class FaceMatching:
    edges: frozenset          # primal edges crossed by the matching
    pairs: tuple[tuple[int, int], ...]

    def image(self, sk: PdwSkeleton, g: Automorphism) -> "FaceMatching":
        return matching_from_edges(sk, [g.edge(e) for e in self.edges])


def matching_from_edges(sk: PdwSkeleton, edges) -> FaceMatching:
    ef = sk.edge_faces()
    pairs = tuple(sorted(tuple(sorted(ef[e])) for e in edges))
    covered = [k for p in pairs for k in p]
    if sorted(covered) != list(range(sk.F)):
        raise DomainError("edges do not pair every face exactly once")
    return FaceMatching(frozenset(edges), pairs)


def perfect_face_matchings(sk: PdwSkeleton) -> list[FaceMatching]:
    """All perfect matchings of the dual graph, by backtracking."""
    ef = sk.edge_faces()
    by_face: dict[int, list[tuple[Edge, int]]] = {k: [] for k in range(sk.F)}
    for e, (f, g) in ef.items():
        by_face[f].append((e, g))
        by_face[g].append((e, f))
    for k in by_face:
        by_face[k].sort(key=lambda eg: eg[1])

    out: list[FaceMatching] = []
    chosen: list[Edge] = []
    free = [True] * sk.F

    def search():
        try:
            f = free.index(True)
        except ValueError:
            out.append(matching_from_edges(sk, chosen))
            return
        free[f] = False
        for e, g in by_face[f]:
            if free[g]:
                free[g] = False
                chosen.append(e)
                search()
                chosen.pop()
                free[g] = True
        free[f] = True

    search()
    out.sort(key=lambda m: m.pairs)
    return out


def matching_orbits(sk: PdwSkeleton, matchings, autos) -> list[list[FaceMatching]]:
    """Partition ``matchings`` into orbits under ``autos``."""
    left = list(matchings)
    orbits = []
    while left:
        m = left.pop(0)
        orbit = {m.pairs: m}
        for g in autos:
            im = m.image(sk, g)
            orbit.setdefault(im.pairs, im)
        left = [x for x in left if x.pairs not in orbit]
        orbits.append(sorted(orbit.values(), key=lambda x: x.pairs))
    return orbits


# -- labelings ---------------------------------------------------------------

CORNERS = ("beta", "alpha", "delta", "gamma")
EDGES = ("a", "b", "c")
MIRROR = {"alpha": "gamma", "gamma": "alpha", "beta": "beta", "delta": "delta",
          "a": "a", "b": "c", "c": "b"}


@dataclass(frozen=True)
class Labeling:
    """Tile-corner and tile-edge names on every face, with their values.

    ``corners[(face, vertex)]`` names the tile corner sitting at ``vertex``
    in ``face``; ``edges[(face, edge)]`` names the tile edge there. Both
    faces beside an edge carry their own name for it.
    """

    values: dict
    corners: dict
    edges: dict

    def corner_value(self, face: int, v: str) -> float:
        return self.values[self.corners[(face, v)]]

    def edge_value(self, face: int, e: Edge) -> float:
        return self.values[self.edges[(face, e)]]

    def face_cycle(self, sk: PdwSkeleton, k: int) -> list[tuple[str, str]]:
        """(corner name, name of the following edge) counterclockwise."""
        face = sk.faces[k]
        return [(self.corners[(k, v)], self.edges[(k, e)])
                for v, e in zip(face, face_edges(face))]

    def reflected(self) -> "Labeling":
        return Labeling(self.values,
                        {k: MIRROR[s] for k, s in self.corners.items()},
                        {k: MIRROR[s] for k, s in self.edges.items()})


def standard_labeling(sk: PdwSkeleton, values: dict) -> Labeling:
    """Every face reads beta, alpha, delta, gamma from its hub, edges a b c a."""
    corners, edges = {}, {}
    for k, face in enumerate(sk.faces):
        for v, name in zip(face, CORNERS):
            corners[(k, v)] = name
        for e, name in zip(face_edges(face), ("a", "b", "c", "a")):
            edges[(k, e)] = name
    return Labeling(dict(values), corners, edges)


def check_labeling(sk: PdwSkeleton, lab: Labeling) -> None:
    missing = []
    for k, face in enumerate(sk.faces):
        missing += [(k, v) for v in face if (k, v) not in lab.corners]
        missing += [(k, tuple(sorted(e))) for e in face_edges(face) if (k, e) not in lab.edges]
    if missing:
        raise DomainError(f"labeling incomplete, first gaps: {missing[:4]}")
    names = set(lab.corners.values()) | set(lab.edges.values())
    unknown = names - set(lab.values)
    if unknown:
        raise DomainError(f"labeling has no value for {sorted(unknown)}")


def is_label_preserving(sk: PdwSkeleton, auto: Automorphism, lab: Labeling,
                        tol: float = ANGLE_TOL) -> bool:
    """True if ``auto`` carries every corner and edge value onto an equal one.

    Orientation-reversing maps are compared against the reflected reading
    of the source labels (alpha <-> gamma, b <-> c).
    """
    check_labeling(sk, lab)
    src = lab.reflected() if auto.orientation == REVERSING else lab
    m = auto.mapping
    for k, face in enumerate(sk.faces):
        gk = auto.face(sk, k)
        for v in face:
            if abs(lab.corner_value(gk, m[v]) - src.corner_value(k, v)) > tol:
                return False
        for e in face_edges(face):
            if abs(lab.edge_value(gk, auto.edge(e)) - src.edge_value(k, e)) > tol:
                return False
    return True


def face_orbits(sk: PdwSkeleton, autos) -> list[list[int]]:
    """Orbits of the faces under a set of automorphisms."""
    seen: dict[int, int] = {}
    orbits: list[list[int]] = []
    for k in range(sk.F):
        if k in seen:
            continue
        orbit = sorted({g.face(sk, k) for g in autos} | {k})
        for f in orbit:
            seen[f] = len(orbits)
        orbits.append(orbit)
    return orbits


def iter_rim(F: int) -> Iterator[str]:
    return (rim(i, F) for i in range(F))
