import itertools

import pytest

from pdwtiling import pdwgraph
from pdwtiling.errors import DomainError
from pdwtiling.pdwgraph import PRESERVING, REVERSING, Labeling, build_skeleton, rim

VALUES = {"alpha": 1.1, "beta": 1.2, "gamma": 1.3, "delta": 1.4, "a": 0.5, "b": 0.6, "c": 0.7}


def cube_edges():
    # 3-bit corners of the cube, joined when they differ in one bit
    return {frozenset((u, v)) for u in range(8) for v in range(8) if bin(u ^ v).count("1") == 1}


def brute_automorphism_count(sk):
    vs = list(sk.vertices)
    edges = {frozenset(e) for e in sk.edges}
    count = 0
    for perm in itertools.permutations(vs):
        m = dict(zip(vs, perm))
        if all(frozenset(m[v] for v in e) in edges for e in edges):
            count += 1
    return count


def brute_matching_count(sk):
    # choose F/2 primal edges; keep the choices whose face pairs cover every face
    ef = sk.edge_faces()
    pairs = list(ef.values())
    count = 0
    for pick in itertools.combinations(pairs, sk.F // 2):
        covered = [k for p in pick for k in p]
        if len(set(covered)) == sk.F:
            count += 1
    return count


# -- skeleton -------------------------------------------------------------------

def test_cube_skeleton_is_the_cube():
    sk = build_skeleton(6)
    assert len(sk.vertices) == 8 and len(sk.edges) == 12
    ours = {frozenset(sk.vertices.index(v) for v in e) for e in sk.edges}
    cube = cube_edges()
    assert any({frozenset(p[i] for i in e) for e in cube} == ours
               for p in itertools.permutations(range(8)))


@pytest.mark.parametrize("F", [6, 8, 10, 12, 24, 40])
def test_skeleton_counts_and_structure(F):
    sk = build_skeleton(F)
    n = F // 2
    assert len(sk.faces) == F and len(sk.vertices) == F + 2 and len(sk.edges) == 2 * F
    assert len(sk.vertices) - len(sk.edges) + len(sk.faces) == 2
    assert sk.adjacency["N"] == frozenset(rim(2 * i, F) for i in range(n))
    assert sk.adjacency["S"] == frozenset(rim(2 * i + 1, F) for i in range(n))
    for i in range(F):
        assert rim(i + 1, F) in sk.adjacency[rim(i, F)]
    # the edge N v_{2i+2} follows N v_{2i} in the cyclic order at N
    for i in range(n):
        assert sk.rotation["N"][rim(2 * i, F)] == rim(2 * i + 2, F)
    if F >= 8:
        for e in sk.edges:
            assert any(sk.degree(v) == 3 for v in e)


def test_every_edge_has_two_faces():
    sk = build_skeleton(10)
    ef = sk.edge_faces()
    assert len(ef) == 20 and all(len(fs) == 2 and fs[0] != fs[1] for fs in ef.values())


@pytest.mark.parametrize("F", [5, 7, 4, 2, 6.5])
def test_skeleton_rejects_bad_face_counts(F):
    with pytest.raises(DomainError):
        build_skeleton(F)


# -- automorphisms ------------------------------------------------------------------

def test_cube_automorphisms_match_brute_force():
    sk = build_skeleton(6)
    autos = pdwgraph.automorphisms(sk)
    assert len(autos) == 48 == brute_automorphism_count(sk)
    assert len({g.perm for g in autos}) == 48


@pytest.mark.parametrize("F", [8, 10, 12, 16, 24, 40])
def test_automorphism_count(F):
    autos = pdwgraph.automorphisms(build_skeleton(F))
    assert len(autos) == 2 * F


def test_automorphisms_deterministic_and_contain_identity():
    sk = build_skeleton(12)
    a, b = pdwgraph.automorphisms(sk), pdwgraph.automorphisms(sk)
    assert a == b
    assert a[0].is_identity()


@pytest.mark.parametrize("F", [6, 8, 10, 12])
def test_group_axioms(F):
    sk = build_skeleton(F)
    autos = pdwgraph.automorphisms(sk)
    perms = {g.perm for g in autos}
    for g in autos:
        assert pdwgraph.inverse(sk, g).perm in perms
        assert pdwgraph.compose(sk, g, pdwgraph.inverse(sk, g)).is_identity()
        for h in autos:
            assert pdwgraph.compose(sk, g, h).perm in perms


@pytest.mark.parametrize("F", range(6, 42, 2))
def test_all_automorphisms_are_map_automorphisms(F):
    sk = build_skeleton(F)
    autos = pdwgraph.automorphisms(sk)
    assert pdwgraph.map_automorphisms(sk) == autos
    kinds = [g.orientation for g in autos]
    half = 24 if F == 6 else F
    assert kinds.count(PRESERVING) == kinds.count(REVERSING) == half


def test_automorphisms_preserve_adjacency():
    sk = build_skeleton(14)
    edges = {frozenset(e) for e in sk.edges}
    for g in pdwgraph.automorphisms(sk):
        assert {g.edge(e) for e in edges} == edges


# -- matchings ------------------------------------------------------------------------

def test_cube_has_eight_matchings_in_one_orbit():
    sk = build_skeleton(6)
    ms = pdwgraph.perfect_face_matchings(sk)
    assert len(ms) == 8
    orbits = pdwgraph.matching_orbits(sk, ms, pdwgraph.automorphisms(sk))
    assert len(orbits) == 1 and len(orbits[0]) == 8


@pytest.mark.parametrize("F", [6, 8, 10, 12])
def test_matching_count_matches_subset_brute_force(F):
    sk = build_skeleton(F)
    assert len(pdwgraph.perfect_face_matchings(sk)) == brute_matching_count(sk)


@pytest.mark.parametrize("F", [6, 8, 10])
def test_matchings_cover_faces_and_are_closed_under_automorphisms(F):
    sk = build_skeleton(F)
    ms = pdwgraph.perfect_face_matchings(sk)
    keys = {m.pairs for m in ms}
    ef = sk.edge_faces()
    for m in ms:
        faces = sorted(k for e in m.edges for k in ef[e])
        assert faces == list(range(F))
        for g in pdwgraph.automorphisms(sk):
            assert m.image(sk, g).pairs in keys


def test_matching_from_edges_rejects_non_matching():
    sk = build_skeleton(6)
    with pytest.raises(DomainError):
        pdwgraph.matching_from_edges(sk, sk.edges[:3])


# -- labelings -------------------------------------------------------------------------

def rim_step(sk, autos):
    F = sk.F
    want = {"N": "S", "S": "N", **{rim(i, F): rim(i + 1, F) for i in range(F)}}
    return next(g for g in autos if g.mapping == want)


def test_identity_and_rim_step_preserve_standard_labels():
    sk = build_skeleton(12)
    autos = pdwgraph.automorphisms(sk)
    lab = pdwgraph.standard_labeling(sk, VALUES)
    assert pdwgraph.is_label_preserving(sk, autos[0], lab)
    assert pdwgraph.is_label_preserving(sk, rim_step(sk, autos), lab)


@pytest.mark.parametrize("F", [6, 8, 12, 20])
def test_standard_labels_preserved_by_all_and_transitive(F):
    sk = build_skeleton(F)
    autos = pdwgraph.automorphisms(sk)
    lab = pdwgraph.standard_labeling(sk, VALUES)
    keep = [g for g in autos if pdwgraph.is_label_preserving(sk, g, lab)]
    if F > 6:
        assert len(keep) == len(autos)
    assert pdwgraph.face_orbits(sk, keep) == [list(range(F))]


def test_reversing_map_needs_reflected_labels():
    sk = build_skeleton(8)
    autos = pdwgraph.automorphisms(sk)
    lab = pdwgraph.standard_labeling(sk, VALUES)
    g = next(g for g in autos if g.orientation == REVERSING)
    assert pdwgraph.is_label_preserving(sk, g, lab)
    # read without reflection the same map moves alpha onto gamma
    plain = pdwgraph.Automorphism(g.perm, PRESERVING)
    assert not pdwgraph.is_label_preserving(sk, plain, lab)


def test_map_sending_a_to_b_breaks_special_labels(pair9):
    _, t = pair9
    sk, lab = t.skeleton, t.labeling
    assert abs(lab.values["a"] - lab.values["b"]) > 1e-3
    hits = 0
    for g in pdwgraph.automorphisms(sk):
        src = lab.reflected() if g.orientation == REVERSING else lab
        sends = any(src.edges[(k, e)] == "a" and lab.edges[(g.face(sk, k), g.edge(e))] == "b"
                    for (k, e) in lab.edges)
        if sends:
            hits += 1
            assert not pdwgraph.is_label_preserving(sk, g, lab)
    assert hits > 0


def test_incomplete_labeling_is_an_error():
    sk = build_skeleton(6)
    lab = pdwgraph.standard_labeling(sk, VALUES)
    corners = dict(lab.corners)
    corners.pop(next(iter(corners)))
    broken = Labeling(lab.values, corners, lab.edges)
    with pytest.raises(DomainError):
        pdwgraph.is_label_preserving(sk, pdwgraph.automorphisms(sk)[0], broken)
    values = {k: v for k, v in VALUES.items() if k != "delta"}
    with pytest.raises(DomainError):
        pdwgraph.check_labeling(sk, Labeling(values, lab.corners, lab.edges))
