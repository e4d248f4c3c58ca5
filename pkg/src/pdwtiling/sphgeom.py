"""Spherical trigonometry on the unit sphere.

Points are unit vectors in R^3. The sphere carries the right-handed
orientation: seen from outside, positive angles turn counterclockwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NoSuchTriangle

ANGLE_TOL = 1e-9
UNIT_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class UnitVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm2 - 1.0) > 1e-10:
            raise DomainError(f"not a unit vector: |v|^2 = {norm2!r}")

    @classmethod
    def from_array(cls, v) -> "UnitVector":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.xyz, dtype=dtype)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def as_array(p) -> np.ndarray:
    if isinstance(p, UnitVector):
        return p.xyz
    return np.asarray(p, dtype=float)


def _clamp(x):
    return np.clip(x, -1.0, 1.0)


@dataclass(frozen=True)
class SphericalTriangle:
    """Vertex angles A, B, C and the opposite sides a, b, c (radians)."""

    A: float
    B: float
    C: float
    a: float
    b: float
    c: float


def from_polar(colatitude: float, longitude: float) -> UnitVector:
    """Point at the given colatitude (0 is the north pole) and longitude."""
    if not (-UNIT_TOL <= colatitude <= math.pi + UNIT_TOL):
        raise DomainError(f"colatitude {colatitude!r} outside [0, pi]")
    s = math.sin(colatitude)
    v = np.array([s * math.cos(longitude), s * math.sin(longitude), math.cos(colatitude)])
    return UnitVector.from_array(v)


def distance(p, q) -> float:
    """Length of the minor great-circle arc between ``p`` and ``q``."""
    p, q = as_array(p), as_array(q)
    # atan2 keeps full precision near 0 and pi, where arccos does not.
    return float(math.atan2(np.linalg.norm(np.cross(p, q)), float(np.dot(p, q))))


def tangent_toward(q, p) -> np.ndarray:
    """Unit tangent vector at ``q`` pointing along the geodesic to ``p``."""
    q, p = as_array(q), as_array(p)
    t = p - np.dot(p, q) * q
    n = np.linalg.norm(t)
    if n < 1e-12:
        raise DomainError("direction undefined: points coincide or are antipodal")
    return t / n


def corner_angle(p, q, r) -> float:
    """Angle at ``q`` turning counterclockwise from ``qp`` to ``qr``.

    The value lies in (0, 2*pi); swapping ``p`` and ``r`` gives
    ``2*pi`` minus the value.
    """
    q = as_array(q)
    tp = tangent_toward(q, p)
    tr = tangent_toward(q, r)
    ang = math.atan2(float(np.dot(q, np.cross(tp, tr))), float(np.dot(tp, tr)))
    if ang < 0.0:
        ang += TWO_PI
    if ang < UNIT_TOL or ang > TWO_PI - UNIT_TOL:
        raise DomainError("directions coincide; the corner is degenerate")
    return ang


def interior_angles(vertices: Sequence) -> list[float]:
    """Interior angles of a polygon listed counterclockwise."""
    pts = [as_array(v) for v in vertices]
    k = len(pts)
    if k < 3:
        raise DomainError("a polygon needs at least three vertices")
    return [corner_angle(pts[(i + 1) % k], pts[i], pts[i - 1]) for i in range(k)]


def triangle_from_angles(A: float, B: float, C: float) -> SphericalTriangle:
    for name, x in (("A", A), ("B", B), ("C", C)):
        if not 0.0 < x < math.pi:
            raise NoSuchTriangle(f"angle {name}={x!r} not in (0, pi)")
    checks = [
        ("A + B + C > pi", A + B + C - math.pi),
        ("-A + B + C < pi", math.pi - (-A + B + C)),
        ("A - B + C < pi", math.pi - (A - B + C)),
        ("A + B - C < pi", math.pi - (A + B - C)),
    ]
    for text, margin in checks:
        if margin <= 0.0:
            raise NoSuchTriangle(f"violated: {text}")

    def side(X, Y, Z):
        # cos X = -cos Y cos Z + sin Y sin Z cos x
        return math.acos(float(_clamp((math.cos(X) + math.cos(Y) * math.cos(Z))
                                      / (math.sin(Y) * math.sin(Z)))))

    return SphericalTriangle(A, B, C, side(A, B, C), side(B, C, A), side(C, A, B))


def side_from_sides_and_angle(b: float, c: float, A: float) -> float:
    """Side opposite ``A`` given the two sides enclosing it."""
    cos_a = math.cos(b) * math.cos(c) + math.sin(b) * math.sin(c) * math.cos(A)
    return math.acos(float(_clamp(cos_a)))


def angle_from_sides(a: float, b: float, c: float) -> float:
    """Angle opposite side ``a`` in the triangle with sides a, b, c."""
    cos_A = (math.cos(a) - math.cos(b) * math.cos(c)) / (math.sin(b) * math.sin(c))
    return math.acos(float(_clamp(cos_A)))


def polygon_area(vertices: Sequence, interior_angles: Sequence[float]) -> float:
    """Area of a k-gon from its interior angles: sum - (k - 2) pi."""
    k = len(vertices)
    if k < 3:
        raise DomainError("a polygon needs at least three vertices")
    if len(interior_angles) != k:
        raise DomainError("one interior angle per vertex is required")
    return float(sum(interior_angles) - (k - 2) * math.pi)


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` about ``axis``."""
    u = as_array(axis)
    u = u / np.linalg.norm(u)
    K = np.array([[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def best_rotation(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Proper rotation R minimizing sum |R src_i - dst_i|^2 (Kabsch)."""
    H = np.asarray(src).T @ np.asarray(dst)
    U, _, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T)) or 1.0
    D = np.diag([1.0, 1.0, d])
    return Vt.T @ D @ U.T


def arcs_cross(p1, p2, q1, q2, tol: float = 1e-12) -> bool:
    """True if the minor arcs p1p2 and q1q2 meet at a point interior to both."""
    p1, p2, q1, q2 = (as_array(v) for v in (p1, p2, q1, q2))
    n1 = np.cross(p1, p2)
    n2 = np.cross(q1, q2)
    line = np.cross(n1, n2)
    norm = np.linalg.norm(line)
    if norm < 1e-14:
        return False
    line = line / norm
    for x in (line, -line):
        if _on_arc(x, p1, p2, n1, tol) and _on_arc(x, q1, q2, n2, tol):
            return True
    return False


def _on_arc(x, a, b, n, tol):
    # strictly between a and b along the minor arc
    return (np.dot(np.cross(a, x), n) > tol and np.dot(np.cross(x, b), n) > tol)


def in_open_hemisphere(points: Sequence, tol: float = 1e-12) -> bool:
    """True if some open hemisphere contains every point.

    Cheap candidate centres are tried first; a linear program settles the
    remaining cases.
    """
    P = np.array([as_array(p) for p in points])
    # Candidate centres: the normalized mean and every pairwise bisector.
    cands = [P.sum(axis=0)]
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            cands.append(P[i] + P[j])
            cross = np.cross(P[i], P[j])
            cands.extend([cross, -cross])
    for c in cands:
        n = np.linalg.norm(c)
        if n < 1e-14:
            continue
        if np.all(P @ (c / n) > tol):
            return True
    return _hemisphere_lp(P, tol)


def _hemisphere_lp(P: np.ndarray, tol: float) -> bool:
    from scipy.optimize import linprog

    # maximize t subject to P u >= t, -1 <= u <= 1
    k = len(P)
    c = np.zeros(4)
    c[3] = -1.0
    A = np.hstack([-P, np.ones((k, 1))])
    res = linprog(c, A_ub=A, b_ub=np.zeros(k), bounds=[(-1, 1)] * 3 + [(None, 1)],
                  method="highs")
    return bool(res.status == 0 and -res.fun > tol)
