"""Tile algebra for quadrangles that tile the sphere over a pseudo-double wheel.

A tile is named by ``(n, alpha, gamma, a)``: ``2n`` copies tile the sphere,
``beta = 2*pi/n`` sits between the two meridian edges of length ``a``, and
``alpha``/``gamma`` are the corners next to ``beta``. The remaining corner is
``delta = 2*pi - alpha - gamma``. Corners are listed counterclockwise as
N, v0, v1, v2 with angles beta, alpha, delta, gamma and edges a, b, c, a.

A tile exists exactly when ``cos a`` is a root of the monic quadratic

    x**2 - cot(pi/n) (cot alpha + cot gamma) x - cot alpha cot gamma
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import sphgeom
from .errors import DegenerateTile, DomainError, NotATile, SingularCotangent
from .sphgeom import UnitVector

PI = math.pi
TWO_PI = 2.0 * math.pi

SINGULAR_GUARD = 1e-9
DOUBLE_ROOT_TOL = 1e-10
NEGATIVE_DISC_TOL = 1e-9
ROOT_EDGE_TOL = 1e-12
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class TileParams:
    n: int
    alpha: float
    gamma: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"n must be an integer >= 3, got {self.n!r}")
        for name, x in (("alpha", self.alpha), ("gamma", self.gamma)):
            if not 0.0 < x < TWO_PI:
                raise DomainError(f"{name}={x!r} not in (0, 2*pi)")
            for bad, label in ((PI / 2, "pi/2"), (PI, "pi")):
                if abs(x - bad) <= SINGULAR_GUARD:
                    raise SingularCotangent(f"{name} is within {SINGULAR_GUARD} of {label}")

    @property
    def beta(self) -> float:
        return TWO_PI / self.n

    @property
    def delta(self) -> float:
        return TWO_PI - self.alpha - self.gamma

    def swapped(self) -> "TileParams":
        return TileParams(self.n, self.gamma, self.alpha)


class Branch(str, Enum):
    MINUS = "minus"
    PLUS = "plus"
    DOUBLE = "double"


@dataclass(frozen=True)
class TileSolution:
    """One admissible tile: edges a, b, c and the derived angles."""

    a: float
    b: float
    c: float
    beta: float
    delta: float
    branch: Branch
    phi: float
    phi_prime: float


@dataclass(frozen=True)
class RegionId:
    tag: str  # "B1".."B8" or "Outside"
    multiplicity: int

    def __post_init__(self):
        if (self.multiplicity == 2) != (self.tag in ("B4", "B8")):
            raise ValueError(f"inconsistent region {self.tag} x{self.multiplicity}")


@dataclass(frozen=True)
class Classification:
    params: TileParams
    region: RegionId
    solutions: tuple[TileSolution, ...]
    discriminant: float
    roots: tuple[tuple[float, Branch], ...] = field(default=())


@dataclass(frozen=True)
class Quadrangle:
    """A realized tile with N at the north pole and v0 at longitude 0."""

    n: int
    N: UnitVector
    v0: UnitVector
    v1: UnitVector
    v2: UnitVector
    alpha: float
    beta: float
    gamma: float
    delta: float
    a: float
    b: float
    c: float

    @property
    def vertices(self) -> np.ndarray:
        """Corner positions counterclockwise: N, v0, v1, v2."""
        return np.array([self.N.xyz, self.v0.xyz, self.v1.xyz, self.v2.xyz])

    @property
    def corner_angles(self) -> tuple[float, float, float, float]:
        return (self.beta, self.alpha, self.delta, self.gamma)

    @property
    def edge_lengths(self) -> tuple[float, float, float, float]:
        """Edge leaving each corner counterclockwise: N-v0, v0-v1, v1-v2, v2-N."""
        return (self.a, self.b, self.c, self.a)

    @property
    def params(self) -> TileParams:
        return TileParams(self.n, self.alpha, self.gamma)

    def area(self) -> float:
        return sphgeom.polygon_area(self.vertices, sphgeom.interior_angles(self.vertices))


def _cot(x: float) -> float:
    return math.cos(x) / math.sin(x)


def f_coeffs(p: TileParams) -> tuple[float, float]:
    """Coefficients (c1, c0) of the monic tile quadratic x^2 + c1 x + c0."""
    ca, cg = _cot(p.alpha), _cot(p.gamma)
    return -_cot(PI / p.n) * (ca + cg), -ca * cg


def f_value(p: TileParams, x: float) -> float:
    c1, c0 = f_coeffs(p)
    return x * x + c1 * x + c0


def discriminant(p: TileParams) -> float:
    ca, cg = _cot(p.alpha), _cot(p.gamma)
    t = math.tan(PI / p.n)
    return cg * cg + 2.0 * (2.0 * t * t + 1.0) * ca * cg + ca * ca


def axis_of_parabola(p: TileParams) -> float:
    return 0.5 * _cot(PI / p.n) * (_cot(p.alpha) + _cot(p.gamma))


def dgn(n: int, psi: float) -> float:
    """The double-root curve gamma = dgn_n(alpha) over alpha in (pi/2, pi)."""
    if n < 3:
        raise DomainError("n must be >= 3")
    if not PI / 2 < psi < PI:
        raise DomainError(f"psi={psi!r} not in (pi/2, pi)")
    s, c = math.sin(PI / n), math.cos(PI / n)
    return PI - math.atan(c * c / (s + 1.0) ** 2 * math.tan(psi))


def tangency_alpha(n: int) -> float:
    """Abscissa where dgn_n touches the line alpha + gamma = 2 pi - pi/n."""
    return 3.0 * PI / 4.0 - PI / (2.0 * n)


def quadratic_roots(p: TileParams) -> list[tuple[float, Branch]]:
    """Real roots x of the tile quadratic, larger first; empty if none."""
    disc = discriminant(p)
    if disc < -NEGATIVE_DISC_TOL:
        return []
    ax = axis_of_parabola(p)
    if abs(disc) <= DOUBLE_ROOT_TOL or disc < 0.0:
        return [(ax, Branch.DOUBLE)]
    half = 0.5 * _cot(PI / p.n) * math.sqrt(disc)
    return [(ax + half, Branch.MINUS), (ax - half, Branch.PLUS)]


def edge_roots(p: TileParams) -> list[tuple[float, Branch]]:
    """Meridian edge lengths a = arccos x for roots with |x| < 1.

    The minus branch is the smaller edge (larger cosine).
    """
    out = []
    for x, br in quadratic_roots(p):
        if abs(x) < 1.0 - ROOT_EDGE_TOL:
            out.append((math.acos(x), br))
    return out


def phi_from_edge(angle: float, a: float) -> float:
    """Closed form for the longitude gap opposite ``angle``.

    tan(phi/2) = -tan(angle) cos(a), from the angle cosine law on the
    triangle cut off by the diagonal N v1.
    """
    return 2.0 * math.atan(-math.tan(angle) * math.cos(a))


def side_from_corner(a: float, corner: float) -> float:
    """Rim edge leaving a corner of angle ``corner`` at distance ``a`` from N.

    Solves cos(pi - a) = cos a cos b + sin a sin b cos(corner) for b in (0, pi).
    """
    den = math.sin(a) * math.cos(corner)
    half = math.atan(-math.cos(a) / den) if den != 0.0 else PI / 2
    if not 0.0 < half < PI / 2:
        raise NotATile(f"no rim edge in (0, pi) for a={a!r}, corner={corner!r}")
    return 2.0 * half


def solution_for(p: TileParams, a: float, branch: Branch) -> TileSolution:
    b = side_from_corner(a, p.alpha)
    c = side_from_corner(a, p.gamma)
    return TileSolution(
        a=a, b=b, c=c, beta=p.beta, delta=p.delta, branch=branch,
        phi=phi_from_edge(p.gamma, a), phi_prime=phi_from_edge(p.alpha, a),
    )


def _region_hi(n: int, alpha: float, gamma: float, disc: float) -> str | None:
    """B2/B3/B4 test for pi/2 < alpha < pi < gamma."""
    if not (PI / 2 < alpha < PI and PI < gamma < 3 * PI / 2):
        return None
    t = tangency_alpha(n)
    if alpha < t and abs(disc) <= DOUBLE_ROOT_TOL:
        return "B3"
    if alpha + gamma < TWO_PI - PI / n:
        return "B2"
    if alpha < t and TWO_PI - PI / n - alpha < gamma < dgn(n, alpha):
        return "B4"
    return None


_MIRROR = {"B2": "B6", "B3": "B7", "B4": "B8"}
_BRANCHES = {
    "B1": (Branch.MINUS,), "B2": (Branch.PLUS,), "B5": (Branch.PLUS,),
    "B6": (Branch.PLUS,), "B3": (Branch.DOUBLE,), "B7": (Branch.DOUBLE,),
    "B4": (Branch.MINUS, Branch.PLUS), "B8": (Branch.MINUS, Branch.PLUS),
}


def region_tag(p: TileParams) -> str:
    n, al, ga = p.n, p.alpha, p.gamma
    disc = discriminant(p)
    if PI / 2 < al < PI and PI / 2 < ga < PI and al + ga < TWO_PI - PI / n:
        return "B1"
    if 0.0 < al < PI / 2 and 0.0 < ga < PI / 2 and al + ga > PI / n:
        return "B5"
    tag = _region_hi(n, al, ga, disc)
    if tag:
        return tag
    tag = _region_hi(n, ga, al, disc)
    if tag:
        return _MIRROR[tag]
    return "Outside"


def classify(p: TileParams) -> Classification:
    """Region of (alpha, gamma) and the admissible tiles there.

    Points whose admissible root has rounded onto x = +-1 lie on a region
    boundary and are reported as Outside.
    """
    tag = region_tag(p)
    disc = discriminant(p)
    roots = tuple(edge_roots(p))
    if tag == "Outside":
        return Classification(p, RegionId(tag, 0), (), disc, roots)
    wanted = _BRANCHES[tag]
    sols = []
    for a, br in roots:
        if br in wanted:
            sols.append(solution_for(p, a, br))
    if tag in ("B3", "B7") and not sols:
        # double root flagged by the region test but split by rounding
        ax = axis_of_parabola(p)
        if abs(ax) < 1.0 - ROOT_EDGE_TOL:
            sols.append(solution_for(p, math.acos(ax), Branch.DOUBLE))
    if len(sols) != len(wanted):
        # on a boundary up to rounding: a root reached x = +-1 (a in {0, pi})
        return Classification(p, RegionId("Outside", 0), (), disc, roots)
    return Classification(p, RegionId(tag, len(sols)), tuple(sols), disc, roots)


def degenerate_edge(n: int, corner: float) -> float:
    """Edge length on the double-root curve, from the corner below pi."""
    s, c = math.sin(PI / n), math.cos(PI / n)
    return PI - math.acos((s + 1.0) / c * _cot(corner))


# -- geometric construction -------------------------------------------------

def _rotate_tangent(p: np.ndarray, t: np.ndarray, angle: float) -> np.ndarray:
    """Turn tangent ``t`` at ``p`` counterclockwise by ``angle``."""
    return math.cos(angle) * t + math.sin(angle) * np.cross(p, t)


def build_quadrangle(p: TileParams, a: float) -> Quadrangle:
    """Realize the tile by bending two great circles off the meridians.

    From v0 and v2 (distance ``a`` from N, ``beta`` apart) the rim edges leave
    at interior angles alpha and gamma; v1 is where the two great circles
    meet on the side that keeps the corner at N equal to beta.
    """
    if not 0.0 < a < PI or abs(a - PI / 2) <= SINGULAR_GUARD:
        raise DomainError(f"a={a!r} must lie in (0, pi) and differ from pi/2")
    resid = f_value(p, math.cos(a))
    if abs(resid) > RESIDUAL_TOL:
        raise NotATile(f"f(cos a) = {resid:.3e} for a={a!r}")
    delta = p.delta
    if not 0.0 < delta < TWO_PI:
        raise NotATile(f"delta = 2pi - alpha - gamma = {delta!r} is not a corner angle")
    if abs(delta - PI) <= SINGULAR_GUARD:
        raise DegenerateTile("delta = pi: the two great circles coincide")

    N = np.array([0.0, 0.0, 1.0])
    v0 = sphgeom.from_polar(a, 0.0).xyz
    v2 = sphgeom.from_polar(a, p.beta).xyz
    # interior angle at v0 turns from the rim edge to v0N counterclockwise
    d = _rotate_tangent(v0, sphgeom.tangent_toward(v0, N), -p.alpha)
    e = _rotate_tangent(v2, sphgeom.tangent_toward(v2, N), p.gamma)
    line = np.cross(np.cross(v0, d), np.cross(v2, e))
    if np.linalg.norm(line) < 1e-12:
        raise DegenerateTile("rim great circles coincide")
    line /= np.linalg.norm(line)

    target = (p.beta, p.alpha, delta, p.gamma)
    best, best_err = None, math.inf
    for cand in (line, -line):
        try:
            angs = sphgeom.interior_angles([N, v0, cand, v2])
        except DomainError:
            continue
        err = max(abs(x - y) for x, y in zip(angs, target))
        if err < best_err:
            best, best_err = cand, err
    if best is None or best_err > 1e-7:
        raise NotATile(f"no intersection reproduces the corner angles (err {best_err:.2e})")

    if abs(sphgeom.distance(N, best) - (PI - a)) > 1e-7:
        raise NotATile("N v1 differs from pi - a")
    b = side_from_corner(a, p.alpha)
    c = side_from_corner(a, p.gamma)
    if abs(sphgeom.distance(v0, best) - b) > 1e-7 or abs(sphgeom.distance(best, v2) - c) > 1e-7:
        raise NotATile("rim edges disagree with the cosine law")
    return Quadrangle(
        n=p.n, N=UnitVector.from_array(N), v0=UnitVector.from_array(v0),
        v1=UnitVector.from_array(best), v2=UnitVector.from_array(v2),
        alpha=p.alpha, beta=p.beta, gamma=p.gamma, delta=delta, a=a, b=b, c=c,
    )


def check_quadrangle(q: Quadrangle, tol: float = 1e-9) -> list[str]:
    """Return the list of violated tile invariants (empty when valid)."""
    bad = []
    N, v0, v1, v2 = q.vertices
    if abs(sphgeom.distance(N, v0) - q.a) > tol or abs(sphgeom.distance(N, v2) - q.a) > tol:
        bad.append("meridian edges differ from a")
    if abs(sphgeom.distance(N, v1) - (PI - q.a)) > tol:
        bad.append("N v1 differs from pi - a")
    angs = sphgeom.interior_angles(q.vertices)
    if abs(angs[0] - TWO_PI / q.n) > tol:
        bad.append("angle at N differs from 2pi/n")
    if abs(q.area() - TWO_PI / q.n) > tol:
        bad.append("area differs from 2pi/n")
    for got, want, name in zip(angs, q.corner_angles, "BADG"):
        if abs(got - want) > tol:
            bad.append(f"corner {name} off by {got - want:.2e}")
    return bad


# -- brute-force oracle -----------------------------------------------------
#
# Trial construction for a meridian length a: N at the pole, v0 and v2 at
# colatitude a and longitudes 0 and beta. The rim ray leaving v0 turns
# clockwise by alpha from v0N, the one leaving v2 turns counterclockwise by
# gamma from v2N. Their great circles have normals n1, n2; the meeting point
# is x = +-(n1 x n2), taken ahead of both rays. The construction closes when
# |N x| equals pi - a. Components are written out so the same code serves
# python floats and broadcast numpy arrays.

def _ray_parts(n, sal, cal, sg, cg, ca, sa):
    beta = TWO_PI / n
    cb, sb = math.cos(beta), math.sin(beta)
    n1x, n1y, n1z = -sal * ca, -cal, sal * sa
    w0, w1 = sg * ca, -cg
    n2x, n2y, n2z = cb * w0 - sb * w1, sb * w0 + cb * w1, -sg * sa
    xx = n1y * n2z - n1z * n2y
    xy = n1z * n2x - n1x * n2z
    xz = n1x * n2y - n1y * n2x
    # ray directions d at v0 and e at v2
    xd = -xx * cal * ca + xy * sal + xz * cal * sa
    e0, e1 = -cg * ca, -sg
    ex, ey = cb * e0 - sb * e1, sb * e0 + cb * e1
    xe = xx * ex + xy * ey + xz * cg * sa
    return xx, xy, xz, xd, xe


def _residual_scalar(n, alpha, gamma, a):
    ca, sa = math.cos(a), math.sin(a)
    xx, xy, xz, xd, xe = _ray_parts(n, math.sin(alpha), math.cos(alpha),
                                    math.sin(gamma), math.cos(gamma), ca, sa)
    if xd < 0.0:
        xx, xy, xz, xe = -xx, -xy, -xz, -xe
    if xd == 0.0 or xe <= 0.0 or math.hypot(xx, xy, xz) < 1e-12:
        return math.nan
    return math.atan2(math.hypot(xx, xy), xz) - (PI - a)


def _residual_grid(n, alphas, gammas, a):
    """Residual for each parameter pair (rows) and trial length (columns)."""
    al = np.asarray(alphas, dtype=float)[:, None]
    ga = np.asarray(gammas, dtype=float)[:, None]
    ca, sa = np.cos(a)[None, :], np.sin(a)[None, :]
    xx, xy, xz, xd, xe = _ray_parts(n, np.sin(al), np.cos(al), np.sin(ga), np.cos(ga), ca, sa)
    s = np.where(xd < 0.0, -1.0, 1.0)
    ok = (xd != 0.0) & (xe * s > 0.0) & (xx * xx + xy * xy + xz * xz > 1e-24)
    r = np.arctan2(np.hypot(xx, xy), s * xz) - (PI - a)
    return np.where(ok, r, np.nan)


def _trial_quadrangle(n, alpha, gamma, a):
    """Corners N, v0, v1, v2 of the trial construction, or None."""
    ca, sa = math.cos(a), math.sin(a)
    xx, xy, xz, xd, xe = _ray_parts(n, math.sin(alpha), math.cos(alpha),
                                    math.sin(gamma), math.cos(gamma), ca, sa)
    x = np.array([xx, xy, xz])
    norm = float(np.linalg.norm(x))
    if norm < 1e-12 or xd == 0.0:
        return None
    if xd < 0.0:
        x, xe = -x, -xe
    if xe <= 0.0:
        return None
    beta = TWO_PI / n
    N = np.array([0.0, 0.0, 1.0])
    v0 = np.array([sa, 0.0, ca])
    v2 = np.array([sa * math.cos(beta), sa * math.sin(beta), ca])
    return np.array([N, v0, x / norm, v2])


def _closes(n, alpha, gamma, a, tol):
    """Full acceptance test for a candidate meridian length."""
    pts = _trial_quadrangle(n, alpha, gamma, a)
    if pts is None:
        return False
    if abs(sphgeom.distance(pts[0], pts[2]) - (PI - a)) > tol:
        return False
    delta = TWO_PI - alpha - gamma
    if not 0.0 < delta < TWO_PI:
        return False
    try:
        angs = sphgeom.interior_angles(pts)
    except DomainError:
        return False
    want = (TWO_PI / n, alpha, delta, gamma)
    if any(abs(g - w) > tol for g, w in zip(angs, want)):
        return False
    if any(abs(g - PI) <= SINGULAR_GUARD for g in angs):
        return False
    # simple polygon: opposite edges must not cross
    if sphgeom.arcs_cross(pts[0], pts[1], pts[2], pts[3]):
        return False
    if sphgeom.arcs_cross(pts[1], pts[2], pts[3], pts[0]):
        return False
    return sphgeom.in_open_hemisphere(pts)


def _roots_on_grid(resid, grid, r):
    """Zeros of ``resid`` bracketed or touched on the sampled grid ``r``."""
    from scipy.optimize import brentq, minimize_scalar

    cands = []
    fin = np.isfinite(r)
    both = fin[:-1] & fin[1:]
    with np.errstate(invalid="ignore"):
        sign = both & (r[:-1] * r[1:] < 0.0)
    for i in np.flatnonzero(sign):
        cands.append(brentq(resid, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15))
    cands.extend(grid[fin & (r == 0.0)].tolist())

    # tangential touches: a local minimum of |r| with no sign change around it
    absr = np.where(fin, np.abs(r), np.inf)
    inner = np.arange(1, len(grid) - 1)
    local = inner[(absr[inner] <= absr[inner - 1]) & (absr[inner] <= absr[inner + 1])
                  & (absr[inner] < 1e-4)]

    def absres(x):
        v = resid(x)
        return abs(v) if math.isfinite(v) else 1.0

    for i in local:
        if sign[i - 1] or sign[i]:
            continue
        res = minimize_scalar(absres, bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                              options={"xatol": 1e-13})
        if res.fun <= 1e-9:
            cands.append(float(res.x))
    return cands


def _validated(n, alpha, gamma, cands, tol):
    found: list[float] = []
    for a in sorted(cands):
        if found and abs(a - found[-1]) < 1e-7:
            continue
        if _closes(n, alpha, gamma, a, tol):
            found.append(float(a))
    return found


def _dense_grid(step):
    k = int(math.ceil(PI / step))
    return np.linspace(0.0, PI, k + 1)[1:-1]


def oracle_edge_lengths(p: TileParams, step: float = 1e-4, tol: float = 1e-6) -> list[float]:
    """All meridian lengths for which the trial construction closes.

    Scans a uniform grid in (0, pi), brackets sign changes of the closure
    residual with Brent's method and polishes tangential touches (double
    roots) by bounded minimization. Independent of the tile quadratic.
    """
    n, al, ga = p.n, p.alpha, p.gamma
    grid = _dense_grid(step)
    r = _residual_grid(n, [al], [ga], grid)[0]
    cands = _roots_on_grid(lambda x: _residual_scalar(n, al, ga, x), grid, r)
    return _validated(n, al, ga, cands, tol)


def oracle_edge_lengths_batch(n: int, alphas, gammas, step: float = 1e-4,
                              coarse: float = 1e-3, tol: float = 1e-6,
                              chunk: int = 64) -> list[list[float]]:
    """``oracle_edge_lengths`` for many (alpha, gamma) pairs sharing ``n``.

    A coarse scan over all pairs at once flags the cells that can hold a
    zero: a sign change, a change of validity, or a small local minimum of
    |residual| together with its neighbours. Only flagged cells are rescanned
    at ``step``; elsewhere the residual keeps one sign and stays away from 0.
    """
    alphas = np.asarray(alphas, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    cgrid = _dense_grid(coarse)
    sub = max(2, int(math.ceil(coarse / step)))
    out: list[list[float]] = []
    for lo in range(0, len(alphas), chunk):
        al_c, ga_c = alphas[lo:lo + chunk], gammas[lo:lo + chunk]
        R = _residual_grid(n, al_c, ga_c, cgrid)
        for al, ga, r in zip(al_c, ga_c, R):
            out.append(_refine_row(n, float(al), float(ga), cgrid, r, sub, tol))
    return out


def _refine_row(n, al, ga, cgrid, r, sub, tol):
    fin = np.isfinite(r)
    if not fin.any():
        return []
    absr = np.where(fin, np.abs(r), np.inf)
    flag = np.zeros(len(cgrid) + 1, dtype=bool)      # cell i spans point i-1 .. i
    with np.errstate(invalid="ignore"):
        change = (fin[:-1] != fin[1:]) | (fin[:-1] & fin[1:] & (r[:-1] * r[1:] <= 0.0))
    flag[1:-1] |= change
    inner = np.arange(1, len(cgrid) - 1)
    low = inner[(absr[inner] <= absr[inner - 1]) & (absr[inner] <= absr[inner + 1])
                & (absr[inner] < 1e-2)]
    for i in low:
        flag[max(i - 1, 0):i + 3] = True
    flag[0] |= fin[0]
    flag[-1] |= fin[-1]
    cells = np.flatnonzero(flag)
    if len(cells) == 0:
        return []
    edges = np.concatenate([[0.0], cgrid, [PI]])
    resid = lambda x: _residual_scalar(n, al, ga, x)
    cands = []
    # merge runs of adjacent flagged cells into intervals
    runs = np.split(cells, np.flatnonzero(np.diff(cells) > 1) + 1)
    for run in runs:
        left, right = edges[run[0]], edges[run[-1] + 1]
        k = sub * len(run)
        fine = np.linspace(left, right, k + 1)
        fine = fine[(fine > 0.0) & (fine < PI)]
        if len(fine) < 3:
            continue
        rf = _residual_grid(n, [al], [ga], fine)[0]
        cands.extend(_roots_on_grid(resid, fine, rf))
    return _validated(n, al, ga, cands, tol)
