"""Command-line front end.

    pdwtiling classify --n 6 --alpha "acos(-1/(2*sqrt(7)))" --gamma "4*pi/3"
    pdwtiling tiling --n 6 --phi "-pi/3" --a "acos(1/3)" --format obj --out t.obj
    pdwtiling phase --n 6 --res 200 --out phase.csv

Exit status: 0 on success, 2 on usage or domain errors, 3 when a built
tiling fails verification.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import export, pdwgraph, quadcore, tiling
from .errors import DomainError, VerificationError
from .quadcore import Branch, TileParams

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 2, 3
GUARD_BAND = 1e-6

# -- expression parser ----------------------------------------------------------

_FUNCS = {
    "sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "asin": math.asin, "acos": math.acos, "atan": math.atan, "atan2": math.atan2,
    "arcsin": math.asin, "arccos": math.acos, "arctan": math.atan,
    "exp": math.exp, "log": math.log, "radians": math.radians, "degrees": math.degrees,
}
_CONSTS = {"pi": math.pi, "tau": math.tau, "e": math.e}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_expr(text: str) -> float:
    """Evaluate a numeric literal such as ``acos(-1/(2*sqrt(7)))``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
        return float(_eval(tree.body))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"cannot evaluate {text!r}: {exc}") from exc


def _eval(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id in _CONSTS:
        return _CONSTS[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval(node.operand))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and not node.keywords):
        return _FUNCS[node.func.id](*[_eval(a) for a in node.args])
    raise ValueError(f"unsupported syntax: {ast.dump(node)[:60]}")


# -- configuration ----------------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    alpha: float | None = None
    gamma: float | None = None
    a: float | None = None
    phi: float | None = None
    res: int = 200
    tol: float = tiling.TOL
    out: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tolerances must be positive")
        if self.res < 2:
            raise DomainError("grid resolution must be >= 2")


def _angle(args, name):
    raw = getattr(args, name, None)
    if raw is None:
        return None
    x = parse_expr(raw)
    return math.radians(x) if args.deg else x


def _config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.cmd, n=getattr(args, "n", None),
        alpha=_angle(args, "alpha"), gamma=_angle(args, "gamma"),
        a=_angle(args, "a"), phi=_angle(args, "phi"),
        res=getattr(args, "res", 200), tol=getattr(args, "tol", tiling.TOL),
        out=getattr(args, "out", None), fmt=getattr(args, "format", "json") or "json",
    )


# -- subcommands ----------------------------------------------------------------------

def _write(cfg: RunConfig, text: str, stdout):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)


def _solution_dict(s) -> dict:
    return {"a": s.a, "b": s.b, "c": s.c, "beta": s.beta, "delta": s.delta,
            "branch": s.branch.value, "phi": s.phi, "phi_prime": s.phi_prime}


def cmd_classify(cfg, stdout):
    p = TileParams(cfg.n, cfg.alpha, cfg.gamma)
    cl = quadcore.classify(p)
    out = {
        "region": cl.region.tag, "multiplicity": cl.region.multiplicity,
        "discriminant": cl.discriminant,
        "roots": [{"a": a, "branch": b.value} for a, b in cl.roots],
        "solutions": [_solution_dict(s) for s in cl.solutions],
    }
    _write(cfg, json.dumps(out, indent=1) + "\n", stdout)
    return EXIT_OK


def _quadrangles(cfg):
    p = TileParams(cfg.n, cfg.alpha, cfg.gamma)
    if cfg.a is not None:
        return [quadcore.build_quadrangle(p, cfg.a)]
    sols = quadcore.classify(p).solutions
    if not sols:
        raise DomainError(f"(alpha, gamma) lies outside every tile region for n={cfg.n}")
    return [quadcore.build_quadrangle(p, s.a) for s in sols]


def _quad_dict(q) -> dict:
    return {
        "n": q.n, "vertices": {nm: list(v) for nm, v in zip(("N", "v0", "v1", "v2"),
                                                            (q.N, q.v0, q.v1, q.v2))},
        "angles": dict(zip(("beta", "alpha", "delta", "gamma"), q.corner_angles)),
        "edges": {"a": q.a, "b": q.b, "c": q.c}, "area": q.area(),
        "violations": quadcore.check_quadrangle(q),
    }


def cmd_tile(cfg, stdout):
    quads = _quadrangles(cfg)
    _write(cfg, json.dumps([_quad_dict(q) for q in quads], indent=1) + "\n", stdout)
    return EXIT_OK if all(not quadcore.check_quadrangle(q) for q in quads) else EXIT_VERIFY


def _emit_tiling(cfg, t, stdout, stderr, chords):
    rep = tiling.verify(t, tol=cfg.tol)
    stderr.write(str(rep) + "\n")
    text = export.to_obj(t, chords) if cfg.fmt == "obj" else export.dumps(t) + "\n"
    _write(cfg, text, stdout)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_tiling(cfg, stdout, stderr, chords=32):
    if cfg.phi is not None:
        if cfg.a is None:
            raise DomainError("--phi needs --a")
        t = tiling.from_coords(cfg.n, tiling.Coords(cfg.phi, cfg.a))
    elif cfg.alpha is not None and cfg.gamma is not None:
        quads = _quadrangles(cfg)
        if len(quads) > 1:
            stderr.write(f"{len(quads)} tiles exist; using the smaller edge a\n")
        t = tiling.assemble(cfg.n, quads[0])
    else:
        raise DomainError("give --phi and --a, or --alpha and --gamma")
    return _emit_tiling(cfg, t, stdout, stderr, chords)


def phase_axis(res: int) -> list[float]:
    """Cell centres of a res-point grid over (0, 2 pi), minus the guard bands."""
    pts = [(i + 0.5) * 2.0 * math.pi / res for i in range(res)]
    bad = (math.pi / 2, math.pi)
    return [x for x in pts if all(abs(x - b) > GUARD_BAND for b in bad)]


PHASE_HEADER = ["alpha", "gamma", "region", "multiplicity", "a_minus", "a_plus", "discriminant"]


def phase_rows(n: int, res: int):
    axis = phase_axis(res)
    for al in axis:
        for ga in axis:
            p = TileParams(n, al, ga)
            try:
                cl = quadcore.classify(p)
            except DomainError:
                yield [repr(al), repr(ga), "Degenerate", "0", "", "",
                       repr(quadcore.discriminant(p))]
                continue
            am = ap = ""
            for s in cl.solutions:
                if s.branch in (Branch.MINUS, Branch.DOUBLE):
                    am = repr(s.a)
                if s.branch in (Branch.PLUS, Branch.DOUBLE):
                    ap = repr(s.a)
            yield [repr(al), repr(ga), cl.region.tag, str(cl.region.multiplicity),
                   am, ap, repr(cl.discriminant)]


def cmd_phase(cfg, stdout):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PHASE_HEADER)
    for row in phase_rows(cfg.n, cfg.res):
        w.writerow(row)
    _write(cfg, buf.getvalue(), stdout)
    return EXIT_OK


def cmd_matchings(faces, stdout):
    sk = pdwgraph.build_skeleton(faces)
    ms = pdwgraph.perfect_face_matchings(sk)
    orbits = pdwgraph.matching_orbits(sk, ms, pdwgraph.automorphisms(sk))
    out = {
        "faces": faces, "count": len(ms), "orbits": len(orbits),
        "matchings": [{"pairs": [list(p) for p in m.pairs],
                       "edges": sorted(sorted(e) for e in m.edges)} for m in ms],
    }
    stdout.write(json.dumps(out, indent=1) + "\n")
    return EXIT_OK


def _summary(t) -> dict:
    iso = tiling.is_isohedral(t)
    axes = tiling.detect_axes(t)
    return {
        "isohedral": iso.isohedral, "transitive": iso.transitive,
        "face_orbits": iso.orbits,
        "axes": [{"order": ax.order, "through": ax.through, "u": ax.u.tolist()} for ax in axes],
        "layout": "".join(("M" if p.mirrored else "D") + str(p.shift)
                          for p in tiling.layout_of(t)),
        "verified": tiling.verify(t).ok,
    }


def cmd_search(cfg, reflect, stdout):
    quads = _quadrangles(cfg)
    out = []
    for q in quads:
        found = tiling.exhaustive_layouts(cfg.n, q, allow_reflection=reflect)
        out.append({"a": q.a, "layouts": [_summary(t) for t in found]})
    _write(cfg, json.dumps(out, indent=1) + "\n", stdout)
    return EXIT_OK


def cmd_special(cfg, search, stdout, stderr, chords=32):
    iso, other = tiling.special_pair(search=search)
    status = EXIT_OK
    docs = {}
    for name, t in (("isohedral", iso), ("non_isohedral", other)):
        rep = tiling.verify(t, tol=cfg.tol)
        if not rep.ok:
            status = EXIT_VERIFY
        docs[name] = t
    if cfg.out:
        outdir = Path(cfg.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, t in docs.items():
            if cfg.fmt == "obj":
                (outdir / f"{name}.obj").write_text(export.to_obj(t, chords))
            else:
                export.save(t, outdir / f"{name}.json")
    summary = {"tile": dict(iso.values)}
    summary.update({name: _summary(t) for name, t in docs.items()})
    stdout.write(json.dumps(summary, indent=1) + "\n")
    return status


# -- argument parsing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdwtiling", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def angles(p, need=True, a=True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--alpha", required=need)
        p.add_argument("--gamma", required=need)
        if a:
            p.add_argument("--a", help="meridian edge length (radians unless --deg)")
        p.add_argument("--deg", action="store_true", help="angles given in degrees")

    def output(p, formats=("json",)):
        p.add_argument("--out")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--tol", type=float, default=tiling.TOL)

    p = sub.add_parser("classify", help="region and admissible tiles for (n, alpha, gamma)")
    angles(p, a=False)
    output(p)
    p = sub.add_parser("tile", help="build the quadrangle(s)")
    angles(p)
    output(p)
    p = sub.add_parser("tiling", help="assemble, verify and export a tiling")
    angles(p, need=False)
    p.add_argument("--phi")
    p.add_argument("--chords", type=int, default=32)
    output(p, ("json", "obj"))
    p = sub.add_parser("phase", help="CSV of regions and roots over an (alpha, gamma) grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--res", type=int, default=200)
    output(p, ("csv",))
    p = sub.add_parser("matchings", help="perfect face-matchings of a skeleton")
    p.add_argument("--faces", type=int, required=True)
    p = sub.add_parser("search", help="all layouts of one tile")
    angles(p)
    p.add_argument("--reflect", action="store_true", help="allow mirrored copies")
    output(p)
    p = sub.add_parser("special", help="the double-root tile's two tilings")
    p.add_argument("--search", action="store_true", help="rerun the layout search")
    p.add_argument("--chords", type=int, default=32)
    output(p, ("json", "obj"))
    return ap


ANGLE_FLAGS = ("--alpha", "--gamma", "--a", "--phi")


def _join_negative(argv: list[str]) -> list[str]:
    """Glue ``--phi -pi/3`` into ``--phi=-pi/3`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ANGLE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _join_negative(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except _Usage as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    if not hasattr(args, "deg"):
        args.deg = False
    try:
        if args.cmd == "matchings":
            return cmd_matchings(args.faces, stdout)
        cfg = _config(args)
        if args.cmd == "classify":
            return cmd_classify(cfg, stdout)
        if args.cmd == "tile":
            return cmd_tile(cfg, stdout)
        if args.cmd == "tiling":
            return cmd_tiling(cfg, stdout, stderr, args.chords)
        if args.cmd == "phase":
            return cmd_phase(cfg, stdout)
        if args.cmd == "search":
            return cmd_search(cfg, args.reflect, stdout)
        if args.cmd == "special":
            return cmd_special(cfg, args.search, stdout, stderr, args.chords)
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except VerificationError as exc:
        stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    return EXIT_USAGE  # pragma: no cover


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
