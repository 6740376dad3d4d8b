"""Command-line surface: solve, emit JSON certificates and figures, re-verify.

Exit codes: 0 verified success, 1 infeasible or no result, 2 input error,
3 verification failure. All randomness derives from --seed; identical
arguments produce byte-identical JSON.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import balance2d as b2
from . import figures
from .errors import (DegenerateSectionError, InfeasibleError, InputError,
                     NoCrossingError, NoIntersectionError,
                     NoLoopContainsOriginError, NotFoundError,
                     OriginOnBoundaryError, ParseError,
                     PerturbationFailedError, PoiseError, SearchExhaustedError,
                     SubdivisionLimitError, WalkFailedError)
from .geom2d import antipodal_about, eval_boundary, load_polygon, \
    _nearest_with_distance
from .geom3d import Plane3, load_off
from .polytoped import (dump_hrep_text, enumerate_vertices, faces_of_dim,
                        load_hrep)
from .skeleton_balance import (SkeletonPlacement, compose_balance, four_on_edges,
                               halving_point, placement_from_points, pow2_points,
                               prop9_check, prop9_fixture, three_on_edges,
                               verify_skeleton)
from .tripodal import (TripodalTriple, tripodal_by_face_triples, tripodal_search,
                       verify_tripodal)

# Solver ran correctly but found nothing to certify: exit 1, not 3.
NO_RESULT_ERRORS = (NotFoundError, SearchExhaustedError, InfeasibleError,
                    PerturbationFailedError, NoLoopContainsOriginError,
                    DegenerateSectionError, NoCrossingError,
                    NoIntersectionError, SubdivisionLimitError,
                    OriginOnBoundaryError)


@dataclass
class CommandResult:
    exit_code: int
    json_path: str | None = None
    figure_path: str | None = None


# --- small parsing and emission helpers --------------------------------------

def _floats(text):
    try:
        vals = [float(x) for x in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad number list {text!r}: {exc}") from exc
    if not vals:
        raise ParseError("empty number list")
    return vals


def _ints(text):
    vals = []
    for x in text.split():
        try:
            vals.append(int(x))
        except ValueError as exc:
            raise ParseError(f"bad integer list {text!r}: {exc}") from exc
    if not vals:
        raise ParseError("empty integer list")
    return vals


def _grid(text):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ParseError(f"grid must look like 256x256, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ParseError(f"bad grid {text!r}: {exc}") from exc


def _plain(x):
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (bool, str)) or x is None:
        return x
    raise InputError(f"cannot serialize {type(x).__name__}")


def _write(path, text):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _emit(args, payload, passed, no_result=False):
    payload = dict(payload)
    payload["schema"] = 1
    text = json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n"
    json_path = getattr(args, "json", None)
    if json_path:
        _write(json_path, text)
    else:
        sys.stdout.write(text)
    code = 0 if passed else (1 if no_result else 3)
    return CommandResult(code, json_path, None)


def _with_figure(result, path):
    if path and result.figure_path is None:
        return CommandResult(result.exit_code, result.json_path, path)
    return result


def _face_dict(face):
    return {"tight": list(face.tight), "members": list(face.members),
            "dim": int(face.dim)}


def _placement_payload(sp: SkeletonPlacement, cert):
    return {
        "points": [p for p, _ in sp.entries],
        "hosts": [_face_dict(h) for _, h in sp.entries],
        "count": sp.count,
        "target": sp.target,
        "certificate": asdict(cert),
    }


def _hrep_obj(args, H, points):
    """Wireframe OBJ for a 3-dimensional H-polytope with marker points."""
    if H.d != 3:
        raise InputError("--obj output needs a 3-dimensional polytope")
    V = enumerate_vertices(H)
    loops = []
    for f in faces_of_dim(H, V, 1):
        mem = f.members
        loops.append(V.vertices[[mem[0], mem[-1]]])
    labels = tuple(f"edge{i}" for i in range(len(loops)))
    text = figures.obj_overlay(points=points, loops=loops, labels=labels)
    _write(args.obj, text)
    return args.obj


# --- subcommand handlers ------------------------------------------------------

def _cmd_balance2d(args, fast=False):
    poly = load_polygon(args.polygon)
    weights = _floats(args.weights)
    target = _floats(args.target)
    if fast:
        placement = b2.balance_fast(poly, weights, target, eps_geom=args.eps_geom)
    else:
        placement = b2.balance_iterative(poly, weights, target,
                                         eps_geom=args.eps_geom,
                                         collect_trace=bool(args.trace))
    cert = b2.verify_balance(poly, placement, weights,
                             eps_geom=args.eps_geom, eps_bal=args.eps_bal)
    order = sorted(placement.assignments, key=lambda t: t[0])
    pts = np.array([eval_boundary(poly, bp) for _, bp in order])
    payload = {
        "command": "balance2d-fast" if fast else "balance2d",
        "weights": weights,
        "target": target,
        "points": pts,
        "params": [{"edge": bp.edge, "s": bp.s} for _, bp in order],
        "rounds": placement.rounds,
        "certificate": asdict(cert),
    }
    fig = None
    if args.svg:
        text = figures.svg_scene(polygon=poly.vertices, points=pts,
                                 point_sizes=weights, target=target,
                                 trace=placement.trace)
        _write(args.svg, text)
        fig = args.svg
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _cmd_antipodal(args):
    poly = load_polygon(args.polygon)
    center = np.asarray(_floats(args.target))
    bp1, bp2 = antipodal_about(poly, center)
    pts = np.array([eval_boundary(poly, bp1), eval_boundary(poly, bp2)])
    err = float(np.linalg.norm(0.5 * (pts[0] + pts[1]) - center))
    eps = poly.eps_geom(args.eps_geom)
    payload = {
        "command": "antipodal",
        "center": center,
        "points": pts,
        "params": [{"edge": bp.edge, "s": bp.s} for bp in (bp1, bp2)],
        "midpoint_error": err,
        "certificate": {"eps_geom": eps, "passed": err <= eps},
    }
    fig = None
    if args.svg:
        _write(args.svg, figures.svg_scene(polygon=poly.vertices, points=pts,
                                           target=center))
        fig = args.svg
    return _with_figure(_emit(args, payload, err <= eps), fig)


def _cmd_reduce_partition(args):
    inst = b2.PartitionInstance(tuple(_ints(args.partition)))
    poly, weights = b2.gadget_from_partition(inst)
    payload = {
        "command": "reduce-partition",
        "values": list(inst.values),
        "weights": weights,
        "polygon": poly.vertices,
        "certificate": {"passed": True},
    }
    fig = None
    if args.svg:
        _write(args.svg, figures.svg_scene(polygon=poly.vertices))
        fig = args.svg
    return _with_figure(_emit(args, payload, True), fig)


def _check_within_half(weights, groups):
    exact = [Fraction(float(w)) for w in weights]
    half = sum(exact, Fraction(0)) / 2
    return all(sum((exact[i] for i in g), Fraction(0)) <= half for g in groups)


def _cmd_solve_partition(args):
    weights = _floats(args.weights)
    three = b2.partition_three(weights)
    ok = _check_within_half(weights, three.groups)
    payload = {
        "command": "solve-partition",
        "weights": weights,
        "groups": [list(g) for g in three.groups],
        "sums": list(three.sums),
        "within_half": ok,
        "certificate": {"passed": ok},
    }
    return _emit(args, payload, ok, no_result=True)


def _cmd_gadget_decide(args):
    inst = b2.PartitionInstance(tuple(_ints(args.partition)))
    decision = b2.gadget_decide(inst)
    poly, weights = b2.gadget_from_partition(inst)
    payload = {
        "command": "gadget-decide",
        "values": list(inst.values),
        "balanceable": decision,
    }
    pts = None
    passed = True
    if decision:
        placement = b2.gadget_witness(inst)
        if placement is None:
            raise WalkFailedError("decision true but no witness reconstructed")
        cert = b2.verify_balance(poly, placement, weights)
        order = sorted(placement.assignments, key=lambda t: t[0])
        pts = np.array([eval_boundary(poly, bp) for _, bp in order])
        payload["witness"] = {"weights": weights, "points": pts}
        payload["certificate"] = asdict(cert)
        passed = cert.passed
    else:
        payload["witness"] = None
        payload["certificate"] = {"passed": True}
    fig = None
    if args.svg:
        _write(args.svg, figures.svg_scene(
            polygon=poly.vertices, points=pts,
            point_sizes=weights if pts is not None else None))
        fig = args.svg
    return _with_figure(
        _emit(args, payload, passed and decision, no_result=not decision), fig)


def _tripodal_common(args, triple, poly, command):
    cert = verify_tripodal(poly, triple, eps_geom=args.eps_geom or 1e-6,
                           eps_bal=args.eps_bal or 1e-6)
    payload = {
        "command": command,
        "eps_geom": args.eps_geom or 1e-6,
        "eps_bal": args.eps_bal or 1e-6,
        "points": triple.points,
        "faces": list(triple.faces),
        "radius": triple.radius,
        "t": triple.t,
        "theta": triple.theta,
        "certificate": asdict(cert),
    }
    fig = None
    if args.svg:
        _write(args.svg, figures.svg_scene3(poly, points=triple.points,
                                            loop=triple.points,
                                            target=np.zeros(3)))
        fig = args.svg
    if args.obj:
        _write(args.obj, figures.obj_overlay(poly, points=triple.points,
                                             loops=[triple.points],
                                             labels=("tripod",)))
        fig = fig or args.obj
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _cmd_tripodal(args):
    poly = load_off(args.off)
    triple = tripodal_search(poly, grid=_grid(args.grid))
    return _tripodal_common(args, triple, poly, "tripodal")


def _cmd_tripodal_oracle(args):
    poly = load_off(args.off)
    triple = tripodal_by_face_triples(poly, samples=args.samples)
    return _tripodal_common(args, triple, poly, "tripodal-oracle")


def _cmd_three_on_edges(args):
    H = load_hrep(args.hrep)
    target = np.asarray(_floats(args.target))
    sp = three_on_edges(H, target)
    cert = verify_skeleton(H, sp, eps_geom=args.eps_geom, eps_bal=args.eps_bal)
    payload = {"command": "three-on-edges"}
    payload.update(_placement_payload(sp, cert))
    fig = _hrep_obj(args, H, sp.points()) if args.obj else None
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _cmd_four_on_edges(args):
    poly = load_off(args.off)
    plane = Plane3(tuple(_floats(args.plane)), 0.0)
    sp = four_on_edges(poly, plane)
    cert = verify_skeleton(poly, sp, eps_geom=args.eps_geom, eps_bal=args.eps_bal)
    payload = {
        "command": "four-on-edges",
        "plane": list(plane.normal),
        "points": sp.points(),
        "hosts": [{"face": list(h.tight), "members": list(h.members),
                   "dim": int(h.dim)} for _, h in sp.entries],
        "count": sp.count,
        "target": sp.target,
        "certificate": asdict(cert),
    }
    fig = None
    if args.svg:
        _write(args.svg, figures.svg_scene3(poly, points=sp.points()))
        fig = args.svg
    if args.obj:
        _write(args.obj, figures.obj_overlay(poly, points=sp.points()))
        fig = fig or args.obj
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _halving_residuals(H, x):
    norms = np.linalg.norm(H.A, axis=1)
    rp = (H.A @ x - H.b) / norms
    rn = (-H.A @ x - H.b) / norms
    violation = max(float(rp.max()), float(rn.max()), 0.0)
    touch = max(float(np.abs(rp).min()), float(np.abs(rn).min()))
    return violation, touch


def _cmd_halving(args):
    H = load_hrep(args.hrep)
    wit = halving_point(H, seed=args.seed)
    V = enumerate_vertices(H)
    eps = args.eps_geom if args.eps_geom is not None else 1e-7 * V.diam
    violation, touch = _halving_residuals(H, wit.x)
    passed = violation <= eps and touch <= eps
    payload = {
        "command": "halving",
        "seed": args.seed,
        "x": wit.x,
        "vertex_type": list(wit.vertex_type),
        "face_P": _face_dict(wit.face_P),
        "face_negP": _face_dict(wit.face_negP),
        "magnitude": wit.magnitude,
        "attempts": wit.attempts,
        "certificate": {"violation": violation, "boundary_distance": touch,
                        "eps_geom": eps, "passed": passed},
    }
    return _emit(args, payload, passed)


def _cmd_pow2(args):
    H = load_hrep(args.hrep)
    sp = pow2_points(H, args.k, seed=args.seed)
    cert = verify_skeleton(H, sp, eps_geom=args.eps_geom, eps_bal=args.eps_bal)
    payload = {"command": "pow2", "k": args.k, "seed": args.seed}
    payload.update(_placement_payload(sp, cert))
    fig = _hrep_obj(args, H, sp.points()) if args.obj else None
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _cmd_compose(args):
    H = load_hrep(args.hrep)
    sp = compose_balance(H, seed=args.seed)
    cert = verify_skeleton(H, sp, eps_geom=args.eps_geom, eps_bal=args.eps_bal)
    payload = {"command": "compose", "seed": args.seed}
    payload.update(_placement_payload(sp, cert))
    fig = _hrep_obj(args, H, sp.points()) if args.obj else None
    return _with_figure(_emit(args, payload, cert.passed), fig)


def _cmd_prop9_fixture(args):
    H = prop9_fixture(args.dim)
    payload = {
        "command": "prop9-fixture",
        "dim": args.dim,
        "m": H.m,
        "A": H.A,
        "b": H.b,
        "certificate": {"passed": True},
    }
    if args.out:
        _write(args.out, dump_hrep_text(H))
    return _emit(args, payload, True)


def _cmd_prop9_check(args):
    H = load_hrep(args.hrep)
    empty = prop9_check(H, args.k)
    payload = {
        "command": "prop9-check",
        "k": args.k,
        "empty": empty,
        "certificate": {"passed": empty},
    }
    return _emit(args, payload, empty, no_result=True)


# --- certificate re-verification ----------------------------------------------

def _need(args, attr):
    val = getattr(args, attr, None)
    if not val:
        raise InputError(f"check needs --{attr} for this certificate")
    return val


def _recheck(args, payload):
    cmd = payload.get("command")
    cert = payload.get("certificate", {})
    if cmd in ("balance2d", "balance2d-fast"):
        poly = load_polygon(_need(args, "polygon"))
        re = b2.verify_balance_points(poly, payload["points"], payload["weights"],
                                      payload["target"], cert.get("eps_geom"),
                                      cert.get("eps_bal"))
        return re.passed
    if cmd == "antipodal":
        poly = load_polygon(_need(args, "polygon"))
        pts = np.asarray(payload["points"])
        center = np.asarray(payload["center"])
        err = float(np.linalg.norm(0.5 * (pts[0] + pts[1]) - center))
        mem = max(_nearest_with_distance(poly, p)[1] for p in pts)
        return err <= cert["eps_geom"] and mem <= cert["eps_geom"]
    if cmd == "reduce-partition":
        inst = b2.PartitionInstance(tuple(payload["values"]))
        poly, weights = b2.gadget_from_partition(inst)
        return (list(weights) == payload["weights"]
                and np.allclose(poly.vertices, payload["polygon"]))
    if cmd == "solve-partition":
        return (_check_within_half(payload["weights"], payload["groups"])
                == payload["within_half"])
    if cmd == "gadget-decide":
        inst = b2.PartitionInstance(tuple(payload["values"]))
        if b2.partition_oracle(inst) != payload["balanceable"]:
            return False
        if payload["balanceable"]:
            poly, weights = b2.gadget_from_partition(inst)
            re = b2.verify_balance_points(poly, payload["witness"]["points"],
                                          payload["witness"]["weights"],
                                          (0.0, 0.0))
            return re.passed
        return True
    if cmd in ("tripodal", "tripodal-oracle"):
        poly = load_off(_need(args, "off"))
        triple = TripodalTriple(np.asarray(payload["points"]),
                                tuple(payload["faces"]), payload["radius"],
                                payload["t"], payload["theta"])
        re = verify_tripodal(poly, triple, payload["eps_geom"],
                             payload["eps_bal"])
        return re.passed
    if cmd in ("three-on-edges", "pow2", "compose"):
        H = load_hrep(_need(args, "hrep"))
        sp = placement_from_points(H, payload["points"], payload["target"])
        re = verify_skeleton(H, sp, cert.get("eps_geom"), cert.get("eps_bal"))
        return re.passed
    if cmd == "four-on-edges":
        poly = load_off(_need(args, "off"))
        pts = np.asarray(payload["points"])
        sp = placement_for_mesh(poly, pts, payload["hosts"])
        re = verify_skeleton(poly, sp, cert.get("eps_geom"), cert.get("eps_bal"))
        return re.passed
    if cmd == "halving":
        H = load_hrep(_need(args, "hrep"))
        violation, touch = _halving_residuals(H, np.asarray(payload["x"]))
        return violation <= cert["eps_geom"] and touch <= cert["eps_geom"]
    if cmd == "prop9-fixture":
        H = load_hrep(_need(args, "hrep"))
        return (H.m == payload["m"] and np.allclose(H.A, payload["A"])
                and np.allclose(H.b, payload["b"]))
    if cmd == "prop9-check":
        H = load_hrep(_need(args, "hrep"))
        return prop9_check(H, payload["k"]) == payload["empty"]
    raise InputError(f"unknown certificate command {cmd!r}")


def placement_for_mesh(poly, pts, hosts):
    """Rebuild a mesh placement from certificate data for re-verification."""
    from .polytoped import FaceD
    entries = []
    for p, h in zip(pts, hosts):
        mem = tuple(h["members"])
        seg = poly.vertices[list(mem)]
        mid = seg.mean(axis=0)
        entries.append((np.asarray(p, dtype=float),
                        FaceD(tuple(h.get("face", ())), mem, int(h["dim"]),
                              mid, np.empty((0, 3)))))
    return SkeletonPlacement(entries, len(entries), np.zeros(3))


def _cmd_check(args):
    if not args.json:
        raise InputError("check needs --json CERTIFICATE")
    with open(args.json, "r", encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad certificate JSON: {exc}") from exc
    if payload.get("schema") != 1:
        raise InputError(f"unsupported certificate schema {payload.get('schema')!r}")
    ok = _recheck(args, payload)
    return CommandResult(0 if ok else 3, args.json, None)


# --- parser -------------------------------------------------------------------

def _add_common(p, *names):
    if "json" in names:
        p.add_argument("--json", help="certificate output path (default stdout)")
    if "svg" in names:
        p.add_argument("--svg", help="SVG figure output path")
    if "obj" in names:
        p.add_argument("--obj", help="OBJ overlay output path")
    if "eps" in names:
        p.add_argument("--eps-geom", type=float, default=None,
                       help="membership tolerance (command-specific scale)")
        p.add_argument("--eps-bal", type=float, default=None,
                       help="balance tolerance (command-specific scale)")
    if "seed" in names:
        p.add_argument("--seed", type=int, default=0,
                       help="seed for perturbations (default 0)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="poise",
        description="Balanced placements on boundaries and skeletons, "
                    "with machine-checkable certificates.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("balance2d", help="place weights on a polygon boundary")
    p.add_argument("--polygon", required=True)
    p.add_argument("--weights", required=True, help='e.g. "3 2 2"')
    p.add_argument("--target", default="0 0")
    p.add_argument("--trace", action="store_true",
                   help="record migration curves in the SVG")
    _add_common(p, "eps", "svg", "json")
    p.set_defaults(func=_cmd_balance2d)

    p = sub.add_parser("balance2d-fast",
                       help="three-location variant via weight partitioning")
    p.add_argument("--polygon", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--target", default="0 0")
    _add_common(p, "eps", "svg", "json")
    p.set_defaults(func=lambda a: _cmd_balance2d(a, fast=True), trace=False)

    p = sub.add_parser("antipodal", help="boundary pair with a given midpoint")
    p.add_argument("--polygon", required=True)
    p.add_argument("--target", default="0 0", help="midpoint (default origin)")
    _add_common(p, "eps", "svg", "json")
    p.set_defaults(func=_cmd_antipodal)

    p = sub.add_parser("reduce-partition",
                       help="hexagon gadget and weights for a PARTITION instance")
    p.add_argument("--partition", required=True, help='e.g. "2 3 7"')
    _add_common(p, "svg", "json")
    p.set_defaults(func=_cmd_reduce_partition)

    p = sub.add_parser("solve-partition",
                       help="split weights into three half-bounded groups")
    p.add_argument("--weights", required=True)
    _add_common(p, "json")
    p.set_defaults(func=_cmd_solve_partition)

    p = sub.add_parser("gadget-decide",
                       help="decide balanceability of the hexagon gadget")
    p.add_argument("--partition", required=True)
    _add_common(p, "svg", "json")
    p.set_defaults(func=_cmd_gadget_decide)

    p = sub.add_parser("tripodal", help="equilateral origin-centered triple")
    p.add_argument("--off", required=True)
    p.add_argument("--grid", default="256x256", help="search grid (default 256x256)")
    _add_common(p, "eps", "svg", "obj", "json")
    p.set_defaults(func=_cmd_tripodal)

    p = sub.add_parser("tripodal-oracle",
                       help="independent face-triple sweep for the same triple")
    p.add_argument("--off", required=True)
    p.add_argument("--samples", type=int, default=64)
    _add_common(p, "eps", "svg", "obj", "json")
    p.set_defaults(func=_cmd_tripodal_oracle)

    p = sub.add_parser("three-on-edges",
                       help="three edge points balancing a target")
    p.add_argument("--hrep", required=True)
    p.add_argument("--target", default="0 0 0")
    _add_common(p, "eps", "obj", "json")
    p.set_defaults(func=_cmd_three_on_edges)

    p = sub.add_parser("four-on-edges",
                       help="four edge points from a planar section")
    p.add_argument("--off", required=True)
    p.add_argument("--plane", default="0 0 1", help="section plane normal")
    _add_common(p, "eps", "svg", "obj", "json")
    p.set_defaults(func=_cmd_four_on_edges)

    p = sub.add_parser("halving", help="boundary point with x and -x on low faces")
    p.add_argument("--hrep", required=True)
    _add_common(p, "eps", "seed", "json")
    p.set_defaults(func=_cmd_halving)

    p = sub.add_parser("pow2", help="2^k skeleton points summing to the origin")
    p.add_argument("--hrep", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p, "eps", "seed", "obj", "json")
    p.set_defaults(func=_cmd_pow2)

    p = sub.add_parser("compose", help="d skeleton points for d = 2^i*3^j, j <= 1")
    p.add_argument("--hrep", required=True)
    _add_common(p, "eps", "seed", "obj", "json")
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("prop9-fixture", help="triangle-product separation fixture")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", help="write the H-rep text here")
    _add_common(p, "json")
    p.set_defaults(func=_cmd_prop9_fixture)

    p = sub.add_parser("prop9-check",
                       help="does the low skeleton avoid the reflected body")
    p.add_argument("--hrep", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p, "json")
    p.set_defaults(func=_cmd_prop9_check)

    p = sub.add_parser("check", help="re-verify a certificate against geometry")
    p.add_argument("--json", required=True)
    p.add_argument("--polygon")
    p.add_argument("--off")
    p.add_argument("--hrep")
    p.set_defaults(func=_cmd_check)

    return ap


def run(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(int(exc.code or 0))
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"poise: {exc}", file=sys.stderr)
        return CommandResult(2)
    except NO_RESULT_ERRORS as exc:
        print(f"poise: no result: {exc}", file=sys.stderr)
        return CommandResult(1)
    except PoiseError as exc:
        print(f"poise: verification failure: {exc}", file=sys.stderr)
        return CommandResult(3)


def main():
    sys.exit(run(sys.argv[1:]).exit_code)


if __name__ == "__main__":
    main()
