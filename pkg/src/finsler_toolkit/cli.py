"""Command-line entry point: ``finsler-toolkit <group> <command> [options]``.

Exit status is 0 on success, 1 on a domain error (printed with its
module-qualified code) and 2 on a usage error.
"""
import argparse
import json
import math
import sys
import warnings
from fractions import Fraction

import numpy as np

from .errors import ToolkitError, UsageError


def _vector(text):
    try:
        return [float(Fraction(t)) for t in text.replace(" ", "").split(",") if t]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from None


def _exact_vector(text):
    try:
        return [Fraction(t) for t in text.replace(" ", "").split(",") if t]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from None


def _matrix(text):
    """Rows separated by ';', entries by ','; entries may be decimals or fractions."""
    rows = [r for r in text.split(";") if r.strip()]
    try:
        m = np.array([[float(Fraction(t)) for t in r.replace(" ", "").split(",") if t] for r in rows])
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a matrix: {text!r}") from None
    if m.ndim != 2:
        raise argparse.ArgumentTypeError(f"ragged matrix: {text!r}")
    return m


def _words(text):
    return [w.strip() for w in text.split(",")]


# ------------------------------------------------------------------ helpers

def _setup(args):
    from .rootsys import FinslerFunctional, build_root_system
    from .weyl import WeylGroup
    rs = build_root_system(args.type)
    if getattr(args, "coeffs", None) is not None:
        l = FinslerFunctional.from_coweights(rs, args.coeffs)
    else:
        l = FinslerFunctional.default(rs)
    return rs, l, WeylGroup(rs)


def _face(args, rank):
    from .weyl import FaceType
    return FaceType.parse(args.face, rank)


def _fr(v):
    return [str(c) for c in v]


def _point(rs, values, name):
    if len(values) != rs.ambient_dim:
        raise UsageError(f"--{name} needs {rs.ambient_dim} ambient coordinates")
    return np.array(values)


# ------------------------------------------------------------------ commands

def cmd_rootsys_info(args):
    rs, l, W = _setup(args)
    from .rootsys import fundamental_vertices
    out = {"type": rs.tag, "rank": rs.rank, "ambient_dim": rs.ambient_dim,
           "roots": len(rs.roots), "positive_roots": [_fr(r) for r in rs.positive_roots],
           "simple_roots": [_fr(r) for r in rs.simple_roots],
           "cartan_matrix": [list(r) for r in rs.cartan_matrix],
           "fundamental_coweights": [_fr(w) for w in rs.fundamental_coweights],
           "functional": _fr(l.vector), "regular": l.regular}
    if l.regular:
        out["fundamental_vertices"] = [_fr(v) for v in fundamental_vertices(l)]
    return out


def cmd_weyl_enumerate(args):
    rs, _, W = _setup(args)
    return {"type": rs.tag, "order": len(W), "elements": [str(w) for w in W],
            "longest": str(W.w0), "longest_length": W.w0.length,
            "opposition": [i + 1 for i in W.iota]}


def cmd_weyl_bruhat(args):
    rs, _, W = _setup(args)
    u, w = W.element(args.u), W.element(args.w)
    return {"type": rs.tag, "u": str(u), "w": str(w), "u_leq_w": W.bruhat_leq(u, w),
            "w_leq_u": W.bruhat_leq(w, u)}


def cmd_thickening_classify(args):
    from .thickening import thickening_from_words, validate_thickening
    rs, _, W = _setup(args)
    th = thickening_from_words(W, args.words)
    c = validate_thickening(W, th, allow_degenerate=args.allow_degenerate)
    return {"type": rs.tag, "thickening": th.words(), **c.as_dict()}


def cmd_thickening_complement(args):
    from .thickening import complement, thickening_from_words
    rs, _, W = _setup(args)
    th = thickening_from_words(W, args.words)
    return {"type": rs.tag, "thickening": th.words(), "complement": complement(th).words()}


def cmd_thickening_metric(args):
    from .thickening import (ANGLE_TOL, face_direction, metric_thickening,
                             random_chamber_direction, validate_thickening)
    rs, _, W = _setup(args)
    face = _face(args, rs.rank)
    theta0 = face_direction(rs, face)
    if args.theta is not None:
        theta = _point(rs, args.theta, "theta")
        theta = theta / np.linalg.norm(theta)
    else:
        theta = random_chamber_direction(rs, np.random.default_rng(args.seed))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        th = metric_thickening(W, theta0, theta, args.radius)
    c = validate_thickening(W, th, allow_degenerate=True)
    return {"type": rs.tag, "face": str(face), "radius": args.radius, "theta": theta.tolist(),
            "thickening": th.words(), "near_boundary": [w for w, _ in th.near_boundary],
            "warnings": [str(w.message) for w in caught], "tol": ANGLE_TOL,
            "left_invariant": th.left_invariant(face), **c.as_dict()}


def cmd_thickening_balanced(args):
    from .thickening import enumerate_balanced
    rs, _, W = _setup(args)
    face = _face(args, rs.rank)
    mode = "exhaustive" if len(W) <= 48 else "sampled"
    if mode == "sampled" and args.seed is None:
        raise UsageError(f"|W| = {len(W)} exceeds the exhaustive budget; sampling needs --seed")
    res = enumerate_balanced(W, face, seed=args.seed, samples=args.samples)
    return {"type": rs.tag, "face": str(face), "mode": mode, "count": len(res),
            "thickenings": [t.words() for t in res]}


def cmd_polytope_ball(args):
    from .polytope import build_unit_ball
    rs, l, W = _setup(args)
    B = build_unit_ball(rs, l, W)
    return {"type": rs.tag, "f_vector": list(B.face_lattice().f_vector()), **B.to_dict()}


def cmd_polytope_dual(args):
    from .polytope import build_unit_ball, dual_ball
    rs, l, W = _setup(args)
    D = dual_ball(build_unit_ball(rs, l, W))
    star = {str(k): v for k, v in sorted(D.star.items())}
    return {"type": rs.tag, "f_vector": list(D.lattice.f_vector()),
            "primal_f_vector": list(D.primal_lattice.f_vector()),
            "duality_map": star, **D.polytope.to_dict()}


def cmd_polytope_cube_check(args):
    from .polytope import verify_cube_structure
    rs, l, _ = _setup(args)
    rep = verify_cube_structure(rs, l)
    out = {"type": rs.tag, "result": "PASS" if rep.passed else "FAIL", **rep.as_dict()}
    out["labels"] = rep.labels
    return out


def cmd_finsler_dist(args):
    from .finsler import check_metric_positivity, finsler_distance_flat
    rs, l, _ = _setup(args)
    d = finsler_distance_flat(l, _point(rs, args.x, "x"), _point(rs, args.y, "y"))
    return {"type": rs.tag, "distance": d.value, "witnesses": [str(w) for w in d.witnesses],
            "tol": d.tol, "positivity": check_metric_positivity(rs, l).as_dict()}


def cmd_finsler_diamond(args):
    from .finsler import WALL_TOL, diamond_membership, finsler_distance_flat, triangle_defect
    rs, l, _ = _setup(args)
    x, y, z = (_point(rs, getattr(args, k), k) for k in "xyz")
    return {"type": rs.tag, "in_diamond": diamond_membership(l, x, y, z),
            "triangle_defect": triangle_defect(l, x, y, z),
            "distance": finsler_distance_flat(l, x, y).value, "tol": WALL_TOL}


def cmd_finsler_horolimit(args):
    from .finsler import HoroPointFlat, horofunction_convergence
    rs, l, W = _setup(args)
    face = _face(args, rs.rank)
    p = _point(rs, args.p, "p") if args.p is not None else np.zeros(rs.ambient_dim)
    h = HoroPointFlat(l, face, W.element(args.word), p)
    run = horofunction_convergence(h, radius=args.ball, kmax=args.kmax, samples=args.samples,
                                   seed=args.seed)
    return {"type": rs.tag, "face": str(face), "placement": str(h.w), "ball_radius": args.ball,
            "monotone_from_10": run.monotone_from(10), **run.as_dict()}


def cmd_finsler_coords(args):
    from .finsler import compactified_coords, compactified_limit
    rs, _, _ = _setup(args)
    x = _point(rs, args.x, "x")
    if args.kmax is None:
        return {"type": rs.tag, "coords": compactified_coords(rs, x).as_list(), "tol": 1e-9}
    seq = [k * x for k in range(1, args.kmax + 1)]
    return {"type": rs.tag, "sequence": f"k * x, k = 1..{args.kmax}",
            **compactified_limit(rs, seq).as_dict()}


def cmd_symspace_cartan(args):
    from .symspace import cartan_projection
    d = cartan_projection(args.matrix, dps=args.dps)
    return {"delta": list(d.values), "alpha": d.alpha.tolist(),
            "precision": f"{args.dps} digits" if args.dps else "double", "tol": 1e-12}


def cmd_symspace_flaglimit(args):
    from .symspace import contraction_mesh, flag_limit, power_sequence
    face = _face(args, args.matrix.shape[0] - 1)
    mats, invs = power_sequence(args.matrix, args.power)
    fl = flag_limit(mats, face, invs)
    out = {"face": str(face), "power": args.power, **fl.as_dict(),
           "regularity": fl.regularity.as_dict()["rates"]}
    if args.mesh:
        out["contraction"] = contraction_mesh(args.matrix, args.power, fl.forward.full(),
                                              fl.backward.full(), grid=args.mesh).as_dict()
    return out


def cmd_symspace_pos(args):
    from .symspace import Flag, ZERO_TOL, AMBIGUITY_TOL, relative_position_flags
    sigma = Flag.from_vectors(args.flag.T)
    ref = Flag.from_vectors(args.ref.T, tuple(args.ref_dims) if args.ref_dims else None)
    pos = relative_position_flags(sigma, ref)
    return {"position": str(pos), "representative": str(pos.rep),
            "zero_tol": ZERO_TOL, "ambiguity_band": [ZERO_TOL, AMBIGUITY_TOL]}


def cmd_symspace_limitset(args):
    from .symspace import PSL3_GENERATORS, limit_set_sample
    gens = args.generator or list(PSL3_GENERATORS)
    face = _face(args, gens[0].shape[0] - 1)
    s = limit_set_sample(gens, args.radius, face, threads=args.threads)
    return {"count": len(s.flags), **s.as_dict()}


def cmd_example_a2_balanced(args):
    from .rootsys import build_root_system
    from .thickening import enumerate_balanced, validate_thickening
    from .weyl import FaceType, WeylGroup
    W = WeylGroup(build_root_system("A2"))
    res = enumerate_balanced(W, FaceType.chamber(2))
    return {"type": "A2", "count": len(res), "thickenings": [t.words() for t in res],
            "certificates": [validate_thickening(W, t).as_dict() for t in res]}


def cmd_example_psl3_domain(args):
    from .errors import RankAmbiguityError
    from .symspace import (psl3_domain_membership, psl3_incidence_membership,
                           psl3_limit_data, psl3_thickenings, random_psl3_flags,
                           ZERO_TOL, AMBIGUITY_TOL)
    data = psl3_limit_data(radius=args.radius, threads=args.threads)
    th = psl3_thickenings()
    rng = np.random.default_rng(args.seed)
    counts = {"removed": 0, "in-domain": 0}
    disagree = ambiguous = 0
    for f in random_psl3_flags(args.count, rng, data):
        try:
            a = psl3_domain_membership(f, data, th)
            b = psl3_incidence_membership(f, data)
        except RankAmbiguityError:
            ambiguous += 1
            continue
        counts[a] += 1
        disagree += a != b
    return {"radius": args.radius,
            "points": [f.as_dict(9) for f in data.points.flags],
            "lines": [f.as_dict(9) for f in data.lines.flags],
            "flags": [f.as_dict(9) for f in data.flags.flags],
            "thickenings": {"chamber": th.chamber.words(), "point": th.point.words(),
                            "line": th.line.words()},
            "sample": args.count, "counts": counts, "disagreements": disagree,
            "ambiguous": ambiguous, "ambiguity_band": [ZERO_TOL, AMBIGUITY_TOL]}


# ------------------------------------------------------------------ parser

def _common(p, functional=True):
    p.add_argument("--type", required=True, help="root system tag, e.g. A2, B3, A1xA1")
    if functional:
        p.add_argument("--coeffs", type=_exact_vector, default=None,
                       help="functional as coefficients of the fundamental coweights (default all 1)")


def build_parser():
    parser = argparse.ArgumentParser(prog="finsler-toolkit",
                                     description="Root systems, thickenings, polyhedral "
                                                 "Finsler geometry and flag dynamics.")
    parser.add_argument("--format", choices=("table", "json"), default="table")
    parser.add_argument("--threads", type=int, default=1)
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name):
        g = groups.add_parser(name)
        return g.add_subparsers(dest="command", required=True)

    g = group("rootsys")
    p = g.add_parser("info"); _common(p); p.set_defaults(func=cmd_rootsys_info)

    g = group("weyl")
    p = g.add_parser("enumerate"); _common(p, False); p.set_defaults(func=cmd_weyl_enumerate)
    p = g.add_parser("bruhat"); _common(p, False)
    p.add_argument("--u", required=True); p.add_argument("--w", required=True)
    p.set_defaults(func=cmd_weyl_bruhat)

    g = group("thickening")
    p = g.add_parser("classify"); _common(p, False)
    p.add_argument("--words", type=_words, required=True, help="e.g. 'e,s1,s2'")
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(func=cmd_thickening_classify)
    p = g.add_parser("complement"); _common(p, False)
    p.add_argument("--words", type=_words, required=True)
    p.set_defaults(func=cmd_thickening_complement)
    p = g.add_parser("metric"); _common(p, False)
    p.add_argument("--face", default="all")
    p.add_argument("--radius", type=float, default=math.pi / 2)
    p.add_argument("--theta", type=_vector, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_thickening_metric)
    p = g.add_parser("balanced"); _common(p, False)
    p.add_argument("--face", default="all")
    p.add_argument("--seed", type=int, default=None, help="required when |W| > 48 (sampling)")
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_thickening_balanced)

    g = group("polytope")
    for name, fn in (("ball", cmd_polytope_ball), ("dual", cmd_polytope_dual),
                     ("cube-check", cmd_polytope_cube_check)):
        p = g.add_parser(name); _common(p); p.set_defaults(func=fn)

    g = group("finsler")
    p = g.add_parser("dist"); _common(p)
    p.add_argument("--x", type=_vector, required=True); p.add_argument("--y", type=_vector, required=True)
    p.set_defaults(func=cmd_finsler_dist)
    p = g.add_parser("diamond"); _common(p)
    for k in "xyz":
        p.add_argument(f"--{k}", type=_vector, required=True)
    p.set_defaults(func=cmd_finsler_diamond)
    p = g.add_parser("horolimit"); _common(p)
    p.add_argument("--face", default="all")
    p.add_argument("--word", default="e", help="placement of the face, e.g. 's1 s2'")
    p.add_argument("--p", type=_vector, default=None)
    p.add_argument("--ball", type=float, default=5.0)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_finsler_horolimit)
    p = g.add_parser("coords"); _common(p)
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--kmax", type=int, default=None, help="report the limit of k*x, k=1..kmax")
    p.set_defaults(func=cmd_finsler_coords)

    g = group("symspace")
    p = g.add_parser("cartan")
    p.add_argument("--matrix", type=_matrix, required=True, help="rows ';'-separated")
    p.add_argument("--dps", type=int, default=None, help="use mpmath with this many digits")
    p.set_defaults(func=cmd_symspace_cartan)
    p = g.add_parser("flaglimit")
    p.add_argument("--matrix", type=_matrix, required=True)
    p.add_argument("--power", type=int, default=30)
    p.add_argument("--face", default="all")
    p.add_argument("--mesh", type=int, default=0, help="grid size of the contraction mesh")
    p.set_defaults(func=cmd_symspace_flaglimit)
    p = g.add_parser("pos")
    p.add_argument("--flag", type=_matrix, required=True, help="basis vectors as rows")
    p.add_argument("--ref", type=_matrix, required=True, help="basis vectors as rows")
    p.add_argument("--ref-dims", type=lambda t: [int(x) for x in t.split(",")], default=None)
    p.set_defaults(func=cmd_symspace_pos)
    p = g.add_parser("limitset")
    p.add_argument("--generator", type=_matrix, action="append", default=None,
                   help="repeatable; defaults to the diagonal Z^2 example in SL(3)")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--face", default="all")
    p.set_defaults(func=cmd_symspace_limitset)

    g = group("example")
    p = g.add_parser("a2-balanced"); p.set_defaults(func=cmd_example_a2_balanced)
    p = g.add_parser("psl3-domain")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_example_psl3_domain)
    return parser


def _table(obj, indent=0):
    pad = "  " * indent
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict) and v and all(not isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  {kk}: {_scalar(vv)}" for kk, vv in sorted(v.items()))
        elif isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_table(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], (list, dict)):
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  - {json.dumps(x, sort_keys=True)}" for x in v)
        else:
            lines.append(f"{pad}{k}: {_scalar(v)}")
    return lines


def _scalar(v):
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        out = args.func(args)
    except UsageError as e:
        print(f"usage error [{e.code}]: {e}", file=sys.stderr)
        return 2
    except ToolkitError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1
    text = json.dumps(out, sort_keys=True, indent=2) if args.format == "json" else "\n".join(_table(out))
    try:
        print(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # Output was cut off by a closed pipe (e.g. piping into head).
        sys.stdout = None
    return 0


if __name__ == "__main__":
    sys.exit(main())
