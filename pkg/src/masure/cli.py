"""Command-line entry point.

Subcommands: classify, roots, weyl, cone, prenilpotent, tree (act, dist,
retract, geodesic, neighbors, ball, orbit, exchange), hecke, gm, uma,
selftest.  Exit codes: 0 success, 1 domain error, 2 usage error.

Exact values (fractions) are emitted as strings in JSON payloads so that
printing and parsing round-trip bit-exactly.  All randomness sits behind
--seed; the environment variable MASURE_SEED overrides it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance, cone, hecke, kmdata, loop, tree, weyl
from .fields import Mat2, parse_element, parse_field


def _load_arg(text: str) -> str:
    """Inline payload, or @path to read a file."""
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return text


def _frac_str(x) -> str:
    return str(Fraction(x))


def _emit(obj, as_json: bool, text: str | None = None) -> None:
    if as_json:
        print(json.dumps(obj, indent=None, sort_keys=True))
    else:
        print(text if text is not None else json.dumps(obj, sort_keys=True))


def _data_arg(text: str) -> kmdata.KacMoodyData:
    return kmdata.data_from_json(_load_arg(text))


def _vec_arg(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in text.replace(" ", "").split(","))


def _word_arg(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text or text in ("e", "-"):
        return ()
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def _mat_arg(cfg, text: str) -> Mat2:
    rows = json.loads(_load_arg(text))
    a, b = rows[0]
    c, d = rows[1]
    return Mat2(*(parse_element(cfg, str(e)) for e in (a, b, c, d)))


def _mat_out(g: Mat2) -> list[list[str]]:
    return [[str(g.a), str(g.b)], [str(g.c), str(g.d)]]


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_classify(args) -> int:
    m = kmdata.validate(json.loads(_load_arg(args.matrix)))
    comps = kmdata.decompose(m)
    if len(comps) == 1:
        cls = kmdata.classify(m).value
        _emit({"class": cls}, True)
    else:
        out = [{"indices": list(c), "class": kmdata.classify(m.submatrix(c)).value}
               for c in comps]
        _emit({"components": out}, True)
    return 0


def _cmd_roots(args) -> int:
    data = _data_arg(args.data)
    rs = weyl.enumerate_real_roots(data, args.max_height)
    by_h = rs.by_height()
    if args.json:
        obj = {str(h): [list(r.root.coeffs) for r in v] for h, v in sorted(by_h.items())}
        _emit({"max_height": args.max_height, "by_height": obj}, True)
    else:
        for h in sorted(by_h):
            roots = " ".join(str(r.root) for r in by_h[h])
            print(f"height {h}: {roots}")
    return 0


def _cmd_weyl(args) -> int:
    data = _data_arg(args.data)
    w = weyl.weyl_element(data, _word_arg(args.word))
    inv = weyl.inversion_set(data, w)
    obj = {
        "length": w.length(),
        "reduced_word": list(w.word),
        "action_on_roots": [list(r) for r in w.q_mat],
        "action_on_y": [list(r) for r in w.y_mat],
        "inversion_set": [list(r.root.coeffs) for r in inv],
    }
    if args.json:
        _emit(obj, True)
    else:
        print(f"length {w.length()}, reduced word {list(w.word)}")
        print(f"inversions: {' '.join(str(r.root) for r in inv) or '(none)'}")
        print(f"action on Y: {obj['action_on_y']}")
    return 0


def _cmd_cone(args) -> int:
    data = _data_arg(args.data)
    cert = cone.normalize_to_dominant(data, _vec_arg(args.vector), args.cap)
    if isinstance(cert, cone.InCone):
        obj = {"status": "in_cone", "word": list(cert.w.word),
               "image": [_frac_str(x) for x in cert.image], "steps": cert.steps}
    elif isinstance(cert, cone.NotInCone):
        obj = {"status": "not_in_cone", "reason": cert.reason}
    else:
        obj = {"status": "unknown", "steps": cert.steps}
    _emit(obj, True)
    return 0


def _find_root(data: kmdata.KacMoodyData, coords, bound: int) -> weyl.RealRoot:
    v = kmdata.RootVector(tuple(int(x) for x in coords))
    target = v if v.is_positive() else -v
    rs = weyl.enumerate_real_roots(data, max(abs(v.height()), 1))
    found = rs.find(target)
    if found is None:
        raise cone.ConeError(f"{v} is not a real root")
    return found if v.is_positive() else found.negate()


def _cmd_prenilpotent(args) -> int:
    data = _data_arg(args.data)
    alpha = _find_root(data, _vec_arg(args.alpha), args.bound)
    beta = _find_root(data, _vec_arg(args.beta), args.bound)
    v = cone.prenilpotent_pair(data, alpha, beta, args.bound)
    if isinstance(v, cone.Prenilpotent):
        interval = cone.closed_interval(data, alpha, beta, args.bound)
        obj = {"verdict": "prenilpotent",
               "to_positive": list(v.to_positive.word),
               "to_negative": list(v.to_negative.word),
               "closed_interval": [list(r.coeffs) for r in interval]}
    elif isinstance(v, cone.NotPrenilpotent):
        obj = {"verdict": "not_prenilpotent", "reason": v.reason}
    else:
        obj = {"verdict": "unknown", "bound": v.bound}
    _emit(obj, True)
    return 0


def _cmd_tree(args) -> int:
    cfg = parse_field(args.field)
    sub = args.tree_cmd
    if sub == "act":
        g = _mat_arg(cfg, args.g)
        p = tree.parse_point(cfg, args.p)
        _emit({"point": tree.point_to_str(tree.act(g, p))}, args.json,
              tree.point_to_str(tree.act(g, p)))
    elif sub == "dist":
        d = tree.distance(tree.parse_point(cfg, args.p), tree.parse_point(cfg, args.q))
        _emit({"distance": _frac_str(d)}, args.json, str(d))
    elif sub == "retract":
        p = tree.parse_point(cfg, args.p)
        if args.q is None:
            obj = {"plus": _frac_str(tree.retract_plus(p)),
                   "minus": _frac_str(tree.retract_minus(p))}
            _emit(obj, args.json, f"rho+ = {obj['plus']}, rho- = {obj['minus']}")
        else:
            q = tree.parse_point(cfg, args.q)
            center = 1 if args.center in ("+", "+inf", "plus") else -1
            tp = tree.retract_segment(p, q, center)
            obj = {"breakpoints": [_frac_str(t) for t in tp.breaks],
                   "values": [_frac_str(v) for v in tp.values],
                   "speed": _frac_str(tp.speed),
                   "folds": [[_frac_str(t), _frac_str(v)] for t, v in tp.folds()]}
            _emit(obj, args.json,
                  " -> ".join(obj["values"]) + f"   (breaks {obj['breakpoints']})")
    elif sub == "geodesic":
        p = tree.parse_point(cfg, args.p)
        q = tree.parse_point(cfg, args.q)
        pts = tree.geodesic(p, q, args.n)
        strs = [tree.point_to_str(z) for z in pts]
        _emit({"points": strs}, args.json, "\n".join(strs))
    elif sub == "neighbors":
        v = tree.parse_point(cfg, args.p)
        strs = [tree.point_to_str(w) for w in tree.neighbors(v)]
        _emit({"neighbors": strs}, args.json, "\n".join(strs))
    elif sub == "ball":
        center = tree.parse_point(cfg, args.p) if args.p else tree.origin(cfg)
        verts = tree.ball(center, args.radius)
        index = {v: i for i, v in enumerate(verts)}
        edges = sorted(
            (index[v], index[w])
            for v in verts for w in tree.neighbors(v)
            if w in index and index[v] < index[w]
        )
        if args.format == "dot":
            lines = ["graph tree {"]
            for v, i in index.items():
                lines.append(f'  n{i} [label="{tree.point_to_str(v)}"];')
            for i, j in edges:
                lines.append(f"  n{i} -- n{j};")
            lines.append("}")
            print("\n".join(lines))
        else:
            obj = {"vertices": [tree.point_to_str(v) for v in verts],
                   "edges": [list(e) for e in edges]}
            _emit(obj, args.format == "json",
                  f"{len(verts)} vertices, {len(edges)} edges")
    elif sub == "orbit":
        v = tree.parse_point(cfg, args.p)
        _emit({"orbit_class": tree.orbit_class(v)}, args.json, str(tree.orbit_class(v)))
    elif sub == "exchange":
        a = parse_element(cfg, args.a)
        g2 = tree.exchange_apartment(a)
        obj = {"g": _mat_out(g2),
               "vertex": _frac_str(a.valuation()),
               "fixed_interval": "[val(a), +oo)"}
        _emit(obj, args.json, f"g'' = {g2}; triple intersection at {a.valuation()}")
    else:  # pragma: no cover
        raise ValueError(f"unknown tree subcommand {sub}")
    return 0


def _parse_path(text: str) -> hecke.PiecewisePath:
    obj = json.loads(_load_arg(text))
    return hecke.PiecewisePath(
        tuple(Fraction(str(t)) for t in obj["breakpoints"]),
        tuple(tuple(Fraction(str(x)) for x in pos) for pos in obj["positions"]),
    )


def _path_json(path: hecke.PiecewisePath) -> dict:
    return {"breakpoints": [_frac_str(t) for t in path.breakpoints],
            "positions": [[_frac_str(x) for x in pos] for pos in path.positions]}


def _cmd_hecke(args) -> int:
    data = _data_arg(args.data)
    path = _parse_path(args.path)
    shape = _vec_arg(args.shape)
    sign = 1 if args.chamber in ("+", "+1", "plus") else -1
    hb, wb, kmax = (int(x) for x in args.bounds.split(","))
    chamber = hecke.standard_chamber(data, sign)
    report = hecke.verify_path(data, path, shape, chamber, hb, wb, kmax)
    folds = []
    for f in report.folds:
        if isinstance(f.witness, hecke.ChainWitness):
            folds.append({
                "time": _frac_str(f.time),
                "verdict": "verified",
                "chain_roots": [list(r.root.coeffs) for r in f.witness.roots],
            })
        else:
            folds.append({"time": _frac_str(f.time), "verdict": "refuted_within_bound"})
    obj = {"billiard": report.billiard.ok, "dominance": report.dominance,
           "folds": folds, "verified": report.verified,
           "path": _path_json(path)}
    _emit(obj, True)
    return 0 if report.verified else 1


def _cmd_gm(args) -> int:
    p = loop.gm_poly(args.n)
    if args.json:
        obj = {",".join(map(str, e)): str(c) for e, c in sorted(p.items())}
        _emit({"n": args.n, "monomials": obj}, True)
    else:
        print(loop.poly_str(p))
    return 0


def _ring_arg(text: str) -> loop.SeriesRing:
    text = text.strip()
    if text in ("Q", "q"):
        return loop.SeriesRing(loop.QQ)
    if text.startswith("F"):
        return loop.SeriesRing(loop.GF, int(text[1:]))
    raise ValueError(f"unknown coefficient ring {text!r}; use Q or F<p>")


def _cmd_uma(args) -> int:
    ring = _ring_arg(args.ring)
    n = args.mod
    rows = json.loads(_load_arg(args.matrix))
    entries = [loop.series(ring, [Fraction(str(c)) if ring.kind == loop.QQ else int(c)
                                  for c in cell], n)
               for row in rows for cell in row]
    m = loop.SeriesMatrix(*entries)
    if args.uma_cmd == "member":
        _emit({"member": loop.uma_membership(m)}, True)
        return 0
    low, diag, up = loop.uma_factorize(m)

    def ser(s: loop.TruncSeries) -> list[str]:
        return [str(c) for c in s.coeffs]

    _emit({"L": [[ser(low.a), ser(low.b)], [ser(low.c), ser(low.d)]],
           "D": [[ser(diag.a), ser(diag.b)], [ser(diag.c), ser(diag.d)]],
           "U": [[ser(up.a), ser(up.b)], [ser(up.c), ser(up.d)]]}, True)
    return 0


def _cmd_selftest(args) -> int:
    numbers = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = acceptance.run_all(args.seed, numbers)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        if not r.ok:
            failed += 1
        print(f"{mark}  {r.number:2d}  {r.name:<{width}}  [{r.detail}]")
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="masure",
                                 description="exact Bruhat-Tits tree / Kac-Moody computations")
    default_seed = int(os.environ.get("MASURE_SEED", acceptance.DEFAULT_SEED))
    ap.add_argument("--seed", type=int, default=default_seed,
                    help="seed for randomized checks (MASURE_SEED overrides)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classify", help="finite/affine/indefinite trichotomy")
    p.add_argument("--matrix", required=True, help="JSON matrix or @file")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("roots", help="positive real roots by height")
    p.add_argument("--data", required=True, help="root datum JSON or @file")
    p.add_argument("--max-height", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_roots)

    p = sub.add_parser("weyl", help="length, reduced word, inversion set")
    p.add_argument("--data", required=True)
    p.add_argument("--word", required=True, help="comma-separated indices, e for identity")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_weyl)

    p = sub.add_parser("cone", help="Tits cone membership certificate")
    p.add_argument("--data", required=True)
    p.add_argument("--vector", required=True, help="comma-separated rationals")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(fn=_cmd_cone)

    p = sub.add_parser("prenilpotent", help="prenilpotent pair verdict and interval")
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", required=True, help="root coordinates")
    p.add_argument("--beta", required=True)
    p.add_argument("--bound", type=int, default=8)
    p.set_defaults(fn=_cmd_prenilpotent)

    p = sub.add_parser("tree", help="Bruhat-Tits tree operations")
    tsub = p.add_subparsers(dest="tree_cmd", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help='e.g. "F2(t)" or "Q3"')
    common.add_argument("--json", action="store_true")
    q = tsub.add_parser("act", parents=[common])
    q.add_argument("--g", required=True, help='JSON [[a,b],[c,d]] of element strings')
    q.add_argument("--p", required=True, help='point "(x; tail)"')
    q = tsub.add_parser("dist", parents=[common])
    q.add_argument("--p", required=True)
    q.add_argument("--q", required=True)
    q = tsub.add_parser("retract", parents=[common])
    q.add_argument("--p", required=True)
    q.add_argument("--q", default=None, help="retract the segment [p,q] when given")
    q.add_argument("--center", default="-", help="+ or - (end at +oo or -oo)")
    q = tsub.add_parser("geodesic", parents=[common])
    q.add_argument("--p", required=True)
    q.add_argument("--q", required=True)
    q.add_argument("--n", type=int, default=4)
    q = tsub.add_parser("neighbors", parents=[common])
    q.add_argument("--p", required=True)
    q = tsub.add_parser("ball", parents=[common])
    q.add_argument("--p", default=None, help="center vertex (default origin)")
    q.add_argument("--radius", type=int, required=True)
    q.add_argument("--format", choices=["text", "json", "dot"], default="text")
    q = tsub.add_parser("orbit", parents=[common])
    q.add_argument("--p", required=True)
    q = tsub.add_parser("exchange", parents=[common])
    q.add_argument("--a", required=True, help="nonzero field element")
    p.set_defaults(fn=_cmd_tree)

    p = sub.add_parser("hecke", help="verify a piecewise-affine path")
    hsub = p.add_subparsers(dest="hecke_cmd", required=True)
    q = hsub.add_parser("verify")
    q.add_argument("--data", required=True)
    q.add_argument("--path", required=True,
                   help='JSON {"breakpoints": [...], "positions": [[...]]} or @file')
    q.add_argument("--shape", required=True)
    q.add_argument("--chamber", default="-", help="+ or -")
    q.add_argument("--bounds", default="9,6,3", help="H,L,k_max")
    p.set_defaults(fn=_cmd_hecke)

    p = sub.add_parser("gm", help="print a divided-power exponential coefficient")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_gm)

    p = sub.add_parser("uma", help="completed-unipotent membership / factorization")
    usub = p.add_subparsers(dest="uma_cmd", required=True)
    for name in ("member", "factorize"):
        q = usub.add_parser(name)
        q.add_argument("--matrix", required=True,
                       help="JSON 2x2 of coefficient lists (low degree first)")
        q.add_argument("--mod", type=int, required=True)
        q.add_argument("--ring", default="F2", help="F<p> or Q")
    p.set_defaults(fn=_cmd_uma)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    p.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, OSError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
