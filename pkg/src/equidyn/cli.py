"""Command-line interface: ``equidyn {verify,basins,restrict,probe,render}``.

Exit codes: 0 success, 1 usage or configuration error, 2 a certificate failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import basins, dynamics, render, symmetry
from .errors import NotAFlatError
from .polynomial import build_equivariant_map, check_dimension
from .projective import ProjectivePoint

EXIT_OK, EXIT_CONFIG, EXIT_CERT = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equidyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, k_default=2):
        p.add_argument("--k", type=int, default=k_default, help="projective dimension")
        p.add_argument("--out", default=None, help="output path (default: stdout for JSON)")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("verify", help="run the exact certificate suite")
    common(p)

    p = sub.add_parser("basins", help="Monte Carlo basin survey")
    common(p)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--max-iter", type=_positive_int, default=5000)
    p.add_argument("--tol", type=_positive_float, default=1e-8)

    p = sub.add_parser("restrict", help="restrict the map to an intersection of hyperplanes")
    common(p)
    p.add_argument("--hyperplanes", default="", help='e.g. "c:1" or "c:1;d:2,3"')

    p = sub.add_parser("probe", help="expansion probe on orbits avoiding the critical set")
    common(p)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--steps", type=_positive_int, default=40)
    p.add_argument("--delta", type=_positive_float, default=0.05)
    p.add_argument("--sampler", choices=("uniform", "backward"), default="backward",
                   help="uniform starts almost all fall into basins; backward samples near the Julia set")

    p = sub.add_parser("render", help="render basins on a complex line as PPM")
    common(p)
    p.add_argument("--anchors", default=None, help='two points, e.g. "1,0,0;0,1,1"')
    p.add_argument("--window", default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
    p.add_argument("--res", default="256x256", help="WIDTHxHEIGHT")
    p.add_argument("--max-iter", type=_positive_int, default=500)
    p.add_argument("--tol", type=_positive_float, default=1e-8)
    p.add_argument("--png", action="store_true", help="also write a PNG next to the PPM")
    return parser


def _emit(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc


def _timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, round((time.perf_counter() - t0) * 1000.0, 3)


def _cert_json(cert, ms):
    return {"name": cert.name, "pass": bool(cert.ok), "detail": _jsonable(cert.detail), "ms": ms}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return str(obj)


def _map_json(pmap):
    return [
        [{"exponents": list(e), "coefficient": str(c)} for e, c in sorted(comp.terms.items(), reverse=True)]
        for comp in pmap.components
    ]


# -- commands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    k = args.k
    check_dimension(k)
    g = build_equivariant_map(k)
    certs = []
    group, ms = _timed(symmetry.generate_group, k)
    for r in group:
        res, ms = _timed(symmetry.check_equivariance, g, r)
        detail = {"scalar": str(res.scalar)} if res.ok else {"witness": _jsonable(res.witness)}
        certs.append({"name": f"equivariance {'*'.join(r.word) or 'id'}", "pass": res.ok, "detail": detail, "ms": ms})
    arrangement = symmetry.hyperplane_arrangement(k)
    for h in arrangement:
        cert, ms = _timed(dynamics.verify_invariant_hyperplane, g, h)
        certs.append(_cert_json(cert, ms))
    fact, ms = _timed(dynamics.verify_critical_factorization, g, arrangement)
    certs.append(
        {
            "name": "critical factorization",
            "pass": bool(fact.ok),
            "detail": _jsonable(
                {"method": fact.method, "constant": fact.constant, "degree_check": fact.degree_check,
                 "exponents": fact.exponents, "witness": fact.witness}
            ),
            "ms": ms,
        }
    )
    attractors = symmetry.enumerate_superattractors(k)
    for p in attractors:
        cert, ms = _timed(dynamics.verify_superattracting, g, p)
        certs.append(_cert_json(cert, ms))
    ok = all(c["pass"] for c in certs)
    _emit(
        {
            "k": k,
            "degree": g.degree,
            "group_order": len(group),
            "hyperplanes": len(arrangement),
            "attractors": len(attractors),
            "all_pass": ok,
            "certificates": certs,
        },
        args.out,
    )
    return EXIT_OK if ok else EXIT_CERT


def cmd_basins(args) -> int:
    check_dimension(args.k)
    g = build_equivariant_map(args.k)
    report = basins.basin_survey(g, args.samples, args.seed, args.max_iter, args.tol, threads=args.threads)
    _emit(report.to_json_dict(), args.out)
    return EXIT_OK


def _parse_hyperplanes(text, k):
    text = text.strip()
    if not text:
        return []
    parts = []
    # "c:1;d:1,2" or "c:1,c:2" (a bare comma before a letter starts a new item)
    for chunk in text.replace(";", " ").split():
        buf = ""
        for piece in chunk.split(","):
            if piece[:2] in ("c:", "d:") and buf:
                parts.append(buf)
                buf = piece
            else:
                buf = f"{buf},{piece}" if buf else piece
        if buf:
            parts.append(buf)
    return [symmetry.parse_hyperplane(p, k) for p in parts]


def cmd_restrict(args) -> int:
    k = args.k
    check_dimension(k)
    try:
        subset = _parse_hyperplanes(args.hyperplanes, k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        flat = symmetry.flat_from_hyperplanes(subset, k)
    except NotAFlatError as exc:
        raise ConfigError(str(exc)) from exc
    g = build_equivariant_map(k)
    certs = []
    for h in subset or []:
        cert, ms = _timed(dynamics.verify_invariant_hyperplane, g, h)
        certs.append(_cert_json(cert, ms))
    rmap = dynamics.restrict_map(g, flat)
    payload = {
        "k": k,
        "hyperplanes": [h.label() for h in flat.hyperplanes],
        "m": flat.m,
        "embedding": [list(row) for row in flat.embedding],
        "degree": rmap.degree,
        "components": _map_json(rmap.map),
        "stripped_factors": list(rmap.stripped),
        "degree_witness": {"degree": rmap.degree, "m_plus_3": flat.m + 3, "not_g_m_plus_3": rmap.degree != flat.m + 3},
    }
    if flat.m == 0:
        point = rmap.embed_point((1,))
        cert, ms = _timed(dynamics.verify_superattracting, g, point)
        certs.append(_cert_json(cert, ms))
        payload["point"] = [str(c) for c in point.coords]
        payload["fixed_superattractor"] = bool(cert.ok)
        payload["critical_set"] = []
    else:
        for h, ell in flat.induced_forms():
            cov = [ell.coefficient(tuple(int(i == j) for j in range(flat.m + 1))) for i in range(flat.m + 1)]
            cert, ms = _timed(dynamics.verify_invariant_form, rmap.map, cov, f"induced invariant {h}")
            certs.append(_cert_json(cert, ms))
        if flat.m <= 3:
            cs = dynamics.critical_structure(rmap)
            payload["critical_factors"] = [
                {"hyperplane": lab, "form": str(ell), "multiplicity": mult} for lab, ell, mult in cs.factors
            ]
            certs.append(
                {"name": "critical set inside induced arrangement", "pass": cs.contained_in_arrangement,
                 "detail": {"residual": str(cs.residual)}, "ms": 0.0}
            )
            if flat.m == 1 and cs.contained_in_arrangement:
                payload["critical_set"] = [[str(c) for c in p.coords] for p in dynamics.critical_points_on_line(rmap)]
            else:
                payload["critical_set"] = [lab for lab, _, _ in cs.factors]
        for y in dynamics.flat_superattractors(flat):
            cert, ms = _timed(dynamics.verify_superattracting, rmap.map, ProjectivePoint(y, exact=True))
            out = _cert_json(cert, ms)
            out["name"] += f" (ambient {list(map(str, flat.embed(y)))})"
            certs.append(out)
    payload["certificates"] = certs
    payload["all_pass"] = all(c["pass"] for c in certs)
    _emit(payload, args.out)
    return EXIT_OK if payload["all_pass"] else EXIT_CERT


def cmd_probe(args) -> int:
    check_dimension(args.k)
    g = build_equivariant_map(args.k)
    result = basins.expansion_probe(
        g, args.samples, args.seed, args.steps, args.delta, threads=args.threads, sampler=args.sampler
    )
    _emit(result.to_json_dict(), args.out)
    return EXIT_OK


def _parse_complex_list(text):
    return [complex(x.strip().replace(" ", "")) for x in text.split(",")]


def cmd_render(args) -> int:
    k = args.k
    check_dimension(k)
    try:
        anchors = None
        if args.anchors:
            pts = [_parse_complex_list(p) for p in args.anchors.split(";")]
            if len(pts) != 2:
                raise ValueError("need exactly two anchors separated by ';'")
            anchors = tuple(np.array(p, dtype=complex) for p in pts)
        window = [float(x) for x in args.window.split(",")]
        if len(window) != 4:
            raise ValueError("window needs four numbers")
        w, _, h = args.res.lower().partition("x")
        width, height = int(w), int(h)
        g = build_equivariant_map(k)
        image = render.render_slice(g, anchors, window, width, height, args.max_iter, args.tol, args.threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out or "basins.ppm")
    try:
        image.write_ppm(out)
        if args.png:
            image.write_png(out.with_suffix(".png"))
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "basins": cmd_basins,
    "restrict": cmd_restrict,
    "probe": cmd_probe,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("equidyn: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"equidyn: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
