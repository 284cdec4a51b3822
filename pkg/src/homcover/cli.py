"""Command-line front end.

Exit codes: 0 success (a certificate for ``search``), 2 search exhausted,
1 error.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .config import Config
from .extremal import extremal_subgraph, is_enfeoffed
from .graphs import (BudgetError, cover_from_stages, cover_to_json, homology_action,
                     homology_basis, lift_map, rose, rose_map)
from .group_ring import Character, format_laurent, specialize, specialize_matrix
from .nilpotent import enfeoffment_level
from .pipeline import (Certificate, content_hash, report_trace_budget, run_search,
                       verify_certificate)
from .shadow import empirical_f_shadow, hausdorff, is_group_like, plot_data, shadow_phi
from .spectra import complex_spectral_radius, integer_order
from .transition import build_transition, matrix, trace_sum_tk
from .words import ParseError, check_automorphism, format_word, parse_aut, parse_word, power

EXIT_OK, EXIT_ERROR, EXIT_EXHAUSTED = 0, 1, 2


def _load_aut(path):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_aut(text)


def _config(args) -> Config:
    kw = {"seed": args.seed, "verbosity": args.verbose}
    if args.jobs:
        kw["jobs"] = args.jobs
    for name in ("k_max", "class_max", "max_stages", "edge_cap"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = val
    if getattr(args, "primes", None):
        kw["primes"] = tuple(int(p) for p in args.primes.split(","))
    return Config(**kw)


def _emit_json(obj: dict, config: Config, out=None):
    body = dict(obj)
    body["config"] = config.to_json()
    body["toolversion"] = __version__
    body["hash"] = content_hash(body)
    text = json.dumps(body, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _fmt_vec(v):
    return "(" + ",".join(str(Fraction(a)) for a in v) + ")"


def _ordered_vertices(report):
    """Vertices ordered by their first witness cycle in enumeration order."""
    pos = {c: i for i, c in enumerate(report.cycles)}
    order = sorted(range(len(report.vertices)), key=lambda i: min(pos[c] for c in report.witnesses[i]))
    return order


def cmd_matrix(args, config):
    f = _load_aut(args.aut)
    T = build_transition(rose_map(f))
    A = matrix(T)
    if args.json:
        _emit_json({"matrix": [[format_laurent(x) for x in row] for row in A.rows],
                    "transition": T.to_json()}, config, args.out)
    else:
        print(A.format())
    return EXIT_OK


def cmd_trace(args, config):
    f = _load_aut(args.aut)
    T = build_transition(rose_map(f))
    t = trace_sum_tk(T, T.sigma, args.power)
    if args.json:
        _emit_json({"power": args.power, "trace": format_laurent(t)}, config, args.out)
    else:
        print(format_laurent(t))
    return EXIT_OK


def cmd_shadow(args, config):
    f = _load_aut(args.aut)
    T = build_transition(rose_map(f))
    rep = shadow_phi(T, cap=config.cycle_cap)
    order = _ordered_vertices(rep)
    print(" ".join(_fmt_vec(rep.vertices[i]) for i in order))
    if args.empirical:
        if args.word:
            w = parse_word(args.word, f.rank)
        else:
            rng = random.Random(config.seed)
            w = tuple(rng.choice([1, -1]) * rng.randint(1, f.rank) for _ in range(4))
        P = empirical_f_shadow(f, w, args.empirical, config.word_budget)
        d2 = hausdorff(P, rep.polytope)
        print(f"empirical k={args.empirical} word={format_word(w)} seed={config.seed} "
              f"hausdorff^2={d2} (~{float(d2) ** 0.5:.6g})")
        for i in order:
            verdict = is_group_like(rep.vertices[i], empirical=P, tol=config.heuristic_tol)
            print(f"  {_fmt_vec(rep.vertices[i])}: {verdict}")
    if args.plot:
        data = plot_data(rep.polytope)
        data["config"] = config.to_json()
        Path(args.plot).write_text(json.dumps(data, indent=2) + "\n")
    return EXIT_OK


def _vertex_subgraph(f, index):
    T = build_transition(rose_map(f))
    rep = shadow_phi(T)
    order = _ordered_vertices(rep)
    if not 0 <= index < len(order):
        raise ValueError(f"vertex index {index} out of range (0..{len(order) - 1})")
    i = order[index]
    return T, extremal_subgraph(T, rep.vertices[i], rep.omega[i])


def cmd_extremal(args, config):
    f = _load_aut(args.aut)
    T, Tv = _vertex_subgraph(f, args.vertex)
    print(f"vertex {_fmt_vec(Tv.vertex)}")
    print("edges: " + " ".join(f"{T.edges[i].source}->{T.edges[i].target}@{T.edges[i].position}"
                               for i in sorted(Tv.edges)))
    print(matrix(T, Tv.edges).format())
    print(f"enfeoffed: {str(is_enfeoffed(Tv)).lower()}")
    return EXIT_OK


def cmd_enfeoff(args, config):
    f = _load_aut(args.aut)
    T, Tv = _vertex_subgraph(f, args.vertex)
    if Tv.is_zero_vertex:
        print("level 1 (zero vertex)")
        return EXIT_OK
    lv = enfeoffment_level(T, Tv.edges, args.class_max or config.class_max,
                           args.k_max or config.k_max, method="matrix")
    if lv.exceeded:
        print("exceeded")
    else:
        print(f"level {lv.level} witness k={lv.k} coefficient={lv.coefficient} element={lv.witness.format()}")
    return EXIT_OK


def cmd_covers(args, config):
    f = _load_aut(args.aut)
    stages = [{"p": int(p)} for p in args.p.split(",")]
    cover = cover_from_stages(rose(f.rank), stages, config.edge_cap)
    phi0 = lift_map(cover, rose_map(power(f, args.power)))
    out = {"vertices": cover.total.num_vertices, "edges": cover.total.num_edges,
           "rank": cover.total.euler_rank, "degree": cover.degree, "lifts": phi0 is not None}
    if phi0 is not None:
        v = integer_order(homology_action(phi0, homology_basis(cover.total)))
        out["order"] = v.tag if v.order is None else f"finite({v.order})"
        out["radius"] = v.radius
    if args.out:
        data = cover_to_json(cover)
        data["summary"] = out
        _emit_json(data, config, args.out)
    for k, v in out.items():
        print(f"{k}: {v}")
    return EXIT_OK


def cmd_specialize(args, config):
    f = _load_aut(args.aut)
    T = build_transition(rose_map(f))
    psi = Character(tuple(Fraction(x) for x in args.char.split(",")))
    A = matrix(T)
    M = specialize_matrix(A, psi)
    t = trace_sum_tk(T, T.sigma, args.power)
    print(f"character order {psi.order}")
    print(np.array2string(np.round(M, 12), precision=6))
    print(f"spectral radius {complex_spectral_radius(M, config.radius_slack):.10f}")
    print(f"t_{args.power}(psi) = {specialize(t, psi):.10f}")
    if args.power == 1:
        gap = abs(specialize(t, psi) - np.trace(M))
        print(f"trace check {'ok' if gap <= config.specialize_tol else 'FAILED'} (|t_1(psi) - tr| = {gap:.2e})")
    return EXIT_OK


def cmd_order(args, config):
    data = json.loads(Path(args.matrix).read_text())
    M = data["matrix"] if isinstance(data, dict) else data
    v = integer_order(np.array(M, dtype=object))
    if v.tag == "finite":
        print(f"finite({v.order})")
    else:
        print(f"infinite ({v.reason})")
    return EXIT_OK


def cmd_search(args, config):
    f = _load_aut(args.aut)
    if not check_automorphism(f):
        raise ValueError("input is not an automorphism")
    res = run_search(f, config)
    if isinstance(res, Certificate):
        data = dict(res.data)
        data["config"] = config.to_json()
        data["hash"] = content_hash(data)
        text = json.dumps(data, indent=2, sort_keys=True)
        if args.out:
            Path(args.out).write_text(text + "\n")
        print(f"certificate: {res.verdict['reason']} after {len(res.tower)} stage(s), "
              f"power {res.power}, {res.total_edges} edges")
        return EXIT_OK
    rep = dict(res.report)
    if args.out:
        _emit_json({"exhausted": rep}, config, args.out)
    print(f"exhausted after {len(rep['covers'])} cover level(s); best radius {rep['best_radius']:.6g}")
    if rep.get("note"):
        print(rep["note"])
    return EXIT_EXHAUSTED


def cmd_certify(args, config):
    data = json.loads(Path(args.cert).read_text())
    if data.get("hash") != content_hash(data):
        print("refusing: content hash mismatch", file=sys.stderr)
        return EXIT_ERROR
    res = verify_certificate(data)
    if res.ok:
        print("verified")
        return EXIT_OK
    for p in res.problems:
        print(f"problem: {p}", file=sys.stderr)
    return EXIT_ERROR


def cmd_report(args, config):
    f = _load_aut(args.aut)
    cover = None
    if args.cover:
        cdata = json.loads(Path(args.cover).read_text())
        cover = cover_from_stages(rose(f.rank), cdata["stages"], config.edge_cap)
    out = report_trace_budget(f, cover, args.power, config)
    if args.json:
        _emit_json(out, config, args.out)
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="homcover", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, helptext):
        p = sub.add_parser(name, help=helptext)
        p.set_defaults(fn=fn)
        return p

    p = add("matrix", cmd_matrix, "transition matrix over Z[H]")
    p.add_argument("aut")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p = add("trace", cmd_trace, "twisted trace sum t_k")
    p.add_argument("aut")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p = add("shadow", cmd_shadow, "shadow polytope vertices")
    p.add_argument("aut")
    p.add_argument("--empirical", type=int, default=0, help="also compare with (1/k) S(f^k(w))")
    p.add_argument("--word")
    p.add_argument("--plot", help="write vertices/edges for plotting")
    p = add("extremal", cmd_extremal, "extremal subgraph of a shadow vertex")
    p.add_argument("aut")
    p.add_argument("--vertex", type=int, default=0)
    p = add("enfeoff", cmd_enfeoff, "nilpotent enfeoffment level")
    p.add_argument("aut")
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--class", dest="class_max", type=int)
    p.add_argument("--kmax", dest="k_max", type=int)
    p = add("covers", cmd_covers, "build a mod-p tower and lift")
    p.add_argument("aut")
    p.add_argument("--p", default="2", help="comma-separated primes, one per stage")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--out")
    p = add("specialize", cmd_specialize, "specialize the matrix at a character")
    p.add_argument("aut")
    p.add_argument("--char", required=True, help='rational angles, e.g. "1/2,0"')
    p.add_argument("--power", type=int, default=1)
    p = add("order", cmd_order, "order of an integer matrix (JSON)")
    p.add_argument("matrix")
    p = add("search", cmd_search, "search for an infinite-order certificate")
    p.add_argument("aut")
    p.add_argument("--primes")
    p.add_argument("--kmax", dest="k_max", type=int)
    p.add_argument("--classmax", dest="class_max", type=int)
    p.add_argument("--stages", dest="max_stages", type=int)
    p.add_argument("--edge-cap", dest="edge_cap", type=int)
    p.add_argument("--out")
    p = add("certify", cmd_certify, "verify a certificate file")
    p.add_argument("cert")
    p = add("report", cmd_report, "trace budget quantities on a cover")
    p.add_argument("aut")
    p.add_argument("--cover", help="JSON with a 'stages' list")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        return args.fn(args, config)
    except (ParseError, ValueError, BudgetError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
