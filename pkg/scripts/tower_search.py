"""Run the cover search on a batch of automorphisms and summarise the outcomes.

Each certificate is re-verified; results go to a JSON lines file if requested.
"""
import argparse
import json
import time

from homcover.config import Config
from homcover.pipeline import Certificate, run_search, verify_certificate
from homcover.words import parse_aut

BUILTIN = {
    "fib": "rank: 2\na -> ab\nb -> a",
    "partial-conj": "rank: 2\na -> a\nb -> Aba",
    "tt3": "rank: 3\na -> Cac\nb -> abA\nc -> aBAcabA",
    "tt3b": "rank: 3\na -> cbCacBC\nb -> cbC\nc -> acA",
    "tt3c": "rank: 3\na -> baB\nb -> Cbc\nc -> baBcbAB",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="*", help="automorphism files (default: built-in samples)")
    ap.add_argument("--stages", type=int, default=3)
    ap.add_argument("--edge-cap", type=int, default=10**4)
    ap.add_argument("--primes", default="2,3,5")
    ap.add_argument("--out", help="JSON lines output")
    args = ap.parse_args()

    cfg = Config(max_stages=args.stages, edge_cap=args.edge_cap,
                 primes=tuple(int(p) for p in args.primes.split(",")))
    inputs = {p: open(p).read() for p in args.files} if args.files else BUILTIN
    rows = []
    for name, text in inputs.items():
        t0 = time.perf_counter()
        res = run_search(parse_aut(text), cfg)
        dt = time.perf_counter() - t0
        if isinstance(res, Certificate):
            ok = verify_certificate(res).ok
            row = {"name": name, "outcome": "certificate", "stages": len(res.tower), "power": res.power,
                   "edges": res.total_edges, "verified": ok, "seconds": round(dt, 3)}
        else:
            rep = res.report
            row = {"name": name, "outcome": "exhausted", "levels": [c["edges"] for c in rep["covers"]],
                   "best_radius": rep["best_radius"], "note": rep["note"], "seconds": round(dt, 3)}
        rows.append(row)
        print(json.dumps(row))
    if args.out:
        with open(args.out, "w") as fh:
            fh.writelines(json.dumps(r) + "\n" for r in rows)


if __name__ == "__main__":
    main()
