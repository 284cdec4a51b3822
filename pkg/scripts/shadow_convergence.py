"""Hausdorff distance between (1/k) S(f^k(w)) and the shadow polytope, over k."""
import argparse
import time

from homcover.graphs import rose_map
from homcover.shadow import empirical_f_shadow, hausdorff_distance, is_train_track, shadow_phi
from homcover.transition import build_transition
from homcover.words import parse_aut, parse_word

DEFAULT = "rank: 3\na -> Cac\nb -> abA\nc -> aBAcabA"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("aut", nargs="?", help="automorphism file (default: a built-in train-track sample)")
    ap.add_argument("--word", default="a")
    ap.add_argument("--ks", default="1,2,5,10,20,40,80")
    args = ap.parse_args()

    f = parse_aut(open(args.aut).read() if args.aut else DEFAULT)
    w = parse_word(args.word, f.rank)
    S = shadow_phi(build_transition(rose_map(f)))
    print(f"shadow: dim {S.polytope.affine_dim}, {len(S.vertices)} vertices; "
          f"train track for w: {is_train_track(f, w)}")
    print(f"{'k':>5} {'d_H':>12} {'seconds':>9}")
    for k in (int(x) for x in args.ks.split(",")):
        t0 = time.perf_counter()
        d = hausdorff_distance(empirical_f_shadow(f, w, k), S.polytope)
        print(f"{k:>5} {d:>12.6f} {time.perf_counter() - t0:>9.3f}")


if __name__ == "__main__":
    main()
