"""Search products of Magnus generators for train-track maps with a large shadow.

Prints candidates whose homology action is trivial, whose transition graph is
strongly connected and whose shadow polytope is full-dimensional.
"""
import argparse
import random

from homcover.graphs import BudgetError, rose_map
from homcover.shadow import is_train_track, shadow_phi
from homcover.transition import build_transition
from homcover.words import FreeAut, commutator, compose, format_aut, reduce


def magnus_generators(n):
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for s in (1, -1):
                imgs = [(m + 1,) for m in range(n)]
                imgs[i] = reduce((s * (j + 1), i + 1, -s * (j + 1)))
                out.append(FreeAut(n, tuple(imgs)))
            for k in range(j + 1, n):
                if k != i:
                    imgs = [(m + 1,) for m in range(n)]
                    imgs[i] = reduce((i + 1,) + commutator((j + 1,), (k + 1,)))
                    out.append(FreeAut(n, tuple(imgs)))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--tries", type=int, default=2000)
    ap.add_argument("--factors", type=int, default=3)
    ap.add_argument("--max-len", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    gens = magnus_generators(args.rank)
    seen = set()
    for _ in range(args.tries):
        f = rng.choice(gens)
        for _ in range(rng.randint(1, args.factors)):
            f = compose(f, rng.choice(gens))
        if f.images in seen or sum(map(len, f.images)) > args.max_len or not is_train_track(f):
            continue
        seen.add(f.images)
        T = build_transition(rose_map(f))
        if not T.is_strongly_connected():
            continue
        try:
            S = shadow_phi(T)
        except BudgetError:
            continue
        if S.polytope.affine_dim == args.rank:
            flat = format_aut(f).replace("\n", "; ")
            print(f"{flat}  vertices={len(S.vertices)} cycles={len(S.cycles)}")


if __name__ == "__main__":
    main()
