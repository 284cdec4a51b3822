"""Homological shadows of words and of transition graphs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import BudgetError
from .polytope import Polytope, convex_hull, hausdorff_sq
from .transition import DEFAULT_CYCLE_CAP, TransitionGraph, _is_identity, cycle_invariants, simple_cycles
from .words import FreeAut, abelianization_matrix, apply_aut, reduce

WORD_BUDGET = 10**7
HEURISTIC_TOL = 1e-6


@dataclass(frozen=True)
class ShadowReport:
    polytope: Polytope
    witnesses: tuple  # per vertex: cycles whose normalized translation is the vertex
    cycles: tuple

    @property
    def vertices(self):
        return self.polytope.vertices

    @property
    def omega(self):
        return self.polytope.omega


def word_shadow(w, rank: int | None = None) -> set:
    """Lattice points visited by the reduced path of ``w``, including 0."""
    w = reduce(w)
    if rank is None:
        rank = max((abs(x) for x in w), default=1)
    pos = [0] * rank
    out = {tuple(pos)}
    for x in w:
        pos[abs(x) - 1] += 1 if x > 0 else -1
        out.add(tuple(pos))
    return out


def _prefix_points(w, rank) -> np.ndarray:
    arr = np.asarray(w, dtype=np.int64)
    steps = np.zeros((len(arr) + 1, rank), dtype=np.int64)
    if len(arr):
        steps[np.arange(1, len(arr) + 1), np.abs(arr) - 1] = np.sign(arr)
    return np.unique(np.cumsum(steps, axis=0), axis=0)


def shadow_phi(T: TransitionGraph, sub=None, cap: int = DEFAULT_CYCLE_CAP,
               check_sigma: bool = True) -> ShadowReport:
    """Hull of the normalized translations of all simple cycles.

    Translations are untwisted sums; with ``check_sigma=False`` the hull is
    still formed for maps acting nontrivially on homology.
    """
    if check_sigma and not _is_identity(T.sigma):
        raise ValueError("the shadow of a transition graph needs a trivial homology action")
    cycles = simple_cycles(T, sub, cap)
    norm = [cycle_invariants(T, c)[2] for c in cycles]
    if not cycles:
        return ShadowReport(Polytope(T.rank, ()), (), ())
    P = convex_hull(norm, T.rank)
    wit = tuple(tuple(c for c, t in zip(cycles, norm) if t == v) for v in P.vertices)
    return ShadowReport(P, wit, tuple(cycles))


def is_train_track(f: FreeAut, w=()) -> bool:
    """Whether ``f^k`` of every generator (and of ``w``) never cancels.

    Turns taken by the images, closed under the derivative map on directions,
    must all be nondegenerate.
    """
    if any(not img for img in f.images):
        return False

    def first(d):
        img = f.images[d - 1] if d > 0 else tuple(-x for x in reversed(f.images[-d - 1]))
        return img[0]

    todo = []
    for word in list(f.images) + [reduce(w)]:
        for x, y in zip(word, word[1:]):
            todo.append((-x, y))
    seen = set()
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        if t[0] == t[1]:
            return False
        seen.add(t)
        todo.append((first(t[0]), first(t[1])))
    return True


def _tt_shadow_vertices(f: FreeAut, w, k: int):
    """Vertices of hull(shadow(f^k(w))) by recursion over letter images."""
    r = f.rank
    S = abelianization_matrix(f)
    H = {i: [(0,) * r, tuple(1 if j == i else 0 for j in range(r))] for i in range(r)}
    ends = {i: np.eye(r, dtype=object)[:, i] for i in range(r)}

    def pieces(word, H, ends):
        pts, off = [], np.zeros(r, dtype=object)
        for x in word:
            i = abs(x) - 1
            e = ends[i]
            base = off if x > 0 else off - e
            pts.extend(tuple(int(a) for a in base + np.array(p, dtype=object)) for p in H[i])
            off = off + (e if x > 0 else -e)
        return pts

    for _ in range(k):
        newH = {i: convex_hull(pieces(f.images[i], H, ends), r).vertices for i in range(r)}
        H = {i: [tuple(int(a) for a in v) for v in newH[i]] for i in range(r)}
        ends = {i: S.dot(ends[i]) for i in range(r)}
    return pieces(reduce(w), H, ends) or [(0,) * r]


def empirical_f_shadow(f: FreeAut, w, k: int, budget: int = WORD_BUDGET) -> Polytope:
    """``(1/k) hull(shadow(f^k(w)))`` for a test word ``w``."""
    if k < 1:
        raise ValueError("k must be positive")
    r = f.rank
    w = reduce(w)
    if is_train_track(f, w):
        pts = _tt_shadow_vertices(f, w, k)
        return convex_hull(pts, r).scale(Fraction(1, k))
    cur = w
    for _ in range(k):
        cur = apply_aut(f, cur)
        if len(cur) > budget:
            raise BudgetError(f"f^k(w) exceeds {budget} letters")
    pts = _prefix_points(cur, r)
    return convex_hull([tuple(int(a) for a in p) for p in pts], r).scale(Fraction(1, k))


def hausdorff(P: Polytope, Q: Polytope) -> Fraction:
    """Exact squared Hausdorff distance."""
    return hausdorff_sq(P, Q)


def hausdorff_distance(P: Polytope, Q: Polytope) -> float:
    return math.sqrt(hausdorff_sq(P, Q))


def group_like_power(T: TransitionGraph, reference: Polytope | None = None,
                     cap: int = DEFAULT_CYCLE_CAP) -> int:
    """Smallest power exceeding every simple cycle that beats a vertex functional.

    ``reference`` is the polytope whose vertices are tested; it defaults to
    the shadow of ``T`` itself.
    """
    report = shadow_phi(T, cap=cap)
    if reference is None:
        reference = report.polytope
    longest = 0
    for v, om in zip(reference.vertices, reference.omega):
        top = sum(a * b for a, b in zip(om, v))
        for c in report.cycles:
            t = cycle_invariants(T, c)[2]
            if sum(a * b for a, b in zip(om, t)) > top:
                longest = max(longest, len(c))
    return longest + 1 if longest else 1


def is_group_like(v, replaced: bool = False, empirical: Polytope | None = None,
                  tol: float = HEURISTIC_TOL) -> str:
    """Verdict on whether a shadow vertex is also a vertex of the limit shadow."""
    if replaced:
        return "confirmed"
    if empirical is not None:
        for u in empirical.vertices:
            if max(abs(float(a) - float(b)) for a, b in zip(u, v)) <= tol:
                return "heuristic"
    return "unknown"


def plot_data(P: Polytope):
    """Vertices and edges (pairs sharing ``affine_dim - 1`` facets) for plotting."""
    verts = [[float(a) for a in v] for v in P.vertices]
    tight = []
    for v in P.vertices:
        tight.append({i for i, (n, b) in enumerate(P.facets)
                      if sum(x * y for x, y in zip(n, v)) == b})
    need = max(P.affine_dim - 1, 1)
    edges = [[i, j] for i in range(len(verts)) for j in range(i + 1, len(verts))
             if len(tight[i] & tight[j]) >= need]
    if P.affine_dim == 1:
        edges = [[0, 1]] if len(verts) == 2 else []
    return {"vertices": verts, "edges": edges}
