"""Extremal subgraphs of a transition graph and their trace relations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .graphs import Cover, deck_action_on_homology
from .group_ring import GroupRingMatrix, LaurentPoly
from .spectra import integer_order
from .transition import TransitionGraph, _is_identity, matrix, subgraph_vertices, trace_sums, twisted_powers

DEFAULT_KMAX = 8


@dataclass(frozen=True)
class ExtremalSubgraph:
    graph: TransitionGraph
    vertex: tuple
    edges: frozenset
    omega: tuple

    def __len__(self):
        return len(self.edges)

    @property
    def is_zero_vertex(self) -> bool:
        return all(a == 0 for a in self.vertex)


def _integer_weights(T: TransitionGraph, v, omega, edges=None):
    ids = range(len(T.edges)) if edges is None else sorted(edges)
    top = sum(Fraction(a) * Fraction(b) for a, b in zip(omega, v))
    raw = {i: sum(Fraction(a) * b for a, b in zip(omega, T.edges[i].translation)) - top for i in ids}
    L = math.lcm(*(w.denominator for w in raw.values())) if raw else 1
    return {i: int(w * L) for i, w in raw.items()}


def max_cycle_mean(num_vertices: int, arcs) -> Fraction | None:
    """Karp's maximum cycle mean; ``arcs`` are ``(u, v, weight)``.  ``None`` if acyclic."""
    G = nx.DiGraph()
    G.add_nodes_from(range(num_vertices))
    for u, v, _ in arcs:
        G.add_edge(u, v)
    best = None
    for comp in nx.strongly_connected_components(G):
        comp = sorted(comp)
        inside = [(u, v, w) for u, v, w in arcs if u in comp and v in comp]
        if not inside:
            continue
        idx = {u: i for i, u in enumerate(comp)}
        n = len(comp)
        NEG = None
        D = [[NEG] * n for _ in range(n + 1)]
        D[0][0] = 0
        for k in range(1, n + 1):
            row, prev = D[k], D[k - 1]
            for u, v, w in inside:
                a = prev[idx[u]]
                if a is not None and (row[idx[v]] is None or a + w > row[idx[v]]):
                    row[idx[v]] = a + w
        comp_best = None
        for x in range(n):
            if D[n][x] is None:
                continue
            worst = min(Fraction(D[n][x] - D[k][x], n - k) for k in range(n) if D[k][x] is not None)
            comp_best = worst if comp_best is None else max(comp_best, worst)
        if comp_best is not None:
            best = comp_best if best is None else max(best, comp_best)
    return best


def extremal_subgraph(T: TransitionGraph, v, omega, within=None) -> ExtremalSubgraph:
    """Union of all cycles whose normalized translation is the vertex ``v``.

    Computed as the critical graph of ``c(eta) = omega(t(eta)) - omega(v)``:
    after checking that the maximum cycle mean is exactly 0, tight edges of a
    longest-path potential are kept when they lie in a strongly connected
    component of the tight subgraph.
    """
    if not _is_identity(T.sigma):
        raise ValueError("extremal subgraphs need a trivial homology action")
    v = tuple(Fraction(a) for a in v)
    omega = tuple(Fraction(a) for a in omega)
    w = _integer_weights(T, v, omega, within)
    arcs = [(T.edges[i].source, T.edges[i].target, c) for i, c in w.items()]
    mcm = max_cycle_mean(T.num_vertices, arcs)
    if mcm is None or mcm != 0:
        raise ValueError(f"{v} is not the maximiser of the functional (max cycle mean {mcm})")
    # Bellman-Ford longest paths from a virtual source joined to every vertex
    pot = [0] * T.num_vertices
    for _ in range(T.num_vertices):
        changed = False
        for i, c in w.items():
            ed = T.edges[i]
            if pot[ed.source] + c > pot[ed.target]:
                pot[ed.target] = pot[ed.source] + c
                changed = True
        if not changed:
            break
    tight = [i for i, c in w.items()
             if pot[T.edges[i].source] + c == pot[T.edges[i].target]]
    G = nx.DiGraph()
    for i in tight:
        G.add_edge(T.edges[i].source, T.edges[i].target)
    comp = {}
    for n, cc in enumerate(nx.strongly_connected_components(G)):
        for x in cc:
            comp[x] = n
    keep = frozenset(i for i in tight if comp[T.edges[i].source] == comp[T.edges[i].target])
    return ExtremalSubgraph(T, v, keep, omega)


def _window(T, sub, sigma, k_min, k_max):
    return trace_sums(T, sigma, k_max, sub)[k_min - 1:]


def subordinate(T: TransitionGraph, sub1, sub2, sigma=None, k_max: int = DEFAULT_KMAX,
                k_min: int = 1) -> bool:
    """``t_k[sub2]`` restricted to ``supp t_k[sub1]`` equals ``t_k[sub1]`` on the window."""
    for a, b in zip(_window(T, sub1, sigma, k_min, k_max), _window(T, sub2, sigma, k_min, k_max)):
        if b.restrict(a.support()) != a:
            return False
    return True


def separated(T: TransitionGraph, sub1, sub2, sigma=None, k_max: int = DEFAULT_KMAX,
              k_min: int = 1) -> bool:
    for a, b in zip(_window(T, sub1, sigma, k_min, k_max), _window(T, sub2, sigma, k_min, k_max)):
        if a.support() & b.support():
            return False
    return True


def pitchfork(T: TransitionGraph, sub1, sub2, whole=None, sigma=None, k_max: int = DEFAULT_KMAX,
              k_min: int = 1) -> bool:
    whole = T.all_edges() if whole is None else whole
    return (subordinate(T, sub1, whole, sigma, k_max, k_min)
            and subordinate(T, sub2, whole, sigma, k_max, k_min)
            and separated(T, sub1, sub2, sigma, k_max, k_min))


def _compressed(T: TransitionGraph, sub) -> GroupRingMatrix:
    """Matrix of ``sub`` restricted to the vertices it touches."""
    verts = subgraph_vertices(T, sub)
    full = matrix(T, sub)
    return GroupRingMatrix(T.rank, [[full[i, j] for j in verts] for i in verts])


def twisted_nilpotent(A: GroupRingMatrix, sigma, period: int = 1) -> bool:
    """Whether ``x -> A sigma(x)`` is nilpotent, for ``sigma`` of order ``period``.

    Nilpotent iff ``B_{m * period} = 0``; a nonzero trace of ``B_{j * period}``
    proves the opposite early.
    """
    m = A.dim
    if m == 0:
        return True
    for k, B in enumerate(twisted_powers(A, sigma, m * period), start=1):
        if B.is_zero():
            return True
        if k % period == 0 and B.trace():
            return False
    return False


def is_enfeoffed(Tv: ExtremalSubgraph, sigma=None, sub=None) -> bool:
    """Non-nilpotence of the twisted matrix of the subgraph (``sub`` overrides the edges)."""
    T = Tv.graph
    S = T.sigma if sigma is None else sigma
    period = 1
    if not _is_identity(S):
        verdict = integer_order(S)
        if verdict.infinite:
            raise ValueError("enfeoffment needs a finite-order homology action")
        period = verdict.order
    if Tv.is_zero_vertex:
        return True
    edges = Tv.edges if sub is None else sub
    if not edges:
        return False
    return not twisted_nilpotent(_compressed(T, edges), None if period == 1 else S, period)


def orbit_count(p: LaurentPoly, cover: Cover) -> int:
    """Number of deck-group orbits meeting the support of ``p``."""
    if not p.terms:
        return 0
    mats = [np.asarray(M, dtype=object) for M in deck_action_on_homology(cover).values()]
    remaining = set(p.support())
    count = 0
    while remaining:
        v = remaining.pop()
        vec = np.array(v, dtype=object)
        for M in mats:
            remaining.discard(tuple(int(x) for x in M.dot(vec)))
        count += 1
    return count


def orbits(points, cover: Cover) -> list:
    """Partition of a set of homology classes into deck orbits."""
    mats = [np.asarray(M, dtype=object) for M in deck_action_on_homology(cover).values()]
    remaining = set(points)
    out = []
    while remaining:
        v = min(remaining)
        orb = {tuple(int(x) for x in M.dot(np.array(v, dtype=object))) for M in mats}
        out.append(sorted(orb))
        remaining -= orb
    return out
