"""Transition digraph of a graph self-map, its group-ring matrices and cycles.

For a self-map ``phi`` of a graph with the basepoint fixed, the vertices of
the transition graph are the edges of the graph; every letter of ``phi(e)``
contributes one edge out of ``e``.  Each transition edge carries

* its sign (direction in which the letter is traversed),
* its translation: the homology label of the edge copy in the universal
  abelian cover, i.e. the class of ``phi(tree path to src e)`` followed by the
  prefix of ``phi(e)`` up to the letter.  A backwards letter is counted after
  stepping back across it, which makes the matrix the abelianized Fox
  Jacobian on the rose,
* the prefix path itself and its tree closure ``W``, from which group
  elements of cycles are assembled.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx
import numpy as np

from .graphs import BudgetError, GraphMap, HomologyBasis, homology_action, homology_basis, letter_edge
from .group_ring import GroupRingMatrix, LaurentPoly, sigma_twist
from .words import FreeAut, apply_aut, multiply

DEFAULT_CYCLE_CAP = 10**6


@dataclass(frozen=True)
class TransitionEdge:
    source: int
    target: int
    position: int
    sign: int
    translation: tuple
    prefix: tuple  # edge path inside phi(source)
    word: tuple    # tree closure including the image of the tree path


@dataclass(frozen=True)
class Cycle:
    """Based cycle: a start vertex and a sequence of transition-edge ids."""

    start: int
    edges: tuple

    def __len__(self):
        return len(self.edges)


class TransitionGraph:
    def __init__(self, phi: GraphMap, basis: HomologyBasis | None = None):
        if not phi.is_self_map:
            raise ValueError("transition graphs need a self-map")
        if not phi.fixes_basepoint():
            raise ValueError("the map must fix the basepoint")
        self.phi = phi
        self.basis = homology_basis(phi.domain) if basis is None else basis
        self.rank = self.basis.rank
        self.num_vertices = phi.domain.num_edges
        tp = self.basis.tree_path
        edges = []
        out = [[] for _ in range(self.num_vertices)]
        for e, (s, _t) in enumerate(phi.domain.edges):
            lead = phi.image_path(tp[s])
            lead_word = self.basis.closure_word(lead)
            img = phi.edge_images[e]
            for j, x in enumerate(img):
                prefix = img[:j] if x > 0 else img[: j + 1]
                word = multiply(lead_word, self.basis.closure_word(prefix))
                trans = self.basis.chain_class(lead + prefix)
                out[e].append(len(edges))
                edges.append(TransitionEdge(e, letter_edge(x), j, 1 if x > 0 else -1,
                                            trans, prefix, word))
        self.edges = tuple(edges)
        self.out_edges = tuple(tuple(o) for o in out)
        self._by_position = {(ed.source, ed.position): i for i, ed in enumerate(edges)}

    @classmethod
    def from_edges(cls, num_vertices: int, rank: int, specs, induced_aut: FreeAut | None = None):
        """Synthetic transition graph from ``(source, target, sign, translation, word)``.

        Used for fixtures that no small graph map realises; the homology
        action is the identity and ``induced_aut`` defaults to the identity.
        """
        T = cls.__new__(cls)
        T.phi, T.basis, T.rank, T.num_vertices = None, None, rank, num_vertices
        edges, out, pos = [], [[] for _ in range(num_vertices)], [0] * num_vertices
        for src, tgt, sign, trans, word in specs:
            out[src].append(len(edges))
            edges.append(TransitionEdge(src, tgt, pos[src], sign, tuple(trans), (), tuple(word)))
            pos[src] += 1
        T.edges = tuple(edges)
        T.out_edges = tuple(tuple(o) for o in out)
        T._by_position = {(ed.source, ed.position): i for i, ed in enumerate(edges)}
        T.__dict__["sigma"] = np.eye(rank, dtype=object)
        if rank:
            T.__dict__["induced_aut"] = induced_aut or FreeAut(rank, tuple((i,) for i in range(1, rank + 1)))
        return T

    @cached_property
    def sigma(self) -> np.ndarray:
        return homology_action(self.phi, self.basis)

    @cached_property
    def induced_aut(self) -> FreeAut:
        """Automorphism of pi_1 induced by ``phi`` in the tree-closure basis."""
        imgs = tuple(
            self.basis.closure_word(self.phi.image_path(self.basis.basis_cycle(i)))
            for i in range(self.rank)
        )
        return FreeAut(self.rank, imgs)

    def edge_at(self, source: int, position: int) -> int:
        return self._by_position[(source, position)]

    def all_edges(self) -> frozenset:
        return frozenset(range(len(self.edges)))

    def digraph(self, sub=None) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(range(self.num_vertices))
        for i in (range(len(self.edges)) if sub is None else sorted(sub)):
            ed = self.edges[i]
            G.add_edge(ed.source, ed.target, key=i)
        return G

    def is_strongly_connected(self) -> bool:
        return nx.is_strongly_connected(nx.DiGraph(self.digraph()))

    def to_json(self):
        return {
            "vertices": self.num_vertices,
            "rank": self.rank,
            "edges": [
                {"source": e.source, "target": e.target, "position": e.position,
                 "sign": e.sign, "translation": list(e.translation), "prefix": list(e.prefix)}
                for e in self.edges
            ],
        }


def build_transition(phi: GraphMap, basis: HomologyBasis | None = None) -> TransitionGraph:
    return TransitionGraph(phi, basis)


def matrix(T: TransitionGraph, sub=None) -> GroupRingMatrix:
    m, r = T.num_vertices, T.rank
    acc = [[{} for _ in range(m)] for _ in range(m)]
    for i in (range(len(T.edges)) if sub is None else sub):
        ed = T.edges[i]
        cell = acc[ed.source][ed.target]
        cell[ed.translation] = cell.get(ed.translation, 0) + ed.sign
    return GroupRingMatrix(r, [[LaurentPoly(r, c) for c in row] for row in acc])


def twisted_powers(A: GroupRingMatrix, sigma, k: int):
    """Yield ``B_1 = A, B_j = A . sigma(B_{j-1})`` for ``j = 1..k``."""
    identity = sigma is None or _is_identity(sigma)
    B = A
    for j in range(1, k + 1):
        if j > 1:
            B = A @ (B if identity else B.twist(sigma))
        yield B


def _is_identity(sigma) -> bool:
    S = np.asarray(sigma, dtype=object)
    return bool((S == np.eye(S.shape[0], dtype=object)).all())


def trace_sum_tk(T: TransitionGraph, sigma, k: int, sub=None) -> LaurentPoly:
    """Signed sum of ``x^t(gamma)`` over based length-``k`` cycles of ``sub``.

    ``t(gamma) = sum_i sigma^(i-1) t(eta_i)``, realised as ``trace(B_k)``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    A = matrix(T, sub)
    for B in twisted_powers(A, sigma, k):
        pass
    return B.trace()


def trace_sums(T: TransitionGraph, sigma, k_max: int, sub=None) -> list:
    """``[t_1, ..., t_kmax]`` sharing one chain of matrix products."""
    A = matrix(T, sub)
    return [B.trace() for B in twisted_powers(A, sigma, k_max)]


def simple_cycles(T: TransitionGraph, sub=None, cap: int = DEFAULT_CYCLE_CAP) -> list:
    """Simple directed cycles, parallel edges distinguished.

    Each cycle is based at its smallest vertex; output order is deterministic.
    """
    parallel = {}
    for i in (range(len(T.edges)) if sub is None else sorted(sub)):
        ed = T.edges[i]
        parallel.setdefault((ed.source, ed.target), []).append(i)
    G = nx.DiGraph()
    G.add_nodes_from(range(T.num_vertices))
    G.add_edges_from(parallel)
    out = []
    for verts in nx.simple_cycles(G):
        k = verts.index(min(verts))
        verts = verts[k:] + verts[:k]
        choices = [parallel[(verts[i], verts[(i + 1) % len(verts)])] for i in range(len(verts))]
        count = 1
        for c in choices:
            count *= len(c)
        if len(out) + count > cap:
            raise BudgetError(f"more than {cap} simple cycles")
        stack = [()]
        for c in choices:
            stack = [s + (x,) for s in stack for x in c]
        out.extend(Cycle(verts[0], s) for s in stack)
    out.sort(key=lambda c: (c.start, len(c.edges), c.edges))
    return out


def cycle_invariants(T: TransitionGraph, gamma: Cycle, sigma=None):
    """``(sign, translation, normalized translation)`` of a based cycle."""
    r = T.rank
    S = None if sigma is None or _is_identity(sigma) else np.asarray(sigma, dtype=object)
    sign = 1
    total = np.zeros(r, dtype=object)
    power = np.eye(r, dtype=object) if S is not None else None
    for i in gamma.edges:
        ed = T.edges[i]
        sign *= ed.sign
        t = np.array(ed.translation, dtype=object)
        total = total + (t if S is None else power.dot(t))
        if S is not None:
            power = power.dot(S)
    k = len(gamma.edges)
    trans = tuple(int(x) for x in total)
    return sign, trans, tuple(Fraction(x, k) for x in trans)


def cycle_word(T: TransitionGraph, gamma: Cycle) -> tuple:
    """Group element of a based cycle as a reduced word in pi_1.

    Built as ``G_j = f(G_{j-1}) . W(eta_j)`` with ``f`` the automorphism of
    pi_1 induced by the map; its abelianization is the translation when the
    homology action is trivial.
    """
    f = T.induced_aut
    g = ()
    for i in gamma.edges:
        g = multiply(apply_aut(f, g), T.edges[i].word)
    return g


def cycle_group_element(T: TransitionGraph, gamma: Cycle) -> tuple:
    return cycle_word(T, gamma)


def nondegeneracy(T: TransitionGraph, cycles) -> bool:
    counts = {}
    for c in cycles:
        sign = 1
        for i in c.edges:
            sign *= T.edges[i].sign
        key = (c.start, cycle_word(T, c))
        counts[key] = counts.get(key, 0) + sign
    return any(v != 0 for v in counts.values())


def closed_walks(T: TransitionGraph, k: int, sub=None, start=None):
    """All based cycles of length ``k`` (repeated vertices allowed)."""
    allowed = None if sub is None else set(sub)
    starts = range(T.num_vertices) if start is None else [start]
    for s in starts:
        stack = [(s, ())]
        while stack:
            v, path = stack.pop()
            if len(path) == k:
                if v == s:
                    yield Cycle(s, path)
                continue
            for i in reversed(T.out_edges[v]):
                if allowed is None or i in allowed:
                    stack.append((T.edges[i].target, path + (i,)))


def project_edge(T0: TransitionGraph, T: TransitionGraph, cover, i: int) -> int:
    ed = T0.edges[i]
    return T.edge_at(cover.edge_proj[ed.source], ed.position)


def lift_subgraph(T0: TransitionGraph, T: TransitionGraph, cover, sub) -> frozenset:
    """Preimage in ``T0`` (transition graph of a lift) of a subgraph of ``T``."""
    sub = set(sub)
    return frozenset(i for i in range(len(T0.edges)) if project_edge(T0, T, cover, i) in sub)


def subgraph_vertices(T: TransitionGraph, sub) -> list:
    vs = set()
    for i in sub:
        vs.add(T.edges[i].source)
        vs.add(T.edges[i].target)
    return sorted(vs)


def twisted_matrix_power_is_zero(A: GroupRingMatrix, sigma, k: int) -> bool:
    for B in twisted_powers(A, sigma, k):
        if B.is_zero():
            return True
    return False


def twist_poly(p: LaurentPoly, sigma) -> LaurentPoly:
    return sigma_twist(p, sigma)
