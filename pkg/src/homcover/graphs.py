"""Finite graphs, graph maps, regular covers, lifts and homology coordinates.

Edges carry a fixed orientation.  Edge paths use the same signed-letter
encoding as words: ``e + 1`` traverses edge ``e`` forwards, ``-(e + 1)``
backwards.  For the rose this makes edge paths and words coincide.

Homology coordinates come from a breadth-first spanning tree rooted at the
basepoint (smallest edge id first); the class of any path is its vector of
signed non-tree edge counts, which is the class of its tree closure.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .words import FreeAut, inverse, reduce

DEFAULT_EDGE_CAP = 10**5


class BudgetError(RuntimeError):
    """A configured size budget would be exceeded."""


class NotCoveringError(ValueError):
    pass


def letter_edge(x: int) -> int:
    return abs(x) - 1


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple  # (source, target) per edge id
    basepoint: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        for s, t in self.edges:
            if not (0 <= s < self.num_vertices and 0 <= t < self.num_vertices):
                raise ValueError(f"edge ({s}, {t}) has an endpoint out of range")

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def euler_rank(self):
        return self.num_edges - self.num_vertices + 1

    @cached_property
    def incidence(self):
        inc = [[] for _ in range(self.num_vertices)]
        for e, (s, t) in enumerate(self.edges):
            inc[s].append(e)
            if t != s:
                inc[t].append(e)
        return inc

    def is_connected(self) -> bool:
        seen = {self.basepoint}
        todo = [self.basepoint]
        while todo:
            u = todo.pop()
            for e in self.incidence[u]:
                for w in self.edges[e]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
        return len(seen) == self.num_vertices

    def step(self, v: int, letter: int) -> int:
        s, t = self.edges[letter_edge(letter)]
        if letter > 0:
            if s != v:
                raise ValueError(f"edge {letter_edge(letter)} does not start at {v}")
            return t
        if t != v:
            raise ValueError(f"edge {letter_edge(letter)} does not end at {v}")
        return s

    def path_end(self, start: int, path: Sequence[int]) -> int:
        v = start
        for x in path:
            v = self.step(v, x)
        return v

    def path_start(self, letter: int) -> int:
        s, t = self.edges[letter_edge(letter)]
        return s if letter > 0 else t

    def is_path(self, start: int, path) -> bool:
        try:
            self.path_end(start, path)
        except ValueError:
            return False
        return True


def rose(n: int) -> Graph:
    if n < 1:
        raise ValueError("rose needs at least one petal")
    return Graph(1, tuple((0, 0) for _ in range(n)))


def cycle_graph(k: int) -> Graph:
    return Graph(k, tuple((i, (i + 1) % k) for i in range(k)))


@dataclass(frozen=True)
class HomologyBasis:
    graph: Graph
    tree: frozenset
    non_tree: tuple
    tree_path: tuple  # letters from the basepoint to each vertex along the tree

    @property
    def rank(self):
        return len(self.non_tree)

    @cached_property
    def index(self):
        return {e: i for i, e in enumerate(self.non_tree)}

    def chain_class(self, path) -> tuple:
        """Class of the tree closure of ``path`` (no closedness check)."""
        v = [0] * self.rank
        idx = self.index
        for x in path:
            i = idx.get(letter_edge(x))
            if i is not None:
                v[i] += 1 if x > 0 else -1
        return tuple(v)

    def closure_word(self, path) -> tuple:
        """Tree closure of ``path`` as a reduced word in the free basis of pi_1.

        Generator ``i + 1`` is the loop through the ``i``-th non-tree edge.
        """
        idx = self.index
        out = []
        for x in path:
            i = idx.get(letter_edge(x))
            if i is None:
                continue
            y = i + 1 if x > 0 else -(i + 1)
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
        return tuple(out)

    def basis_cycle(self, i: int) -> tuple:
        e = self.non_tree[i]
        s, t = self.graph.edges[e]
        return reduce(self.tree_path[s] + (e + 1,) + inverse(self.tree_path[t]))


def homology_basis(g: Graph, order: str = "bfs") -> HomologyBasis:
    """Spanning tree from the basepoint, edges scanned in id order.

    ``"bfs"`` (the shared convention) keeps tree paths short, which keeps
    lifting cheap on large covers.  ``"dfs"`` keeps a maximal run of each
    petal's lifts inside the tree, so lifted powers of a petal close up
    through a single non-tree edge; its tree paths can be very long.
    """
    if order not in ("bfs", "dfs"):
        raise ValueError("order must be 'bfs' or 'dfs'")
    parent = {g.basepoint: ()}
    tree = set()
    if order == "bfs":
        queue = deque([g.basepoint])
        while queue:
            u = queue.popleft()
            for e in sorted(g.incidence[u]):
                s, t = g.edges[e]
                if s == u and t not in parent:
                    parent[t] = parent[u] + (e + 1,)
                    tree.add(e)
                    queue.append(t)
                elif t == u and s not in parent:
                    parent[s] = parent[u] + (-(e + 1),)
                    tree.add(e)
                    queue.append(s)
    else:
        stack = [(g.basepoint, iter(sorted(g.incidence[g.basepoint])))]
        while stack:
            u, it = stack[-1]
            for e in it:
                s, t = g.edges[e]
                if s == u and t not in parent:
                    parent[t] = parent[u] + (e + 1,)
                    nxt = t
                elif t == u and s not in parent:
                    parent[s] = parent[u] + (-(e + 1),)
                    nxt = s
                else:
                    continue
                tree.add(e)
                stack.append((nxt, iter(sorted(g.incidence[nxt]))))
                break
            else:
                stack.pop()
    if len(parent) != g.num_vertices:
        raise ValueError("graph is not connected")
    non_tree = tuple(e for e in range(g.num_edges) if e not in tree)
    paths = tuple(parent[v] for v in range(g.num_vertices))
    return HomologyBasis(g, frozenset(tree), non_tree, paths)


def path_class(g: Graph, basis: HomologyBasis, path, start: int | None = None) -> tuple:
    start = g.basepoint if start is None else start
    if g.path_end(start, path) != start:
        raise ValueError("path is not closed")
    return basis.chain_class(path)


@dataclass(frozen=True)
class GraphMap:
    domain: Graph
    codomain: Graph
    vertex_map: tuple
    edge_images: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        object.__setattr__(self, "edge_images", tuple(tuple(p) for p in self.edge_images))
        if len(self.vertex_map) != self.domain.num_vertices:
            raise ValueError("vertex map has the wrong length")
        if len(self.edge_images) != self.domain.num_edges:
            raise ValueError("edge image list has the wrong length")
        for e, (s, t) in enumerate(self.domain.edges):
            path = self.edge_images[e]
            end = self.codomain.path_end(self.vertex_map[s], path)
            if end != self.vertex_map[t]:
                raise ValueError(f"image of edge {e} is not a path between the vertex images")

    @property
    def is_self_map(self):
        return self.domain == self.codomain

    def fixes_basepoint(self):
        return self.vertex_map[self.domain.basepoint] == self.codomain.basepoint

    def image_path(self, path) -> tuple:
        out = []
        for x in path:
            img = self.edge_images[letter_edge(x)]
            out.extend(img if x > 0 else inverse(img))
        return tuple(out)


def identity_map(g: Graph) -> GraphMap:
    return GraphMap(g, g, tuple(range(g.num_vertices)), tuple((e + 1,) for e in range(g.num_edges)))


def rose_map(f: FreeAut) -> GraphMap:
    R = rose(f.rank)
    return GraphMap(R, R, (0,), f.images)


def compose_maps(g: GraphMap, f: GraphMap, reduce_paths: bool = False) -> GraphMap:
    """``g o f``; edge images are concatenated (optionally freely reduced)."""
    if f.codomain != g.domain:
        raise ValueError("maps are not composable")
    imgs = []
    for p in f.edge_images:
        q = g.image_path(p)
        imgs.append(reduce(q) if reduce_paths else q)
    return GraphMap(f.domain, g.codomain, tuple(g.vertex_map[v] for v in f.vertex_map), imgs)


def map_power(f: GraphMap, k: int, reduce_paths: bool = False) -> GraphMap:
    out = f
    for _ in range(k - 1):
        out = compose_maps(f, out, reduce_paths)
    return out


@dataclass(frozen=True, eq=False)
class DeckElement:
    vertex_perm: tuple
    edge_perm: tuple

    @property
    def key(self):
        return self.vertex_perm[0]


@dataclass(eq=False)
class Cover:
    """A covering map ``total -> base`` given by vertex and edge projections.

    ``stages`` lists the abelian stages used to build the cover, each a dict
    with ``factors`` (invariant factors of the deck group) and ``q`` (the
    quotient map on the homology basis of that stage's base).
    """

    total: Graph
    base: Graph
    vertex_proj: tuple
    edge_proj: tuple
    stages: list = field(default_factory=list)
    labels: tuple | None = None  # deck label of each total vertex (single stage)
    disconnected: bool = False

    def __post_init__(self):
        self.vertex_proj = tuple(self.vertex_proj)
        self.edge_proj = tuple(self.edge_proj)
        out_lift, in_lift = {}, {}
        for eps, (s, t) in enumerate(self.total.edges):
            e = self.edge_proj[eps]
            bs, bt = self.base.edges[e]
            if self.vertex_proj[s] != bs or self.vertex_proj[t] != bt:
                raise NotCoveringError(f"edge {eps} does not project onto edge {e}")
            if (s, e) in out_lift or (t, e) in in_lift:
                raise NotCoveringError("projection is not injective on stars")
            out_lift[(s, e)] = eps
            in_lift[(t, e)] = eps
        for x in range(self.total.num_vertices):
            u = self.vertex_proj[x]
            for e, (bs, bt) in enumerate(self.base.edges):
                if bs == u and (x, e) not in out_lift:
                    raise NotCoveringError("projection is not surjective on stars")
                if bt == u and (x, e) not in in_lift:
                    raise NotCoveringError("projection is not surjective on stars")
        self._out = out_lift
        self._in = in_lift

    @property
    def basepoint(self):
        return self.total.basepoint

    @property
    def degree(self):
        return self.total.num_vertices // self.base.num_vertices

    def fiber(self, u: int) -> list:
        return [x for x, b in enumerate(self.vertex_proj) if b == u]

    def lift_path(self, start: int, path) -> tuple:
        """Lift a base edge path starting at total vertex ``start``."""
        out = []
        x = start
        total = self.total.edges
        for letter in path:
            e = letter_edge(letter)
            if letter > 0:
                eps = self._out[(x, e)]
                x = total[eps][1]
                out.append(eps + 1)
            else:
                eps = self._in[(x, e)]
                x = total[eps][0]
                out.append(-(eps + 1))
        return tuple(out)

    def project_path(self, path) -> tuple:
        return tuple((self.edge_proj[letter_edge(x)] + 1) * (1 if x > 0 else -1) for x in path)

    @cached_property
    def deck_group(self) -> list:
        """Deck transformations, indexed by the image of the basepoint.

        Raises ``ValueError`` for irregular covers.
        """
        b = self.basepoint
        basis = homology_basis(self.total)
        out = []
        for x in self.fiber(self.vertex_proj[b]):
            d = self._deck_to(x, basis)
            if d is None:
                raise ValueError("cover is not regular")
            out.append(d)
        return out

    def is_regular(self) -> bool:
        try:
            self.deck_group
        except ValueError:
            return False
        return True

    def _deck_to(self, x0, basis):
        vimg = [None] * self.total.num_vertices
        vimg[self.basepoint] = x0
        for v in range(self.total.num_vertices):
            path = self.project_path(basis.tree_path[v])
            vimg[v] = self.total.path_end(x0, self.lift_path(x0, path))
        eimg = []
        for eps, (s, t) in enumerate(self.total.edges):
            e = self.edge_proj[eps]
            img = self._out[(vimg[s], e)]
            if self.total.edges[img][1] != vimg[t]:
                return None
            eimg.append(img)
        return DeckElement(tuple(vimg), tuple(eimg))


def _check_budget(edges: int, cap: int):
    if edges > cap:
        raise BudgetError(f"cover would have {edges} edges, above the cap of {cap}")


def _subgroup_elements(gens, factors):
    """Elements of the subgroup of prod Z/factors generated by ``gens``."""
    zero = tuple(0 for _ in factors)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple((x + y) % m for x, y, m in zip(a, g, factors))
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen)


def abelian_cover(base: Graph, q, factors, edge_cap: int = DEFAULT_EDGE_CAP) -> Cover:
    """Cover of ``base`` pulled back from ``q: H_1(base) -> prod Z/factors``.

    ``q`` is a ``len(factors) x rank`` integer matrix acting on homology
    coordinates.  If ``q`` is not onto, the component of the basepoint is
    returned (``disconnected`` is set and the deck group shrinks to the image).
    """
    factors = tuple(int(m) for m in factors)
    if any(m < 1 for m in factors):
        raise ValueError("invariant factors must be positive")
    basis = homology_basis(base)
    Q = np.zeros((len(factors), basis.rank), dtype=object)
    if len(factors):
        Q[:, :] = np.asarray(q, dtype=object).reshape(len(factors), basis.rank)
    cols = [tuple(int(Q[i, j]) % factors[i] for i in range(len(factors))) for j in range(basis.rank)]
    full = 1
    for m in factors:
        full *= m
    group = _subgroup_elements(cols, factors)
    _check_budget(len(group) * base.num_edges, edge_cap)
    index = {d: i for i, d in enumerate(group)}
    V, E = base.num_vertices, base.num_edges
    shifts = []
    for e in range(E):
        i = basis.index.get(e)
        shifts.append(cols[i] if i is not None else tuple(0 for _ in factors))
    edges = []
    eproj = []
    for d in group:
        for e, (s, t) in enumerate(base.edges):
            d2 = tuple((a + b) % m for a, b, m in zip(d, shifts[e], factors))
            edges.append((index[d] * V + s, index[d2] * V + t))
            eproj.append(e)
    vproj = [u for _ in group for u in range(V)]
    labels = tuple(d for d in group for _ in range(V))
    total = Graph(V * len(group), tuple(edges), base.basepoint)
    stage = {"factors": list(factors), "q": [[int(Q[i, j]) for j in range(basis.rank)]
                                             for i in range(len(factors))]}
    return Cover(total, base, tuple(vproj), tuple(eproj), [stage], labels,
                 disconnected=len(group) != full)


def mod_p_cover(base: Graph, p: int, edge_cap: int = DEFAULT_EDGE_CAP) -> Cover:
    """Cover for the kernel of ``pi_1(base) -> H_1(base; Z/p)``."""
    if p < 2:
        raise ValueError("p must be at least 2")
    r = base.euler_rank
    _check_budget(base.num_edges * p ** r if r < 64 else edge_cap + 1, edge_cap)
    cover = abelian_cover(base, np.eye(r, dtype=object), (p,) * r, edge_cap)
    cover.stages[0]["p"] = p
    return cover


def compose_covers(upper: Cover, lower: Cover) -> Cover:
    """The composite ``upper.total -> lower.base`` of a cover of ``lower.total``."""
    if upper.base != lower.total:
        raise ValueError("covers do not stack")
    vproj = tuple(lower.vertex_proj[v] for v in upper.vertex_proj)
    eproj = tuple(lower.edge_proj[e] for e in upper.edge_proj)
    return Cover(upper.total, lower.base, vproj, eproj, lower.stages + upper.stages)


def trivial_cover(g: Graph) -> Cover:
    return Cover(g, g, tuple(range(g.num_vertices)), tuple(range(g.num_edges)), [], None)


def lift_map(cover: Cover, phi: GraphMap, basepoint_lift: int | None = None) -> GraphMap | None:
    """Lift ``phi`` to the total space sending the chosen basepoint lift to itself.

    Returns ``None`` when no such lift exists, i.e. when ``phi`` does not
    carry the cover's subgroup into itself.
    """
    if phi.domain != cover.base or phi.codomain != cover.base:
        raise ValueError("phi must be a self-map of the base")
    x0 = cover.basepoint if basepoint_lift is None else basepoint_lift
    if phi.vertex_map[cover.vertex_proj[x0]] != cover.vertex_proj[x0]:
        raise ValueError("phi must fix the projection of the basepoint lift")
    total = cover.total
    basis = homology_basis(Graph(total.num_vertices, total.edges, x0))
    vimg = [None] * total.num_vertices
    for v in range(total.num_vertices):
        down = phi.image_path(cover.project_path(basis.tree_path[v]))
        vimg[v] = total.path_end(x0, cover.lift_path(x0, down))
    imgs = []
    for eps, (s, t) in enumerate(total.edges):
        up = cover.lift_path(vimg[s], phi.edge_images[cover.edge_proj[eps]])
        if total.path_end(vimg[s], up) != vimg[t]:
            return None
        imgs.append(up)
    return GraphMap(total, total, tuple(vimg), tuple(imgs))


def homology_action(phi: GraphMap, basis: HomologyBasis | None = None) -> np.ndarray:
    """Matrix of ``phi_*`` on H_1 of its domain (columns are images).

    The map need not fix the basepoint; only closed cycles are pushed forward.
    """
    if not phi.is_self_map:
        raise ValueError("homology_action needs a self-map")
    basis = homology_basis(phi.domain) if basis is None else basis
    r = basis.rank
    img = [basis.chain_class(p) for p in phi.edge_images]
    M = np.zeros((r, r), dtype=object)
    for j in range(r):
        col = [0] * r
        for x in basis.basis_cycle(j):
            c = img[letter_edge(x)]
            sgn = 1 if x > 0 else -1
            for i in range(r):
                col[i] += sgn * c[i]
        M[:, j] = col
    return M


def deck_action_on_homology(cover: Cover) -> dict:
    """``{deck key: matrix}``; the key is the image of the basepoint."""
    basis = homology_basis(cover.total)
    out = {}
    for d in cover.deck_group:
        dmap = GraphMap(cover.total, cover.total, d.vertex_perm,
                        tuple((e + 1,) for e in d.edge_perm))
        out[d.key] = homology_action(dmap, basis)
    return out


def chain_action(phi: GraphMap) -> np.ndarray:
    """Signed matrix of ``phi_#`` on C_1 (columns are edge images)."""
    m = phi.domain.num_edges
    M = np.zeros((phi.codomain.num_edges, m), dtype=object)
    for e, path in enumerate(phi.edge_images):
        for x in path:
            M[letter_edge(x), e] += 1 if x > 0 else -1
    return M


def graph_to_json(g: Graph):
    return {"vertices": g.num_vertices, "edges": [list(e) for e in g.edges], "basepoint": g.basepoint}


def cover_to_json(cover: Cover):
    return {
        "base": graph_to_json(cover.base),
        "stages": cover.stages,
        "total": graph_to_json(cover.total),
        "vertex_projection": list(cover.vertex_proj),
        "edge_projection": list(cover.edge_proj),
        "degree": cover.degree,
    }


def cover_from_stages(base: Graph, stages, edge_cap: int = DEFAULT_EDGE_CAP) -> Cover:
    """Rebuild a tower from its stage list (``p`` or ``factors`` + ``q``)."""
    cover = trivial_cover(base)
    for st in stages:
        if "p" in st and st.get("q") is None:
            nxt = mod_p_cover(cover.total, st["p"], edge_cap)
        elif "p" in st:
            nxt = mod_p_cover(cover.total, st["p"], edge_cap)
            if nxt.stages[0]["q"] != st["q"]:
                raise ValueError("mod-p stage has an inconsistent quotient map")
        else:
            nxt = abelian_cover(cover.total, st["q"], st["factors"], edge_cap)
        cover = nxt if not cover.stages else compose_covers(nxt, cover)
    return cover


def lift_through_tower(base_map: GraphMap, stages, edge_cap: int = DEFAULT_EDGE_CAP):
    """Lift a basepoint-fixing self-map through each stage of a tower.

    Returns ``(levels, lifted_map)`` where ``levels`` holds the per-stage
    covers; ``lifted_map`` is ``None`` when some stage does not lift.
    """
    current = base_map
    levels = []
    for st in stages:
        g = current.domain
        if "p" in st:
            cov = mod_p_cover(g, st["p"], edge_cap)
        else:
            cov = abelian_cover(g, st["q"], st["factors"], edge_cap)
        levels.append(cov)
        current = lift_map(cov, current)
        if current is None:
            return levels, None
    return levels, current


def deck_is_abelian(cover: Cover) -> bool:
    deck = cover.deck_group
    for a, b in itertools.combinations(deck, 2):
        ab = tuple(a.vertex_perm[v] for v in b.vertex_perm)
        ba = tuple(b.vertex_perm[v] for v in a.vertex_perm)
        if ab != ba:
            return False
    return True
