"""Exact rational convex hulls in low dimension.

Points are scaled to a common integer lattice and projected onto pivot
coordinates of their affine hull, where an incremental beneath-beyond hull
with exact integer orientation tests is built.  Coplanar simplicial facets
are merged afterwards, and a point is a vertex iff the normals of the facets
through it span the affine hull.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np


def int_det(M) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_k, row_i = A[k], A[i]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _rref(rows):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank_of(rows) -> int:
    return len(_rref(rows)[1])


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Polytope:
    """Convex polytope with rational vertices.

    ``facets`` are ``(normal, offset)`` pairs with ``normal . x <= offset``,
    ``equations`` pin down the affine hull (``normal . x == offset``), and
    ``omega[i]`` is a functional maximised over the polytope only at
    ``vertices[i]``.
    """

    dim: int
    vertices: tuple
    facets: tuple = ()
    equations: tuple = ()
    omega: tuple = ()
    affine_dim: int = 0

    def __len__(self):
        return len(self.vertices)

    def contains(self, x) -> bool:
        x = tuple(Fraction(a) for a in x)
        if not self.vertices:
            return False
        return (all(_dot(n, x) == b for n, b in self.equations)
                and all(_dot(n, x) <= b for n, b in self.facets))

    def scale(self, c) -> "Polytope":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return Polytope(
            self.dim,
            tuple(tuple(a * c for a in v) for v in self.vertices),
            tuple((n, b * c) for n, b in self.facets),
            tuple((n, b * c) for n, b in self.equations),
            self.omega,
            self.affine_dim,
        )

    def vertex_index(self, v) -> int | None:
        v = tuple(Fraction(a) for a in v)
        try:
            return self.vertices.index(v)
        except ValueError:
            return None

    def to_json(self):
        fmt = lambda v: [str(a) for a in v]  # noqa: E731
        return {
            "dim": self.dim,
            "affine_dim": self.affine_dim,
            "vertices": [fmt(v) for v in self.vertices],
            "facets": [{"normal": fmt(n), "offset": str(b)} for n, b in self.facets],
        }


def _to_lattice(points):
    pts = [tuple(Fraction(a) for a in p) for p in points]
    L = math.lcm(*(a.denominator for p in pts for a in p)) if pts and pts[0] else 1
    return [tuple(int(a * L) for a in p) for p in pts], L


def convex_hull(points, dim: int | None = None) -> Polytope:
    pts = sorted(set(tuple(Fraction(a) for a in p) for p in points))
    if not pts:
        if dim is None:
            raise ValueError("empty point set needs an explicit dimension")
        return Polytope(dim, ())
    r = len(pts[0]) if dim is None else dim
    ipts, L = _to_lattice(pts)
    p0 = ipts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in ipts[1:]]
    basis, pivots = _rref(diffs) if diffs else ([], [])
    d = len(pivots)
    # equations of the affine hull: complement of the direction space
    free = [c for c in range(r) if c not in pivots]
    equations = []
    for c in free:
        n = [Fraction(0)] * r
        n[c] = Fraction(1)
        for row, pc in zip(basis, pivots):
            n[pc] = -row[c]
        equations.append((tuple(n), _dot(n, pts[0])))
    if d == 0:
        return Polytope(r, (pts[0],), (), tuple(equations), ((Fraction(0),) * r,), 0)

    proj = [tuple(p[c] for c in pivots) for p in ipts]
    hyperplanes, candidates = _hull_projected(proj, d)
    verts, omegas = [], []
    for i in sorted(candidates):
        tight = [n for n, b in hyperplanes if _dot(n, proj[i]) == b]
        if rank_of(tight) == d:
            w = [Fraction(0)] * r
            for n in tight:
                for k, c in enumerate(pivots):
                    w[c] += n[k]
            verts.append(pts[i])
            omegas.append(tuple(w))
    facets = []
    for n, b in hyperplanes:
        full = [Fraction(0)] * r
        for k, c in enumerate(pivots):
            full[c] = Fraction(n[k])
        facets.append((tuple(full), Fraction(b, L)))
    return Polytope(r, tuple(verts), tuple(sorted(facets)), tuple(equations), tuple(omegas), d)


def _normal(pts):
    """Integer normal of the hyperplane through ``len(pts) = d`` points of Z^d."""
    d = len(pts[0])
    base = pts[0]
    D = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    n = []
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in D]
        n.append((-1) ** j * int_det(minor))
    g = math.gcd(*n)
    if g > 1:
        n = [x // g for x in n]
    return tuple(n), _dot(n, base)


def _simplex(proj, d):
    chosen = [0]
    rows = []
    for i in range(1, len(proj)):
        cand = rows + [[a - b for a, b in zip(proj[i], proj[0])]]
        if rank_of(cand) == len(cand):
            rows = cand
            chosen.append(i)
            if len(chosen) == d + 1:
                break
    return chosen


def _prefilter(proj, d):
    """Drop points strictly inside the hull of a few extreme points.

    Only used for large inputs; the float test keeps a safety margin so no
    true vertex is removed.
    """
    X = np.array(proj, dtype=float)
    dirs = [np.eye(d)[i] * s for i in range(d) for s in (1, -1)]
    for i, j in combinations(range(d), 2):
        for s in (1, -1):
            for t in (1, -1):
                v = np.zeros(d)
                v[i], v[j] = s, t
                dirs.append(v)
    ext = sorted({int(np.argmax(X @ v)) for v in dirs})
    sub = [proj[i] for i in ext]
    if rank_of([[a - b for a, b in zip(p, sub[0])] for p in sub[1:]]) < d:
        return list(range(len(proj)))
    hp, _ = _hull_projected(sub, d, prefilter=False)
    N = np.array([n for n, _ in hp], dtype=float)
    B = np.array([b for _, b in hp], dtype=float)
    scale = np.abs(N).sum(axis=1) * (np.abs(X).max() + 1.0)
    inside = ((X @ N.T) < (B - 1e-9 * scale - 1e-6)).all(axis=1)
    keep = set(ext)
    keep.update(int(i) for i in np.nonzero(~inside)[0])
    return sorted(keep)


def _hull_projected(proj, d, prefilter=True):
    """Facet hyperplanes and vertex candidates of a full-dimensional point set."""
    index = list(range(len(proj)))
    if prefilter and len(proj) > 2000:
        index = _prefilter(proj, d)
    sub = [proj[i] for i in index]
    simplex = _simplex(sub, d)
    interior = [sum(sub[i][k] for i in simplex) for k in range(d)]

    facets = {}
    ridge_map = {}
    next_id = [0]

    def add(verts):
        n, b = _normal([sub[i] for i in verts])
        if _dot(n, interior) > (d + 1) * b:
            n, b = tuple(-x for x in n), -b
        fid = next_id[0]
        next_id[0] += 1
        facets[fid] = (verts, n, b)
        for r in combinations(verts, d - 1):
            ridge_map.setdefault(r, set()).add(fid)

    for face in combinations(simplex, d):
        add(tuple(sorted(face)))
    in_simplex = set(simplex)
    for idx in range(len(sub)):
        if idx in in_simplex:
            continue
        p = sub[idx]
        visible = [fid for fid, (_, n, b) in facets.items() if _dot(n, p) > b]
        if not visible:
            continue
        vis = set(visible)
        horizon = []
        for fid in visible:
            for r in combinations(facets[fid][0], d - 1):
                other = ridge_map[r] - {fid}
                if not (other & vis):
                    horizon.append(r)
        for fid in visible:
            for r in combinations(facets[fid][0], d - 1):
                s = ridge_map[r]
                s.discard(fid)
                if not s:
                    del ridge_map[r]
            del facets[fid]
        for r in horizon:
            add(tuple(sorted(r + (idx,))))
    hyperplanes = sorted({(n, b) for _, n, b in facets.values()})
    cand = {index[i] for verts, _, _ in facets.values() for i in verts}
    return hyperplanes, cand


def min_norm_point(points):
    """Exact Wolfe minimum-norm point of ``conv(points)``; returns the point."""
    P = [tuple(Fraction(a) for a in p) for p in points]
    if not P:
        raise ValueError("empty point set")
    j = min(range(len(P)), key=lambda i: _dot(P[i], P[i]))
    S, lam = [j], [Fraction(1)]
    x = P[j]
    while True:
        j = min(range(len(P)), key=lambda i: _dot(x, P[i]))
        if _dot(x, x) <= _dot(x, P[j]) or j in S:
            return x
        S.append(j)
        lam.append(Fraction(0))
        while True:
            alpha = _affine_min(P, S)
            if all(a > 0 for a in alpha):
                lam = alpha
                break
            theta = min(l / (l - a) for l, a in zip(lam, alpha) if a <= 0)
            lam = [theta * a + (1 - theta) * l for l, a in zip(lam, alpha)]
            keep = [i for i, l in enumerate(lam) if l > 0]
            S = [S[i] for i in keep]
            lam = [lam[i] for i in keep]
        x = tuple(sum(l * P[s][k] for l, s in zip(lam, S)) for k in range(len(x)))


def _affine_min(P, S):
    """Barycentric coefficients of the min-norm point of aff(P[S])."""
    m = len(S)
    # [G 1; 1^T 0] [alpha; mu] = [0; 1]
    A = [[_dot(P[a], P[b]) for b in S] + [Fraction(1)] for a in S]
    A.append([Fraction(1)] * m + [Fraction(0)])
    rhs = [Fraction(0)] * m + [Fraction(1)]
    M = [row + [v] for row, v in zip(A, rhs)]
    R, piv = _rref(M)
    sol = [Fraction(0)] * (m + 1)
    for row, c in zip(R, piv):
        sol[c] = row[-1]
    return sol[:m]


def sq_distance_to_hull(x, P: Polytope) -> Fraction:
    shifted = [tuple(a - b for a, b in zip(v, x)) for v in P.vertices]
    y = min_norm_point(shifted)
    return _dot(y, y)


def hausdorff_sq(P: Polytope, Q: Polytope) -> Fraction:
    """Exact squared Hausdorff distance between two polytopes."""
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    d1 = max((sq_distance_to_hull(v, Q) for v in P.vertices), default=Fraction(0))
    d2 = max((sq_distance_to_hull(v, P) for v in Q.vertices), default=Fraction(0))
    return max(d1, d2)
