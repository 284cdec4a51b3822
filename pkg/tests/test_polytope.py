import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcover.polytope import (convex_hull, hausdorff_sq, int_det, min_norm_point, rank_of,
                               sq_distance_to_hull)
from oracles import lp_in_hull, lp_sq_distance


@st.composite
def point_sets(draw, max_dim=4, max_points=14, box=4):
    d = draw(st.integers(1, max_dim))
    pts = draw(st.lists(st.tuples(*[st.integers(-box, box)] * d), min_size=1, max_size=max_points))
    return d, pts


def _dot(u, v):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(u, v))


def test_square_with_interior_point():
    P = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)])
    assert set(P.vertices) == {(0, 0), (2, 0), (0, 2), (2, 2)}
    assert len(P.facets) == 4 and P.affine_dim == 2
    assert P.contains((1, 1)) and not P.contains((3, 1))


def test_degenerate_hulls():
    seg = convex_hull([(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert seg.affine_dim == 1 and set(seg.vertices) == {(0, 0, 0), (2, 2, 2)}
    assert seg.contains((1, 1, 1)) and not seg.contains((1, 1, 0))
    pt = convex_hull([(3, 4)])
    assert pt.affine_dim == 0 and pt.vertices == ((3, 4),)
    tri = convex_hull([(0, 0, 1), (1, 0, 1), (0, 1, 1), (Fraction(1, 3), Fraction(1, 3), 1)])
    assert tri.affine_dim == 2 and len(tri.vertices) == 3


def test_cube_grid():
    P = convex_hull(list(itertools.product(range(3), repeat=3)))
    assert len(P.vertices) == 8 and len(P.facets) == 6


def test_bareiss_against_fraction_elimination():
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        M = rng.integers(-6, 7, size=(n, n)).tolist()
        A = [[Fraction(x) for x in row] for row in M]
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c] != 0), None)
            if piv is None:
                det = Fraction(0)
                break
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = -det
            det *= A[c][c]
            for r in range(c + 1, n):
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
        assert int_det(M) == det
        assert rank_of(M) == np.linalg.matrix_rank(np.array(M, dtype=float))


@settings(max_examples=40)
@given(point_sets())
def test_hull_against_lp(ds):
    d, pts = ds
    P = convex_hull(pts, d)
    verts = set(P.vertices)
    uniq = sorted(set(pts))
    for p in uniq:
        others = [q for q in uniq if q != p]
        is_vertex = not others or not lp_in_hull(p, others)
        assert (tuple(Fraction(a) for a in p) in verts) == is_vertex
        assert P.contains(p)
    for (n, b) in P.facets:
        assert any(_dot(n, v) == b for v in P.vertices)


@settings(max_examples=40)
@given(point_sets())
def test_omega_maximised_only_at_its_vertex(ds):
    d, pts = ds
    P = convex_hull(pts, d)
    for v, w in zip(P.vertices, P.omega):
        top = _dot(w, v)
        for u in P.vertices:
            if u != v:
                assert _dot(w, u) < top


def test_projection_dimension_bound():
    P = convex_hull([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)])
    assert P.affine_dim == 2 and len(P.equations) == 2


def test_hausdorff_examples():
    I1 = convex_hull([(0,), (1,)])
    I2 = convex_hull([(0,), (2,)])
    assert hausdorff_sq(I1, I2) == 1
    assert hausdorff_sq(I2, I2) == 0
    sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert hausdorff_sq(sq, sq.scale(Fraction(1, 2))) == Fraction(1, 2)


@settings(max_examples=40)
@given(point_sets(max_dim=3, max_points=8), st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_distance_against_qp(ds, x):
    d, pts = ds
    x = tuple(x[:d])
    P = convex_hull(pts, d)
    exact = sq_distance_to_hull(x, P)
    assert abs(float(exact) - lp_sq_distance(x, P.vertices)) < 1e-6
    y = min_norm_point([tuple(a - b for a, b in zip(v, x)) for v in P.vertices])
    assert _dot(y, y) == exact


@settings(max_examples=30)
@given(st.lists(point_sets(max_dim=2, max_points=6), min_size=3, max_size=3))
def test_hausdorff_is_a_metric(triple):
    d = triple[0][0]
    polys = [convex_hull([tuple((list(p) + [0, 0])[:d]) for p in pts], d) for _, pts in triple]
    h = lambda a, b: math.sqrt(hausdorff_sq(a, b))  # noqa: E731
    A, B, C = polys
    assert hausdorff_sq(A, B) == hausdorff_sq(B, A)
    assert h(A, C) <= h(A, B) + h(B, C) + 1e-12
    assert hausdorff_sq(A, A) == 0


def test_large_input_uses_prefilter_consistently():
    rng = np.random.default_rng(1)
    pts = [tuple(int(a) for a in p) for p in rng.integers(-50, 51, size=(3000, 2))]
    P = convex_hull(pts)
    sample = pts[:300]
    assert all(P.contains(p) for p in sample)
    ref = convex_hull(sorted(set(P.vertices) | set(sample)))
    assert set(ref.vertices) == set(P.vertices)


def test_empty_hull_needs_dimension():
    with pytest.raises(ValueError):
        convex_hull([])
    assert len(convex_hull([], 2)) == 0
