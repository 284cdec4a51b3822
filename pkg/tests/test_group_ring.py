import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homcover.graphs import rose_map
from homcover.group_ring import (Character, GroupRingMatrix, LaurentPoly, find_large_character,
                                 format_laurent, l1_norm, l2_norm_sq, laurent_from_json,
                                 laurent_to_json, parse_laurent, parseval_check, sigma_twist,
                                 specialize, specialize_matrix, support_diameter)
from homcover.transition import build_transition, matrix

X = LaurentPoly.monomial((1,))
Xi = LaurentPoly.monomial((-1,))
ONE = LaurentPoly.one(1)


@st.composite
def polys(draw, rank=None, box=3, max_terms=8):
    r = draw(st.integers(1, 3)) if rank is None else rank
    exps = st.tuples(*[st.integers(-box, box)] * r)
    terms = draw(st.lists(st.tuples(exps, st.integers(-5, 5)), max_size=max_terms))
    return LaurentPoly(r, terms)


@st.composite
def poly_pairs(draw):
    r = draw(st.integers(1, 3))
    return draw(polys(rank=r)), draw(polys(rank=r))


@st.composite
def characters(draw, rank):
    return Character(tuple(Fraction(draw(st.integers(0, 11)), draw(st.integers(1, 12))) for _ in range(rank)))


@st.composite
def unimodular(draw, r):
    M = np.eye(r, dtype=object)
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, r - 1)), draw(st.integers(0, r - 1))
        E = np.eye(r, dtype=object)
        if i == j:
            E[i, i] = -1
        else:
            E[i, j] = draw(st.sampled_from([1, -1]))
        M = M.dot(E)
    return M


def test_arithmetic_examples():
    assert (ONE + Xi) * (ONE - Xi) == ONE - Xi * Xi
    assert format_laurent((ONE + Xi) * (ONE - Xi)) == "1 - x^-2"
    assert X * 0 == LaurentPoly.zero(1)
    x, y = LaurentPoly.monomial((1, 0)), LaurentPoly.monomial((0, 1))
    assert (x + y) * (x - y) == x * x - y * y


def test_norm_examples():
    assert (l1_norm(ONE + Xi), l2_norm_sq(ONE + Xi)) == (2, 2)
    assert (l1_norm(3 * ONE), l2_norm_sq(3 * ONE)) == (3, 9)
    assert (l1_norm(LaurentPoly.zero(2)), l2_norm_sq(LaurentPoly.zero(2))) == (0, 0)


def test_sigma_twist_examples():
    p = LaurentPoly.monomial((1, 0))
    assert sigma_twist(p, np.eye(2, dtype=object)) == p
    assert sigma_twist(p, [[1, 1], [1, 0]]) == LaurentPoly.monomial((1, 1))
    assert sigma_twist(LaurentPoly.one(2), [[1, 1], [1, 0]]) == LaurentPoly.one(2)


def test_specialize_examples(partial_conj):
    assert abs(specialize(ONE + Xi, Character((Fraction(1, 2),)))) < 1e-12
    assert specialize(ONE + Xi, Character((0,))) == pytest.approx(2)
    M = specialize_matrix(matrix(build_transition(rose_map(partial_conj))), Character((Fraction(1, 2), 0)))
    assert np.allclose(M, [[1, 0], [0, -1]], atol=1e-12)


def test_parseval_examples():
    a, b = parseval_check(ONE + Xi, 4)
    assert a == 2 and abs(b - 2) < 1e-9
    assert parseval_check(LaurentPoly.zero(2), 5) == (0, 0.0)


def test_find_large_character_examples():
    psi = find_large_character(ONE + X + Xi, math.sqrt(2), (2, 3, 4))
    assert psi == Character((0,)) and abs(specialize(ONE + X + Xi, psi)) == pytest.approx(3)
    assert find_large_character(ONE + Xi, 1.9, (2, 3)) == Character((0,))
    assert find_large_character(ONE - X, 1.9, (2, 3)) == Character((Fraction(1, 2),))
    assert find_large_character(ONE - X, 2.5, (2, 3, 4)) is None


def test_format_parse_examples():
    p = parse_laurent("3 - 2*x^-1*y^2", 2)
    assert p.terms == {(0, 0): 3, (-1, 2): -2}
    assert format_laurent(p) == "3 - 2*x^-1*y^2"
    assert format_laurent(ONE + Xi * Xi) == "1 + x^-2"


def test_matrix_product_and_trace():
    A = GroupRingMatrix(1, [[ONE, Xi], [X, ONE]])
    B = A @ A
    assert B[0, 0] == ONE + ONE and B[0, 1] == Xi + Xi
    assert A.trace() == 2 * ONE
    assert GroupRingMatrix.zeros(1, 2).is_zero()


@given(poly_pairs())
def test_l1_submultiplicative(pq):
    p, q = pq
    assert l1_norm(p * q) <= l1_norm(p) * l1_norm(q)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(polys(rank=r), polys(rank=r), characters(r))))
def test_specialize_is_a_ring_map(args):
    p, q, psi = args
    assert abs(specialize(p * q, psi) - specialize(p, psi) * specialize(q, psi)) < 1e-10 * (1 + l1_norm(p) * l1_norm(q))
    assert abs(specialize(p + q, psi) - specialize(p, psi) - specialize(q, psi)) < 1e-10 * (1 + l1_norm(p) + l1_norm(q))


@given(polys(box=3), st.integers(0, 2))
def test_parseval_grid(p, extra):
    N = support_diameter(p) + 1 + extra
    a, b = parseval_check(p, N)
    assert abs(a - b) < 1e-9 * max(1, a)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(polys(rank=r), unimodular(r))))
def test_twist_preserves_norms(args):
    p, S = args
    q = sigma_twist(p, S)
    assert l1_norm(q) == l1_norm(p) and l2_norm_sq(q) == l2_norm_sq(p)


@given(polys())
def test_text_and_json_roundtrip(p):
    assert parse_laurent(format_laurent(p), p.rank) == p
    assert laurent_from_json(laurent_to_json(p), p.rank) == p


@given(polys(rank=2), characters(2))
def test_specialize_direct_sum(p, psi):
    direct = sum(c * cmath.exp(2j * math.pi * sum(float(q) * a for q, a in zip(psi.q, v)))
                 for v, c in p.terms.items())
    assert abs(specialize(p, psi) - direct) < 1e-9
