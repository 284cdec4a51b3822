import math
import random

import flint
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcover.graphs import homology_action as graph_homology_action
from homcover.graphs import (deck_action_on_homology, homology_basis, identity_map, lift_map, map_power,
                             mod_p_cover, rose, rose_map, trivial_cover)
from homcover.group_ring import Character, specialize_matrix
from homcover.spectra import (ConvergenceError, chain_vs_homology_check, charpoly, complex_spectral_radius,
                              durand_kerner, homology_action, integer_order, integer_spectral_radius)
from homcover.transition import build_transition, matrix
from homcover.words import FreeAut, identity_aut
from oracles import companion_power_radius, complex_companion_radius
from test_words import automorphisms

I2 = np.eye(2, dtype=object)


def test_order_examples():
    v = integer_order([[0, -1], [1, 0]])
    assert (v.tag, v.order) == ("finite", 4)
    v = integer_order([[1, 1], [0, 1]])
    assert v.infinite and v.reason == "non-semisimple cyclotomic part"
    v = integer_order([[1, 1], [1, 0]])
    assert v.infinite and v.reason == "non-cyclotomic factor"
    assert ((-1, -1, 1), 1) in v.factors
    assert v.radius == pytest.approx((1 + 5 ** 0.5) / 2)
    assert integer_order(np.eye(3, dtype=object)).order == 1
    assert integer_order(np.zeros((0, 0), dtype=object)).order == 1


def _unimodular(n, rng, steps=6):
    U = np.eye(n, dtype=object)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        U[i] += rng.choice([-1, 1]) * U[j]
    return U


def _inverse_unimodular(U):
    inv = flint.fmpz_mat([[int(x) for x in r] for r in U]).inv()
    return np.array([[int(inv[i, j]) for j in range(U.shape[0])] for i in range(U.shape[0])], dtype=object)


@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_signed_permutations_have_the_expected_order(n, seed):
    """Conjugates of signed permutation matrices; the order is known from the cycle type."""
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice([-1, 1]) for _ in range(n)]
    P = np.zeros((n, n), dtype=object)
    for j in range(n):
        P[perm[j], j] = signs[j]
    expected, seen = 1, set()
    for s in range(n):
        if s in seen:
            continue
        length, prod, x = 0, 1, s
        while x not in seen:
            seen.add(x)
            prod *= signs[x]
            x = perm[x]
            length += 1
        expected = math.lcm(expected, length * (1 if prod == 1 else 2))
    U = _unimodular(n, rng)
    M = U.dot(P).dot(_inverse_unimodular(U))
    v = integer_order(M)
    assert v.tag == "finite" and v.order == expected
    Mk = np.eye(n, dtype=object)
    for k in range(1, v.order + 1):
        Mk = Mk.dot(M)
        assert (Mk == np.eye(n, dtype=object)).all() == (k == v.order)


def test_charpoly_convention():
    assert charpoly([[1, 1], [1, 0]]) == (-1, -1, 1)
    assert charpoly(np.zeros((0, 0), dtype=object)) == (1,)


def test_radius_examples(partial_conj):
    assert complex_spectral_radius(np.eye(3)) == pytest.approx(1)
    assert complex_spectral_radius(np.array([[2.0]])) == pytest.approx(2)
    A = matrix(build_transition(rose_map(partial_conj)))
    M = specialize_matrix(A, Character((0.5, 0)))
    assert complex_spectral_radius(M) == pytest.approx(1, abs=1e-8)
    assert integer_spectral_radius([[1, 1], [1, 0]]) == pytest.approx((1 + 5 ** 0.5) / 2, abs=1e-12)


def test_durand_kerner_roots():
    r = sorted(durand_kerner([1, -6, 11, -6]).real)
    assert r == pytest.approx([1, 2, 3], abs=1e-9)
    assert sorted(abs(durand_kerner([1, 0, 0, 0]))) == [0, 0, 0]
    with pytest.raises(ConvergenceError):
        durand_kerner([1, 0, 1], max_iter=1)


@settings(max_examples=40)
@given(st.integers(1, 12), st.integers(0, 10 ** 6))
def test_radius_against_companion_oracle(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert abs(complex_spectral_radius(M) - complex_companion_radius(M)) < 1e-8


@settings(max_examples=20)
@given(st.integers(1, 10), st.integers(0, 10 ** 6))
def test_integer_radius_against_companion_oracle(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(-3, 4, size=(n, n)).astype(object)
    assert abs(integer_spectral_radius(M) - companion_power_radius(M)) < 1e-8


def test_homology_action_examples(partial_conj):
    C = mod_p_cover(rose(2), 2)
    assert (homology_action(C, identity_map(C.total)) == np.eye(5, dtype=object)).all()
    T = trivial_cover(rose(2))
    assert (homology_action(T, rose_map(partial_conj)) == I2).all()
    H = homology_action(C, lift_map(C, rose_map(partial_conj)))
    assert H.shape == (5, 5) and not integer_order(H).infinite


def random_positive_map(rng, n, max_len):
    imgs = tuple(tuple(rng.choice(range(1, n + 1)) for _ in range(rng.randint(2, max_len))) for _ in range(n))
    return FreeAut(n, imgs)


def test_chain_vs_homology_examples():
    r = chain_vs_homology_check(identity_map(rose(2)))
    assert r.ok and r.chain_radius == pytest.approx(1) and r.homology_radius == pytest.approx(1)
    r = chain_vs_homology_check(rose_map(FreeAut(1, ((1, 1),))))
    assert r.chain_radius == pytest.approx(2) and r.homology_radius == pytest.approx(2)


def test_chain_vs_homology_on_covers():
    rng = random.Random(3)
    for _ in range(8):
        n = rng.choice([2, 3])
        f = random_positive_map(rng, n, 3)
        phi = rose_map(f)
        for C in (trivial_cover(rose(n)), mod_p_cover(rose(n), 2)):
            r = chain_vs_homology_check(lift_map(C, phi))
            assert r.ok
            if r.chain_radius > 1.1:
                assert abs(r.chain_radius - r.homology_radius) <= 1e-6


def _fixes_fiber(phi0, C):
    return all(phi0.vertex_map[v] == v for v in C.fiber(0))


@settings(max_examples=15)
@given(automorphisms(max_rank=2, max_moves=5), st.sampled_from([2, 3]))
def test_deck_commutes_with_fiber_fixing_lift(f, p):
    C = mod_p_cover(rose(f.rank), p)
    phi0 = lift_map(C, rose_map(f))
    m = next(k for k in range(1, 200) if _fixes_fiber(map_power(phi0, k), C))
    psi = map_power(phi0, m)
    B = homology_basis(C.total)
    H = graph_homology_action(psi, B)
    for D in deck_action_on_homology(C).values():
        assert (D.dot(H) == H.dot(D)).all()


def test_identity_has_finite_lifts():
    C = mod_p_cover(rose(2), 3)
    v = integer_order(homology_action(C, lift_map(C, rose_map(identity_aut(2)))))
    assert v.order == 1
