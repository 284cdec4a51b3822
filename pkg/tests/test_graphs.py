import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcover.graphs import (BudgetError, Graph, GraphMap, abelian_cover, chain_action, compose_covers,
                             cover_from_stages, cover_to_json, cycle_graph, deck_action_on_homology,
                             deck_is_abelian, homology_action, homology_basis, identity_map,
                             letter_edge, lift_map, lift_through_tower, mod_p_cover, path_class, rose,
                             rose_map, trivial_cover)
from homcover.words import FreeAut, identity_aut, parse_word
from test_words import automorphisms


def chain_vector(path, m):
    v = [0] * m
    for x in path:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def test_rose_examples(partial_conj):
    R = rose(2)
    assert (R.num_vertices, R.num_edges, R.euler_rank) == (1, 2, 2)
    assert rose_map(identity_aut(2)) == identity_map(R)
    assert rose_map(partial_conj).edge_images[1] == (-1, 2, 1)


def test_abelian_cover_examples():
    C = abelian_cover(rose(2), np.eye(2, dtype=object), (2, 2))
    assert (C.total.num_vertices, C.total.num_edges, C.total.euler_rank) == (4, 8, 5)
    T = abelian_cover(rose(2), np.zeros((0, 2), dtype=object), ())
    assert (T.total.num_vertices, T.total.num_edges) == (1, 2)
    Z3 = abelian_cover(rose(1), [[1]], (3,))
    assert Z3.total.num_vertices == 3 and Z3.total.euler_rank == 1
    assert sorted(Z3.total.edges) == sorted(cycle_graph(3).edges)


def test_mod_p_examples():
    C2 = mod_p_cover(rose(2), 2)
    assert (C2.total.num_vertices, C2.total.num_edges, C2.total.euler_rank) == (4, 8, 5)
    C3 = mod_p_cover(rose(2), 3)
    assert (C3.total.num_vertices, C3.total.num_edges, C3.total.euler_rank) == (9, 18, 10)
    with pytest.raises(ValueError):
        mod_p_cover(rose(2), 1)


def test_budget_is_loud():
    with pytest.raises(BudgetError):
        mod_p_cover(rose(3), 5, edge_cap=100)


def test_lift_examples(partial_conj):
    C = mod_p_cover(rose(2), 2)
    ident = lift_map(C, identity_map(rose(2)))
    assert ident == identity_map(C.total)
    assert lift_map(C, rose_map(partial_conj)) is not None
    swap = rose_map(FreeAut(2, ((2,), (1,))))
    kill_a = abelian_cover(rose(2), [[0, 1]], (2,))
    assert lift_map(kill_a, swap) is None


def test_basis_examples():
    R = rose(2)
    B = homology_basis(R)
    assert B.tree == frozenset() and B.non_tree == (0, 1)
    assert path_class(R, B, parse_word("abAB")) == (0, 0)
    Z3 = abelian_cover(rose(1), [[1]], (3,))
    B3 = homology_basis(Z3.total)
    loop = Z3.lift_path(0, (1, 1, 1))
    assert B3.rank == 1 and abs(path_class(Z3.total, B3, loop)[0]) == 1
    C = mod_p_cover(rose(2), 2)
    Bc = homology_basis(C.total, order="dfs")
    for x in C.fiber(0):
        cls = path_class(C.total, Bc, C.lift_path(x, (1, 1)), x)
        assert sorted(map(abs, cls)) == [0] * 4 + [1]
    # with the shared breadth-first tree the two a-orbits give two distinct nonzero classes
    Bb = homology_basis(C.total)
    classes = {path_class(C.total, Bb, C.lift_path(x, (1, 1)), x) for x in C.fiber(0)}
    assert len(classes) == 2 and all(any(c) for c in classes)


def test_deck_examples():
    assert all((M == np.eye(2, dtype=object)).all() for M in deck_action_on_homology(trivial_cover(rose(2))).values())
    one = mod_p_cover(rose(1), 2)
    mats = list(deck_action_on_homology(one).values())
    assert len(mats) == 2 and all((M == np.eye(1, dtype=object)).all() for M in mats)
    mats = list(deck_action_on_homology(mod_p_cover(rose(2), 2)).values())
    assert len(mats) == 4 and all(M.shape == (5, 5) for M in mats)
    for A, B in itertools.combinations(mats, 2):
        assert (A.dot(B) == B.dot(A)).all()


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_rank_formula(p, n):
    C = mod_p_cover(rose(n), p)
    assert C.total.euler_rank == 1 + len(C.deck_group) * (n - 1)
    assert C.is_regular() and deck_is_abelian(C)


def test_deck_homomorphism():
    for C in (mod_p_cover(rose(2), 2), mod_p_cover(rose(2), 3), mod_p_cover(rose(3), 3)):
        mats = deck_action_on_homology(C)
        b = C.basepoint
        for d1, d2 in itertools.product(C.deck_group, repeat=2):
            key = d1.vertex_perm[d2.vertex_perm[b]]
            assert (mats[key] == mats[d1.key].dot(mats[d2.key])).all()


def _commutes(C, phi0, phi):
    for eps, img in enumerate(phi0.edge_images):
        if C.project_path(img) != phi.edge_images[C.edge_proj[eps]]:
            return False
    return all(C.vertex_proj[phi0.vertex_map[v]] == phi.vertex_map[C.vertex_proj[v]]
               for v in range(C.total.num_vertices))


@settings(max_examples=25)
@given(automorphisms(max_rank=3, max_moves=6), st.sampled_from([2, 3]))
def test_lifts_exist_and_commute(f, p):
    C = mod_p_cover(rose(f.rank), p)
    phi = rose_map(f)
    phi0 = lift_map(C, phi)
    assert phi0 is not None
    assert _commutes(C, phi0, phi)


def test_homology_action_against_chain_transport(partial_conj):
    C = mod_p_cover(rose(2), 2)
    phi0 = lift_map(C, rose_map(partial_conj))
    B = homology_basis(C.total)
    H = homology_action(phi0, B)
    m = C.total.num_edges
    Z = np.array([chain_vector(B.basis_cycle(i), m) for i in range(B.rank)], dtype=object).T
    Cm = np.zeros((m, m), dtype=object)
    for e, path in enumerate(phi0.edge_images):
        Cm[:, e] = chain_vector(path, m)
    assert H.shape == (5, 5)
    assert (Cm.dot(Z) == Z.dot(H)).all()
    assert (chain_action(phi0) == Cm).all()


@settings(max_examples=15)
@given(automorphisms(max_rank=2, max_moves=6))
def test_homology_action_functorial(f):
    C = mod_p_cover(rose(f.rank), 2)
    phi0 = lift_map(C, rose_map(f))
    H = homology_action(phi0)
    imgs = tuple(phi0.image_path(p) for p in phi0.edge_images)
    sq = GraphMap(C.total, C.total, tuple(phi0.vertex_map[v] for v in phi0.vertex_map), imgs)
    assert (homology_action(sq) == H.dot(H)).all()


def test_tower_roundtrip(partial_conj):
    C1 = mod_p_cover(rose(2), 2)
    C2 = compose_covers(mod_p_cover(C1.total, 2), C1)
    assert C2.total.num_edges == 8 * 2 ** 5
    again = cover_from_stages(rose(2), C2.stages)
    assert again.total == C2.total
    levels, lifted = lift_through_tower(rose_map(partial_conj), [{"p": 2}, {"p": 2}])
    assert lifted is not None and lifted.domain == C2.total
    assert cover_to_json(C2)["degree"] == 128


def test_graphmap_validates_paths():
    with pytest.raises(ValueError):
        GraphMap(cycle_graph(2), cycle_graph(2), (0, 1), ((1,), (1,)))
    assert letter_edge(-3) == 2
    with pytest.raises(ValueError):
        homology_basis(Graph(2, ((0, 0),)))
