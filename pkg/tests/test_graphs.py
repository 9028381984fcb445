import itertools
import random

import pytest

from blowup_lab import (
    Graph,
    PreconditionError,
    automorphisms,
    blow_up,
    canonical_form,
    is_canonical_form,
    is_isomorphic,
    is_strong_hom,
    is_twin_free,
    twin_free_factor,
)

from oracles import (
    all_labeled_graphs,
    brute_automorphisms,
    brute_is_isomorphic,
    graph_code,
    random_graph,
    random_twin_free_graph,
)


def test_from_edges_validates() -> None:
    with pytest.raises(PreconditionError):
        Graph.from_edges(-1, [])
    with pytest.raises(PreconditionError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(PreconditionError):
        Graph.from_edges(2, [(1, 1)])


def test_constructors() -> None:
    assert Graph.empty(3).edge_count() == 0
    assert Graph.complete(4).edge_count() == 6
    assert Graph.path(4).edge_count() == 3
    assert Graph.cycle(5).edge_count() == 5
    assert Graph.complete_bipartite(2, 3).edge_count() == 6
    assert Graph.empty(0).order == 0


def test_degree_and_neighbors() -> None:
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert g.degree(0) == 3
    assert g.degree(1) == 1
    assert g.neighbors(0) == (1, 2, 3)
    assert g.neighbors(2) == (0,)


def test_blow_up_of_single_vertex_is_empty() -> None:
    b = blow_up(Graph.empty(1), (3,))
    assert b.order == 3
    assert b.edge_count() == 0


def test_blow_up_edge_is_complete_bipartite() -> None:
    for h in (1, 2, 3):
        b = blow_up(Graph.complete(2), (h, h))
        assert b.order == 2 * h
        assert b.edge_count() == h * h
        assert brute_is_isomorphic(b, Graph.complete_bipartite(h, h))


def test_blow_up_cycle_counts() -> None:
    b = blow_up(Graph.cycle(5), (2, 2, 2, 2, 2))
    assert b.order == 10
    assert b.edge_count() == 20


def test_blow_up_rejects_bad_multiplicity() -> None:
    with pytest.raises(PreconditionError):
        blow_up(Graph.complete(2), (1, 0))
    with pytest.raises(PreconditionError):
        blow_up(Graph.complete(2), (1,))


def test_blow_up_block_layout() -> None:
    b = blow_up(Graph.path(4), (2, 1, 3, 1))
    # copies of consecutive path vertices: block starts 0, 2, 3, 6
    assert b.order == 7
    assert b.adjacent(0, 2) and b.adjacent(1, 2)
    assert not b.adjacent(0, 1)  # same block stays independent
    assert b.adjacent(2, 3) and b.adjacent(2, 5)
    assert b.adjacent(3, 6) and not b.adjacent(0, 6)


def test_twin_free_factor_complete_bipartite() -> None:
    dec = twin_free_factor(Graph.complete_bipartite(3, 3))
    assert dec.core.order == 2
    assert dec.core.adjacent(0, 1)
    assert sorted(dec.multiplicities) == [3, 3]


def test_twin_free_factor_star() -> None:
    star = Graph.from_edges(3, [(0, 1), (0, 2)])
    dec = twin_free_factor(star)
    assert dec.core.order == 2
    assert sorted(dec.multiplicities) == [1, 2]


def test_twin_free_factor_of_twin_free_graph_is_identity() -> None:
    g = Graph.cycle(5)
    dec = twin_free_factor(g)
    assert dec.core == g
    assert dec.multiplicities == (1, 1, 1, 1, 1)
    assert dec.class_of == (0, 1, 2, 3, 4)


def test_twin_free_factor_round_trip_random() -> None:
    rng = random.Random(401)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 7))
        dec = twin_free_factor(g)
        assert is_twin_free(dec.core)
        assert sum(dec.multiplicities) == g.order
        rebuilt = blow_up(dec.core, dec.multiplicities)
        assert brute_is_isomorphic(rebuilt, g)
        # the class map must be a strong homomorphism onto the core
        assert is_strong_hom(dec.class_of, g, dec.core)


def test_is_twin_free() -> None:
    assert is_twin_free(Graph.cycle(5))
    assert not is_twin_free(Graph.complete_bipartite(2, 2))
    assert is_twin_free(Graph.empty(1))
    assert not is_twin_free(Graph.empty(2))


def test_is_strong_hom_examples() -> None:
    p3 = Graph.path(3)
    k2 = Graph.complete(2)
    assert is_strong_hom((0, 1, 0), p3, k2)
    assert not is_strong_hom((0, 1, 1), p3, k2)
    p4 = Graph.path(4)
    # 0 and 3 are non-adjacent in P4 but their images 0,1 are adjacent in K2
    assert not is_strong_hom((0, 1, 0, 1), p4, k2)
    assert is_strong_hom((0, 1, 0, 1), Graph.cycle(4), k2)


def test_is_strong_hom_rejects_bad_map() -> None:
    with pytest.raises(PreconditionError):
        is_strong_hom((0,), Graph.complete(2), Graph.complete(2))
    with pytest.raises(PreconditionError):
        is_strong_hom((0, 5), Graph.complete(2), Graph.complete(2))


def test_strong_hom_from_twin_free_source_is_injective() -> None:
    rng = random.Random(402)
    found = 0
    for _ in range(120):
        h = random_twin_free_graph(rng, rng.randint(2, 4))
        g = random_graph(rng, rng.randint(2, 5))
        for phi in itertools.product(range(g.order), repeat=h.order):
            if is_strong_hom(phi, h, g):
                found += 1
                assert len(set(phi)) == h.order
    assert found > 50  # the property was actually exercised


def test_automorphisms_known_groups() -> None:
    assert len(automorphisms(Graph.complete(3))) == 6
    assert len(automorphisms(Graph.cycle(5))) == 10
    assert len(automorphisms(Graph.cycle(4))) == 8
    star = Graph.from_edges(3, [(0, 1), (0, 2)])
    assert len(automorphisms(star)) == 2
    assert len(automorphisms(Graph.empty(1))) == 1


def test_automorphisms_match_brute_force() -> None:
    rng = random.Random(403)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 6))
        assert list(automorphisms(g)) == sorted(brute_automorphisms(g))


def test_automorphisms_sorted_and_closed() -> None:
    g = Graph.complete_bipartite(2, 3)
    auts = automorphisms(g)
    assert list(auts) == sorted(auts)
    aset = set(auts)
    for a in auts:
        for b in auts:
            assert tuple(a[b[i]] for i in range(g.order)) in aset


def test_permute_and_induced() -> None:
    g = Graph.path(3)
    h = g.permute((2, 0, 1))
    # vertex v of g becomes perm[v] of h
    assert h.adjacent(2, 0)
    assert h.adjacent(0, 1)
    assert not h.adjacent(2, 1)
    sub = Graph.cycle(5).induced((0, 1, 2))
    assert brute_is_isomorphic(sub, Graph.path(3))


def test_canonical_form_is_permutation_invariant() -> None:
    rng = random.Random(404)
    for _ in range(60):
        n = rng.randint(1, 7)
        g = random_graph(rng, n)
        perm = list(range(n))
        rng.shuffle(perm)
        assert canonical_form(g) == canonical_form(g.permute(tuple(perm)))


def test_canonical_form_is_least_code() -> None:
    rng = random.Random(405)
    for _ in range(25):
        n = rng.randint(1, 5)
        g = random_graph(rng, n)
        best = min(
            graph_code(g.permute(p)) for p in itertools.permutations(range(n))
        )
        assert graph_code(canonical_form(g)) == best
        assert is_canonical_form(canonical_form(g))


def test_canonical_forms_separate_classes_on_four_vertices() -> None:
    forms = {canonical_form(g) for g in all_labeled_graphs(4)}
    assert len(forms) == 11
    # agree with brute-force isomorphism partitioning
    reps: list[Graph] = []
    for g in all_labeled_graphs(4):
        if not any(brute_is_isomorphic(g, r) for r in reps):
            reps.append(g)
    assert len(reps) == 11


def test_is_isomorphic() -> None:
    assert is_isomorphic(Graph.cycle(4), Graph.complete_bipartite(2, 2))
    assert not is_isomorphic(
        Graph.path(4), Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    )
    rng = random.Random(406)
    for _ in range(40):
        n = rng.randint(1, 6)
        g = random_graph(rng, n)
        perm = list(range(n))
        rng.shuffle(perm)
        assert is_isomorphic(g, g.permute(tuple(perm)))
        h = random_graph(rng, n)
        assert is_isomorphic(g, h) == brute_is_isomorphic(g, h)
