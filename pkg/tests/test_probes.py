import random
from fractions import Fraction

import pytest

from blowup_lab import (
    ExceptionSet,
    Graph,
    Measure,
    MismatchWitness,
    PreconditionError,
    WeightedGraph,
    blow_up,
    check_biclique_bound,
    check_star_bound,
    closeness_probe,
    dichotomy,
)

EDGE_PLUS_ISOLATED = Graph.from_edges(3, [(0, 1)])


def class_map(k: tuple[int, ...], n: int) -> list[int]:
    pi: list[int] = []
    for v, kv in enumerate(k):
        pi.extend([v] * (n * kv))
    return pi


def validate_outcome(core, k, n, psi, gamma, outcome) -> None:
    """Re-check the dichotomy guarantees from scratch."""
    g = blow_up(core, [n * kv for kv in k])
    total = g.order
    gamma = Fraction(gamma)
    if isinstance(outcome, ExceptionSet):
        x = set(outcome.vertices)
        assert len(x) <= gamma * total
        keep = [v for v in range(total) if v not in x]
        for i, a in enumerate(keep):
            for b in keep[i + 1 :]:
                assert g.adjacent(a, b) == core.adjacent(psi[a], psi[b])
    else:
        assert isinstance(outcome, MismatchWitness)
        y1, y2 = set(outcome.y1), set(outcome.y2)
        assert y1 and y2
        assert not (y1 & y2)
        floor = gamma * Fraction(min(k), core.order) * Fraction(total, sum(k))
        assert len(y1) >= floor
        assert len(y2) >= floor
        for a in outcome.y1:
            for b in outcome.y2:
                assert g.adjacent(a, b) != core.adjacent(psi[a], psi[b])


def test_dichotomy_class_map_has_empty_exception_set() -> None:
    core, k, n = Graph.complete(2), (1, 2), 3
    psi = class_map(k, n)
    out = dichotomy(core, k, n, psi, Fraction(1, 10))
    assert out == ExceptionSet(())


def test_dichotomy_twisted_class_map_has_empty_exception_set() -> None:
    core, k, n = Graph.complete(2), (1, 1), 3
    psi = [1 - v for v in class_map(k, n)]
    out = dichotomy(core, k, n, psi, Fraction(1, 10))
    assert out == ExceptionSet(())


def test_dichotomy_small_perturbation_is_listed_exactly() -> None:
    core, k, n = Graph.complete(2), (1, 1), 10
    psi = class_map(k, n)
    psi[3] = 1 - psi[3]  # one stray out of ten per class, gamma = 1/5
    out = dichotomy(core, k, n, psi, Fraction(1, 5))
    assert out == ExceptionSet((3,))
    validate_outcome(core, k, n, psi, Fraction(1, 5), out)


def test_dichotomy_constant_map_yields_witness() -> None:
    core, k, n = Graph.complete(2), (1, 1), 4
    psi = [0] * 8
    out = dichotomy(core, k, n, psi, Fraction(1, 4))
    assert isinstance(out, MismatchWitness)
    assert set(out.y1) == {0, 1, 2, 3}
    assert set(out.y2) == {4, 5, 6, 7}
    validate_outcome(core, k, n, psi, Fraction(1, 4), out)


def test_dichotomy_heavy_stray_yields_witness_within_a_class() -> None:
    core, k, n = Graph.complete(2), (1, 1), 4
    psi = class_map(k, n)
    psi[0] = 1
    psi[1] = 1  # half of class 0 strays; gamma = 1/4 trips the threshold
    out = dichotomy(core, k, n, psi, Fraction(1, 4))
    assert isinstance(out, MismatchWitness)
    assert set(out.y1) == {0, 1}
    assert set(out.y2) == {2, 3}
    validate_outcome(core, k, n, psi, Fraction(1, 4), out)


def test_dichotomy_is_deterministic() -> None:
    rng = random.Random(901)
    core = Graph.path(4)
    k = (1, 2, 1, 1)
    n = 2
    psi = [rng.randrange(4) for _ in range(n * sum(k))]
    a = dichotomy(core, k, n, psi, Fraction(1, 3))
    b = dichotomy(core, k, n, psi, Fraction(1, 3))
    assert a == b


def test_dichotomy_random_instances_revalidated() -> None:
    rng = random.Random(902)
    cores = [
        Graph.empty(1),
        Graph.complete(2),
        EDGE_PLUS_ISOLATED,
        Graph.complete(3),
        Graph.path(4),
    ]
    for _ in range(150):
        core = rng.choice(cores)
        k = tuple(rng.randint(1, 3) for _ in range(core.order))
        n = rng.randint(1, 4)
        total = n * sum(k)
        gamma = Fraction(rng.randint(1, 6), 6)
        if rng.random() < 0.4:
            psi = class_map(k, n)
            for _ in range(rng.randrange(3)):
                psi[rng.randrange(total)] = rng.randrange(core.order)
        else:
            psi = [rng.randrange(core.order) for _ in range(total)]
        out = dichotomy(core, k, n, psi, gamma)
        validate_outcome(core, k, n, psi, gamma, out)


def test_dichotomy_validates_inputs() -> None:
    k2 = Graph.complete(2)
    with pytest.raises(PreconditionError):
        dichotomy(Graph.complete_bipartite(2, 2), (1, 1, 1, 1), 1, [0] * 4, Fraction(1, 2))
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 1), 1, [0, 0], Fraction(0))
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 1), 1, [0, 0], Fraction(3, 2))
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 0), 1, [0], Fraction(1, 2))
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 1), 0, [], Fraction(1, 2))
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 1), 1, [0], Fraction(1, 2))  # wrong psi length
    with pytest.raises(PreconditionError):
        dichotomy(k2, (1, 1), 1, [0, 5], Fraction(1, 2))  # out of range


def test_biclique_bound_edgeless_graph() -> None:
    jw = WeightedGraph.uniform(Graph.empty(3))
    chk = check_biclique_bound(jw, r=4, ell=1, samples=200, seed=0)
    assert chk.empirical == 0.0
    assert chk.bound == 0.0
    assert chk.passed


def test_biclique_bound_ell_zero_event_is_certain() -> None:
    jw = WeightedGraph.uniform(Graph.complete(2))
    chk = check_biclique_bound(jw, r=2, ell=0, samples=200, seed=0)
    assert chk.empirical == 1.0
    assert chk.bound == 9.0
    assert chk.passed


def test_biclique_bound_single_edge_probability() -> None:
    jw = WeightedGraph.uniform(Graph.complete(2))
    chk = check_biclique_bound(jw, r=2, ell=1, samples=2000, seed=1)
    # event: the two draws hit both endpoints of the edge, probability 1/2
    assert abs(chk.empirical - 0.5) < 0.05
    assert chk.passed


def test_star_bound_single_edge_probability() -> None:
    jw = WeightedGraph.uniform(Graph.complete(2))
    chk = check_star_bound(jw, r=2, s=1, samples=2000, seed=1)
    assert abs(chk.empirical - 0.5) < 0.05
    assert chk.passed


def test_star_bound_on_a_star() -> None:
    hub_and_seven = Graph.from_edges(8, [(0, i) for i in range(1, 8)])
    jw = WeightedGraph.uniform(hub_and_seven)
    chk = check_star_bound(jw, r=5, s=3, samples=2000, seed=2)
    assert chk.passed
    assert 0.0 <= chk.empirical <= 1.0


def test_biclique_bound_on_balanced_bipartite() -> None:
    jw = WeightedGraph.uniform(Graph.complete_bipartite(3, 3))
    chk = check_biclique_bound(jw, r=4, ell=2, samples=2000, seed=3)
    assert chk.passed


def test_bound_checks_are_deterministic() -> None:
    jw = WeightedGraph.uniform(Graph.complete(3))
    a = check_biclique_bound(jw, r=3, ell=1, samples=500, seed=7)
    b = check_biclique_bound(jw, r=3, ell=1, samples=500, seed=7)
    assert a == b
    c = check_star_bound(jw, r=3, s=2, samples=500, seed=7)
    d = check_star_bound(jw, r=3, s=2, samples=500, seed=7)
    assert c == d


def test_bound_checks_validate() -> None:
    jw = WeightedGraph.uniform(Graph.complete(2))
    with pytest.raises(PreconditionError):
        check_biclique_bound(jw, r=0, ell=1, samples=200, seed=0)
    with pytest.raises(PreconditionError):
        check_biclique_bound(jw, r=13, ell=1, samples=200, seed=0)
    with pytest.raises(PreconditionError):
        check_biclique_bound(jw, r=2, ell=-1, samples=200, seed=0)
    with pytest.raises(PreconditionError):
        check_biclique_bound(jw, r=2, ell=1, samples=99, seed=0)
    with pytest.raises(PreconditionError):
        check_star_bound(jw, r=2, s=0, samples=200, seed=0)
    with pytest.raises(PreconditionError):
        check_star_bound(jw, r=2, s=1, samples=99, seed=0)


def test_slack_shrinks_with_samples() -> None:
    jw = WeightedGraph.uniform(Graph.complete(2))
    small = check_biclique_bound(jw, r=2, ell=1, samples=200, seed=0)
    large = check_biclique_bound(jw, r=2, ell=1, samples=5000, seed=0)
    assert large.confidence_slack < small.confidence_slack


def test_closeness_probe_on_the_blowup_itself() -> None:
    gw = WeightedGraph.uniform(Graph.complete_bipartite(2, 2))
    rep = closeness_probe(Graph.complete(2), (1, 1), 1, gw)
    assert rep.pattern_density == Fraction(1, 2)
    assert rep.reference_density == Fraction(1, 2)
    assert rep.threshold == Fraction(1, 4)
    assert rep.hypothesis_met
    assert rep.d1_upper == 0
    assert rep.d1_certified is True


def test_closeness_probe_below_threshold() -> None:
    gw = WeightedGraph.uniform(Graph.empty(2))
    rep = closeness_probe(Graph.complete(2), (1, 1), 1, gw)
    assert rep.pattern_density == 0
    assert not rep.hypothesis_met
    assert rep.d1_upper is None
    assert rep.d1_certified is None


def test_closeness_probe_threshold_is_half_reference() -> None:
    gw = WeightedGraph(
        Graph.complete(3), Measure((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    )
    rep = closeness_probe(Graph.complete(2), (1, 2), 2, gw)
    assert rep.threshold == rep.reference_density / 2
    assert rep.hypothesis_met == (rep.pattern_density >= rep.threshold)


def test_closeness_probe_validates() -> None:
    gw = WeightedGraph.uniform(Graph.complete(2))
    with pytest.raises(PreconditionError):
        closeness_probe(Graph.complete_bipartite(2, 2), (1, 1, 1, 1), 1, gw)
    with pytest.raises(PreconditionError):
        closeness_probe(Graph.complete(2), (1, 1), 0, gw)
    with pytest.raises(PreconditionError):
        closeness_probe(Graph.complete(2), (1, 0), 1, gw)
