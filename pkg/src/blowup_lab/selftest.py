"""Cross-module consistency checks, runnable from the CLI.

Each check pits two independent computation paths against each other with
exact rational equality: factorization round-trips, the closed form for
blow-up self-densities versus raw enumeration, the averaging identity for
labeled densities, and the boundary-operator derivative identity verified by
polynomial interpolation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .blowup_opt import blowup_self_density
from .density import (
    Measure,
    PartiallyLabeledGraph,
    WeightedGraph,
    boundary,
    labeled_density,
    polynomial_eval,
    quantum_density,
    strong_hom_density,
)
from .graphs import Graph, blow_up, is_isomorphic, is_strong_hom, is_twin_free, twin_free_factor
from .search import enumerate_graphs


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_graph(rng: random.Random, order: int) -> Graph:
    edges = [
        (u, v)
        for u in range(order)
        for v in range(u + 1, order)
        if rng.random() < 0.5
    ]
    return Graph.from_edges(order, edges)


def _random_measure(rng: random.Random, order: int) -> Measure:
    weights = [rng.randint(1, 5) for _ in range(order)]
    total = sum(weights)
    return Measure(tuple(Fraction(w, total) for w in weights))


def _check_round_trip() -> CheckResult:
    checked = 0
    for n in range(1, 6):
        for g in enumerate_graphs(n):
            dec = twin_free_factor(g)
            if not is_twin_free(dec.core):
                return CheckResult("factor-round-trip", False, f"core not twin-free for {g}")
            if sum(dec.multiplicities) != g.order:
                return CheckResult("factor-round-trip", False, f"bad multiplicities for {g}")
            if not is_strong_hom(dec.class_of, g, dec.core):
                return CheckResult("factor-round-trip", False, f"class map not strong hom for {g}")
            if not is_isomorphic(blow_up(dec.core, dec.multiplicities), g):
                return CheckResult("factor-round-trip", False, f"round trip failed for {g}")
            checked += 1
    return CheckResult("factor-round-trip", True, f"{checked} graphs on <= 5 vertices")


def _small_twin_free_cores() -> list[Graph]:
    return [
        Graph.empty(1),
        Graph.complete(2),
        Graph.complete(3),
        Graph.from_edges(3, [(0, 1)]),
        Graph.path(4),
    ]


def _check_closed_form() -> CheckResult:
    checked = 0
    for core in _small_twin_free_cores():
        n = core.order
        k_choices = [(1,) * n]
        if n > 1:
            k_choices.append(tuple(2 if v == 0 else 1 for v in range(n)))
        for k in k_choices:
            for h in (1, 2):
                total = sum(k)
                measures = [Measure(tuple(Fraction(kv, total) for kv in k))]
                if n > 1:
                    weights = [v + 1 for v in range(n)]
                    s = sum(weights)
                    measures.append(Measure(tuple(Fraction(w, s) for w in weights)))
                pattern = blow_up(core, [h * kv for kv in k])
                for mu in measures:
                    closed = blowup_self_density(core, k, h, mu)
                    enumerated = strong_hom_density(pattern, WeightedGraph(core, mu))
                    if closed != enumerated:
                        return CheckResult(
                            "closed-form-vs-enumeration",
                            False,
                            f"core order {n}, k={k}, h={h}: {closed} != {enumerated}",
                        )
                    checked += 1
    return CheckResult("closed-form-vs-enumeration", True, f"{checked} instances")


def _check_averaging() -> CheckResult:
    rng = random.Random(20240801)
    for trial in range(40):
        ng = rng.randint(1, 4)
        nh = rng.randint(1, 3)
        g = _random_graph(rng, ng)
        h = _random_graph(rng, nh)
        k = rng.randint(0, nh)
        labels = tuple(rng.sample(range(nh), k))
        f = PartiallyLabeledGraph(h, labels)
        gw = WeightedGraph(g, _random_measure(rng, ng))
        total = Fraction(0)
        for phi in itertools.product(range(ng), repeat=k):
            mass = Fraction(1)
            for x in phi:
                mass *= gw.measure.masses[x]
            total += mass * labeled_density(f, phi, gw)
        direct = strong_hom_density(h, gw)
        if total != direct:
            return CheckResult(
                "averaging-identity", False, f"trial {trial}: {total} != {direct}"
            )
    return CheckResult("averaging-identity", True, "40 random instances")


def _poly_derivative_at_zero(ys: list[Fraction]) -> Fraction:
    """Exact derivative at 0 of the polynomial interpolating (i, ys[i])."""
    d = len(ys) - 1
    total = Fraction(0)
    for i in range(d + 1):
        denom = Fraction(1)
        for j in range(d + 1):
            if j != i:
                denom *= i - j
        num = Fraction(0)
        for m in range(d + 1):
            if m == i:
                continue
            prod = Fraction(1)
            for j in range(d + 1):
                if j != i and j != m:
                    prod *= -j
            num += prod
        total += ys[i] * num / denom
    return total


def _check_derivative() -> CheckResult:
    rng = random.Random(20240802)
    for trial in range(25):
        ng = rng.randint(1, 4)
        nh = rng.randint(1, 3)
        g = _random_graph(rng, ng)
        h = _random_graph(rng, nh)
        mu = _random_measure(rng, ng)
        v0 = rng.randrange(ng)
        degree = nh
        ys = []
        for t in range(degree + 1):
            weights = list(mu.masses)
            weights[v0] += t
            ys.append(polynomial_eval(h, g, weights))
        interpolated = _poly_derivative_at_zero(ys)
        quantum = quantum_density(boundary(h), (v0,), WeightedGraph(g, mu))
        if interpolated != quantum:
            return CheckResult(
                "derivative-identity",
                False,
                f"trial {trial}: {interpolated} != {quantum}",
            )
    return CheckResult("derivative-identity", True, "25 random instances")


def run_selftest() -> list[CheckResult]:
    return [
        _check_round_trip(),
        _check_closed_form(),
        _check_averaging(),
        _check_derivative(),
    ]
