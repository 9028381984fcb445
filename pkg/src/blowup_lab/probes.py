"""Constructive dichotomy for approximate homomorphisms into a twin-free
core, Monte Carlo validation of the two multiset subgraph-probability
bounds, and an empirical closeness probe.

The dichotomy: given the blow-up G of a twin-free core (n*k(v) copies of
each core vertex v) and ANY map psi from V(G) to the core, either psi agrees
with an automorphism-twisted class map outside a small exception set, or two
large vertex sets witness that psi gets adjacency wrong between them.  The
constants: the exception set has size at most gamma*|V(G)|, and each witness
set has size at least gamma*alpha/k_order*|V(G)| where alpha is the smallest
mass of the proportional measure k/||k||_1 and k_order the core order.  The
construction is deterministic; every choice breaks ties by smallest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import PreconditionError
from .blowup_opt import blowup_self_density
from .density import Measure, WeightedGraph, strong_hom_density
from .graphs import Graph, blow_up, is_twin_free
from .weighted import d1_distance

_SHARD = 10_000


@dataclass(frozen=True)
class ExceptionSet:
    """Vertices of G outside which psi is a strong homomorphism; at most a
    gamma fraction of V(G)."""

    vertices: tuple[int, ...]


@dataclass(frozen=True)
class MismatchWitness:
    """Disjoint vertex sets, each of size at least gamma*alpha/k_order of
    |V(G)|, with adjacency in G differing from adjacency of the psi-images
    for every cross pair."""

    y1: tuple[int, ...]
    y2: tuple[int, ...]


DichotomyOutcome = Union[ExceptionSet, MismatchWitness]


def dichotomy(
    core: Graph,
    k: Sequence[int],
    n: int,
    psi: Sequence[int],
    gamma: Fraction,
) -> DichotomyOutcome:
    """Run the constructive dichotomy on psi.

    Majority vote per class elects a candidate relabeling sigma of the core;
    if sigma breaks adjacency somewhere the two majority parts of a breaking
    pair are the witness; otherwise sigma is an automorphism, psi is
    normalized by its inverse, and either every class agrees with the class
    map up to a gamma fraction (exception set) or a heavy stray part plus a
    distinguishing third class yields the witness.
    """
    if not is_twin_free(core):
        raise PreconditionError("core must be twin-free")
    if core.order < 1:
        raise PreconditionError("core must be nonempty")
    if len(k) != core.order or any(kv < 1 for kv in k):
        raise PreconditionError("k must assign a positive multiplicity per core vertex")
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise PreconditionError("gamma must lie in (0, 1]")
    g = blow_up(core, [n * kv for kv in k])
    if len(psi) != g.order:
        raise PreconditionError("psi must assign a core vertex to every vertex of G")
    for x in psi:
        if not 0 <= x < core.order:
            raise PreconditionError(f"psi value {x} outside the core")

    k_order = core.order
    # pi: class map of the blow-up (blocks laid out in core vertex order)
    pi: list[int] = []
    for v in range(k_order):
        pi.extend([v] * (n * k[v]))
    classes = [[x for x in range(g.order) if pi[x] == v] for v in range(k_order)]
    parts = [
        [[x for x in classes[v] if psi[x] == w] for w in range(k_order)]
        for v in range(k_order)
    ]
    sigma = [
        max(range(k_order), key=lambda w: (len(parts[v][w]), -w)) for v in range(k_order)
    ]

    # sigma fails to be a strong homomorphism: the majority parts of the
    # first breaking pair already disagree about adjacency
    for v1 in range(k_order):
        for v2 in range(v1 + 1, k_order):
            if core.adjacent(v1, v2) != core.adjacent(sigma[v1], sigma[v2]):
                y1 = tuple(parts[v1][sigma[v1]])
                y2 = tuple(parts[v2][sigma[v2]])
                return MismatchWitness(y1, y2)

    # a strong homomorphism of a twin-free graph to itself is an
    # automorphism; normalize psi so the elected relabeling is the identity
    inverse = [0] * k_order
    for v, w in enumerate(sigma):
        inverse[w] = v
    normal = [inverse[psi[x]] for x in range(g.order)]
    nparts = [
        [[x for x in classes[v] if normal[x] == w] for w in range(k_order)]
        for v in range(k_order)
    ]

    v0: Optional[int] = None
    for v in range(k_order):
        stray = len(classes[v]) - len(nparts[v][v])
        if Fraction(stray) > gamma * len(classes[v]):
            v0 = v
            break
    if v0 is None:
        bad = tuple(x for x in range(g.order) if normal[x] != pi[x])
        return ExceptionSet(bad)

    # some class sheds more than a gamma fraction: a stray part of weight
    # at least gamma/k_order exists, and twin-freeness supplies a third
    # vertex distinguishing it from the home class
    v1 = None
    for w in range(k_order):
        if w == v0:
            continue
        if Fraction(len(nparts[v0][w]) * k_order) >= gamma * len(classes[v0]):
            v1 = w
            break
    assert v1 is not None
    v2 = None
    for w in range(k_order):
        if core.adjacent(v0, w) != core.adjacent(v1, w):
            v2 = w
            break
    assert v2 is not None
    return MismatchWitness(tuple(nparts[v0][v1]), tuple(nparts[v2][v2]))


@dataclass(frozen=True)
class BoundCheck:
    event_name: str
    empirical: float
    bound: float
    samples: int
    confidence_slack: float

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + self.confidence_slack


def _slack(bound: float, samples: int) -> float:
    b = min(max(bound, 0.0), 1.0)
    return 3.0 * math.sqrt(b * (1.0 - b) / samples) + 1.0 / samples


def _sample_count_vectors(jw: WeightedGraph, r: int, samples: int, seed: int):
    """Multiset draws of r vertices i.i.d. per the measure, as count vectors;
    sharded with per-shard derived seeds so the mean is schedule-independent."""
    n = jw.graph.order
    probs = np.array([float(m) for m in jw.measure.masses])
    probs = probs / probs.sum()
    shard = 0
    remaining = samples
    while remaining > 0:
        m = min(_SHARD, remaining)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shard,)))
        draws = rng.choice(n, size=(m, r), p=probs)
        for row in draws:
            counts = np.bincount(row, minlength=n)
            yield tuple(int(c) for c in counts)
        shard += 1
        remaining -= m


def _contains_biclique(g: Graph, counts: tuple[int, ...], ell: int) -> bool:
    """Does the multiset-induced graph contain K_{ell,ell} as a subgraph?
    Sides must be supported on disjoint, completely joined vertex sets
    (copies of one vertex are never adjacent), each with capacity >= ell."""
    if ell == 0:
        return True
    support = [v for v, c in enumerate(counts) if c]
    if sum(counts) < 2 * ell:
        return False
    smask = 0
    for v in support:
        smask |= 1 << v
    d = len(support)
    for bits in range(1, 1 << d):
        side = [support[i] for i in range(d) if (bits >> i) & 1]
        if sum(counts[v] for v in side) < ell:
            continue
        common = smask
        for v in side:
            common &= g.rows[v]
        cap = 0
        while common:
            low = common & -common
            common ^= low
            cap += counts[low.bit_length() - 1]
        if cap >= ell:
            return True
    return False


def _has_degree(g: Graph, counts: tuple[int, ...], s: int) -> bool:
    """Does some copy in the multiset have at least s neighbors among the
    other copies (neighbors of its vertex, counted with multiplicity)?"""
    for v, c in enumerate(counts):
        if not c:
            continue
        deg = 0
        row = g.rows[v]
        while row:
            low = row & -row
            row ^= low
            deg += counts[low.bit_length() - 1]
        if deg >= s:
            return True
    return False


def _edge_density(jw: WeightedGraph) -> Fraction:
    return strong_hom_density(Graph.complete(2), jw)


def _max_neighborhood_mass(jw: WeightedGraph) -> Fraction:
    best = Fraction(0)
    for v in range(jw.graph.order):
        mass = Fraction(0)
        row = jw.graph.rows[v]
        while row:
            low = row & -row
            row ^= low
            mass += jw.measure.masses[low.bit_length() - 1]
        best = max(best, mass)
    return best


def check_biclique_bound(
    jw: WeightedGraph, r: int, ell: int, samples: int, seed: int
) -> BoundCheck:
    """Empirical frequency of an r-vertex i.i.d. multiset inducing a graph
    that contains K_{ell,ell}, against the proven bound 3^r * delta^ell with
    delta the exact edge density."""
    if not 0 < r <= 12:
        raise PreconditionError("r must be in 1..12 (subgraph detection cost)")
    if samples < 100:
        raise PreconditionError("need at least 100 samples")
    if ell < 0:
        raise PreconditionError("ell must be nonnegative")
    delta = _edge_density(jw)
    bound = 3.0**r * float(delta) ** ell if ell > 0 else 3.0**r
    hits = 0
    cache: dict[tuple[int, ...], bool] = {}
    for counts in _sample_count_vectors(jw, r, samples, seed):
        hit = cache.get(counts)
        if hit is None:
            hit = _contains_biclique(jw.graph, counts, ell)
            cache[counts] = hit
        hits += hit
    return BoundCheck(
        event_name=f"contains K_{{{ell},{ell}}}",
        empirical=hits / samples,
        bound=bound,
        samples=samples,
        confidence_slack=_slack(bound, samples),
    )


def check_star_bound(
    jw: WeightedGraph, r: int, s: int, samples: int, seed: int
) -> BoundCheck:
    """Empirical frequency of an r-vertex i.i.d. multiset containing a copy
    of degree at least s, against the proven bound 3^r * delta * eps^(s-1)
    with eps the exact maximum neighborhood mass."""
    if not 0 < r <= 12:
        raise PreconditionError("r must be in 1..12 (subgraph detection cost)")
    if samples < 100:
        raise PreconditionError("need at least 100 samples")
    if s < 1:
        raise PreconditionError("s must be at least 1")
    delta = _edge_density(jw)
    eps = _max_neighborhood_mass(jw)
    bound = 3.0**r * float(delta) * float(eps) ** (s - 1)
    hits = 0
    cache: dict[tuple[int, ...], bool] = {}
    for counts in _sample_count_vectors(jw, r, samples, seed):
        hit = cache.get(counts)
        if hit is None:
            hit = _has_degree(jw.graph, counts, s)
            cache[counts] = hit
        hits += hit
    return BoundCheck(
        event_name=f"contains a vertex of degree >= {s}",
        empirical=hits / samples,
        bound=bound,
        samples=samples,
        confidence_slack=_slack(bound, samples),
    )


@dataclass(frozen=True)
class ClosenessReport:
    """Density of the h-fold blow-up pattern in gw versus half its density in
    the reference blow-up; when the hypothesis holds, an upper bound on the
    measured distance from gw to the weighted core is attached as an
    empirical illustration (the threshold below which distance is provably
    small is not quantified)."""

    pattern_density: Fraction
    reference_density: Fraction
    threshold: Fraction
    hypothesis_met: bool
    d1_upper: Optional[Fraction]
    d1_certified: Optional[bool]


def closeness_probe(
    core: Graph, k: Sequence[int], h: int, gw: WeightedGraph
) -> ClosenessReport:
    if not is_twin_free(core):
        raise PreconditionError("core must be twin-free")
    if len(k) != core.order or any(kv < 1 for kv in k):
        raise PreconditionError("k must assign a positive multiplicity per core vertex")
    if h < 1:
        raise PreconditionError("h must be at least 1")
    pattern = blow_up(core, [h * kv for kv in k])
    pattern_density = strong_hom_density(pattern, gw)
    total = sum(k)
    mu_k = Measure(tuple(Fraction(kv, total) for kv in k))
    reference = blowup_self_density(core, k, h, mu_k)
    threshold = reference / 2
    met = pattern_density >= threshold
    d1_upper: Optional[Fraction] = None
    d1_certified: Optional[bool] = None
    if met:
        d1_upper, d1_certified = d1_distance(gw, WeightedGraph(core, mu_k))
    return ClosenessReport(
        pattern_density=pattern_density,
        reference_density=reference,
        threshold=threshold,
        hypothesis_met=met,
        d1_upper=d1_upper,
        d1_certified=d1_certified,
    )
