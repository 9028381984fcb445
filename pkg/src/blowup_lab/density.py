"""Exact densities: induced counts, strong-homomorphism densities in weighted
graphs, partially labeled densities, and quantum (linear-combination) graphs.

All results are fractions.Fraction values; no floating point enters any
computation in this module.

A strong homomorphism from h to g preserves both adjacency and non-adjacency
of distinct vertices.  With a probability measure mu on V(g), the strong
homomorphism density is the probability that a mu-i.i.d. map from V(h) is a
strong homomorphism; with k labeled vertices pinned by an assignment phi the
labeled density is the same probability over the unlabeled vertices only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import PreconditionError
from .graphs import Graph, VertexMap, automorphisms, canonical_form


@dataclass(frozen=True)
class Measure:
    """Strictly positive rational masses summing to exactly 1."""

    masses: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "masses", tuple(Fraction(m) for m in self.masses))
        for v, m in enumerate(self.masses):
            if m <= 0:
                raise PreconditionError(f"mass of vertex {v} must be positive")
        if self.masses and sum(self.masses) != 1:
            raise PreconditionError("masses must sum to exactly 1")

    @staticmethod
    def uniform(order: int) -> "Measure":
        if order < 1:
            raise PreconditionError("uniform measure needs at least one vertex")
        return Measure((Fraction(1, order),) * order)

    @property
    def order(self) -> int:
        return len(self.masses)

    def is_uniform(self) -> bool:
        return len(set(self.masses)) <= 1


@dataclass(frozen=True)
class WeightedGraph:
    graph: Graph
    measure: Measure

    def __post_init__(self) -> None:
        if self.measure.order != self.graph.order:
            raise PreconditionError("measure order must match the graph order")

    @staticmethod
    def uniform(graph: Graph) -> "WeightedGraph":
        return WeightedGraph(graph, Measure.uniform(graph.order))


@dataclass(frozen=True)
class PartiallyLabeledGraph:
    """A graph with labels 1..k placed on distinct vertices; labels[i] is the
    vertex carrying label i+1."""

    graph: Graph
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise PreconditionError("labels must sit on distinct vertices")
        for v in self.labels:
            if not 0 <= v < self.graph.order:
                raise PreconditionError(f"labeled vertex {v} outside range")

    @property
    def k(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class QuantumGraph:
    """A formal rational linear combination of partially labeled graphs, all
    carrying the same number of labels."""

    terms: tuple[tuple[Fraction, PartiallyLabeledGraph], ...]

    def __post_init__(self) -> None:
        ks = {t.k for _, t in self.terms}
        if len(ks) > 1:
            raise PreconditionError("all terms must carry the same number of labels")
        object.__setattr__(
            self, "terms", tuple((Fraction(c), t) for c, t in self.terms)
        )

    @property
    def k(self) -> Optional[int]:
        for _, t in self.terms:
            return t.k
        return None


def _placement_order(h: Graph, fixed: frozenset[int]) -> list[int]:
    """Most-constrained-first order over the non-fixed vertices of h
    (descending degree, then adjacency to already-ordered vertices); the
    order changes pruning speed only, never the result."""
    remaining = [v for v in range(h.order) if v not in fixed]
    placed = set(fixed)
    order: list[int] = []
    while remaining:
        best = max(
            remaining,
            key=lambda v: (
                h.degree(v),
                sum(1 for w in placed if h.adjacent(v, w)),
                -v,
            ),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def _hom_fold(
    h: Graph,
    g: Graph,
    weights: Optional[Sequence[Fraction]],
    fixed: Optional[dict[int, int]] = None,
    injective: bool = False,
) -> Fraction | int:
    """Backtracking core shared by every homomorphism sum.

    Enumerates strong homomorphisms from h into g extending `fixed`, pruning
    with per-vertex candidate bitmasks.  With weights it returns the exact
    sum over homomorphisms of the product of target weights at the non-fixed
    vertices; with weights=None it returns the plain count.  With
    injective=True only injective maps (embeddings) are counted.
    """
    fixed = fixed or {}
    items = list(fixed.items())
    for (u, x), (v, y) in itertools.combinations(items, 2):
        if h.adjacent(u, v) != g.adjacent(x, y):
            return Fraction(0) if weights is not None else 0
    if injective and len(set(fixed.values())) != len(fixed):
        return Fraction(0) if weights is not None else 0
    order = _placement_order(h, frozenset(fixed))
    if not order:
        return Fraction(1) if weights is not None else 1
    n_g = g.order
    if n_g == 0:
        return Fraction(0) if weights is not None else 0
    full = (1 << n_g) - 1
    grows = g.rows
    gnon = [(~r) & full for r in grows]
    init = full
    if injective:
        for x in fixed.values():
            init &= ~(1 << x)
    masks = []
    for v in order:
        m = init
        for u, x in fixed.items():
            m &= grows[x] if h.adjacent(u, v) else gnon[x]
        masks.append(m)
    hadj = [
        [h.adjacent(order[i], order[j]) for j in range(len(order))]
        for i in range(len(order))
    ]
    depth = len(order)
    counting = weights is None
    total: Fraction | int = 0 if counting else Fraction(0)

    def rec(i: int, acc: Fraction, tail: list[int]) -> None:
        nonlocal total
        avail = tail[0]
        last = i + 1 == depth
        row = hadj[i]
        while avail:
            low = avail & -avail
            avail ^= low
            x = low.bit_length() - 1
            if last:
                total += 1 if counting else acc * weights[x]
                continue
            new_tail = []
            dead = False
            forbid = ~low if injective else -1
            for off in range(1, len(tail)):
                m = tail[off] & (grows[x] if row[i + off] else gnon[x]) & forbid
                if not m:
                    dead = True
                    break
                new_tail.append(m)
            if not dead:
                rec(i + 1, acc if counting else acc * weights[x], new_tail)

    if all(masks):
        rec(0, Fraction(1), masks)
    return total


def strong_hom_count(h: Graph, g: Graph, fixed: Optional[dict[int, int]] = None) -> int:
    """Number of strong homomorphisms from h into g extending `fixed`."""
    return _hom_fold(h, g, None, fixed)


def strong_hom_density(h: Graph, gw: WeightedGraph) -> Fraction:
    """Probability that a map V(h) -> V(gw) drawn i.i.d. from the measure is a
    strong homomorphism.  With the uniform measure this is the count divided
    by order**|V(h)|."""
    if gw.measure.is_uniform() and gw.graph.order > 0:
        count = strong_hom_count(h, gw.graph)
        return Fraction(count, gw.graph.order ** h.order)
    return _hom_fold(h, gw.graph, gw.measure.masses)


def polynomial_eval(h: Graph, g: Graph, weights: Sequence[Fraction]) -> Fraction:
    """The homomorphism-sum polynomial: sum over strong homomorphisms of the
    product of arbitrary nonnegative vertex weights (not required to sum
    to 1).  As a function of the weights this is a multivariate polynomial;
    on the probability simplex it equals strong_hom_density."""
    if len(weights) != g.order:
        raise PreconditionError("one weight per target vertex required")
    ws = tuple(Fraction(w) for w in weights)
    for v, w in enumerate(ws):
        if w < 0:
            raise PreconditionError(f"weight of vertex {v} must be nonnegative")
    return _hom_fold(h, g, ws)


def labeled_density(
    f: PartiallyLabeledGraph, phi: Sequence[int], gw: WeightedGraph
) -> Fraction:
    """Probability that an i.i.d. extension of the pinned assignment (label
    i+1 goes to phi[i]) is a strong homomorphism.  The pinned vertices
    contribute no mass factor; an assignment violating adjacency already on
    the labeled vertices gives 0."""
    if len(phi) != f.k:
        raise PreconditionError("phi must assign an image to every label")
    for x in phi:
        if not 0 <= x < gw.graph.order:
            raise PreconditionError(f"label image {x} outside the target range")
    fixed = {f.labels[i]: phi[i] for i in range(f.k)}
    if gw.measure.is_uniform() and gw.graph.order > 0:
        count = strong_hom_count(f.graph, gw.graph, fixed)
        free = f.graph.order - f.k
        return Fraction(count, gw.graph.order ** free)
    return _hom_fold(f.graph, gw.graph, gw.measure.masses, fixed)


def quantum_density(
    q: QuantumGraph, phi: Sequence[int], gw: WeightedGraph
) -> Fraction:
    """Linear extension of labeled_density; the empty combination gives 0."""
    total = Fraction(0)
    for coeff, term in q.terms:
        total += coeff * labeled_density(term, phi, gw)
    return total


def boundary(h: Graph) -> QuantumGraph:
    """Sum over vertices of h of the copy of h with label 1 on that vertex.
    Its density at an assignment 1 -> v0 is the partial derivative of
    strong_hom_density with respect to the mass of v0 (as a polynomial in
    the masses)."""
    terms = tuple(
        (Fraction(1), PartiallyLabeledGraph(h, (u,))) for u in range(h.order)
    )
    return QuantumGraph(terms)


def count_induced(h: Graph, g: Graph) -> int:
    """Number of |V(h)|-subsets of V(g) inducing a copy of h; 0 when h has
    more vertices than g.  Small targets go subset by subset against the
    canonical form of h; larger targets count embeddings and divide by the
    automorphism count.  Both paths are exact."""
    if h.order > g.order:
        return 0
    if h.order == 0:
        return 1
    if g.order <= 10:
        return _count_induced_subsets(h, g)
    return _count_induced_embeddings(h, g)


def _count_induced_subsets(h: Graph, g: Graph) -> int:
    canon = canonical_form(h)
    target_edges = h.edge_count()
    count = 0
    for subset in itertools.combinations(range(g.order), h.order):
        edges = 0
        for a, u in enumerate(subset):
            r = g.rows[u]
            for v in subset[a + 1 :]:
                edges += (r >> v) & 1
        if edges != target_edges:
            continue
        if canonical_form(g.induced(subset)) == canon:
            count += 1
    return count


def _count_induced_embeddings(h: Graph, g: Graph) -> int:
    embeddings = _hom_fold(h, g, None, injective=True)
    return embeddings // len(automorphisms(h))


def induced_density(h: Graph, g: Graph) -> Fraction:
    """count_induced over the number of |V(h)|-subsets of V(g)."""
    if h.order > g.order:
        raise PreconditionError("pattern has more vertices than the target")
    if h.order == 0:
        return Fraction(1)
    return Fraction(count_induced(h, g), comb(g.order, h.order))
