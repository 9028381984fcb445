"""Independent brute-force oracles used by the test suite.

Everything here  recomputes library answers the slow, obviously-correct way:
full permutation scans for isomorphism and automorphisms, full map
enumeration for densities, and an orbit-marking sweep over every labeled
graph for isomorphism-class counts.  Nothing imports the library's search or
canonical-form machinery except the Graph container itself.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from blowup_lab import Graph, Measure, WeightedGraph


def all_labeled_graphs(n: int) -> Iterator[Graph]:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (bits >> i) & 1]
        yield Graph.from_edges(n, edges)


def brute_isomorphisms(g1: Graph, g2: Graph) -> list[tuple[int, ...]]:
    """All bijections V(g1) -> V(g2) preserving adjacency both ways."""
    if g1.order != g2.order:
        return []
    out = []
    for perm in itertools.permutations(range(g1.order)):
        if all(
            g1.adjacent(u, v) == g2.adjacent(perm[u], perm[v])
            for u in range(g1.order)
            for v in range(u + 1, g1.order)
        ):
            out.append(perm)
    return out


def brute_is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.order != g2.order or g1.edge_count() != g2.edge_count():
        return False
    return bool(brute_isomorphisms(g1, g2))


def brute_automorphisms(g: Graph) -> list[tuple[int, ...]]:
    return brute_isomorphisms(g, g)


def brute_strong_hom_density(h: Graph, gw: WeightedGraph) -> Fraction:
    """Sum over every one of the |V(g)|^|V(h)| maps."""
    g = gw.graph
    total = Fraction(0)
    for phi in itertools.product(range(g.order), repeat=h.order):
        ok = True
        for u in range(h.order):
            for v in range(u + 1, h.order):
                if h.adjacent(u, v) != g.adjacent(phi[u], phi[v]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            mass = Fraction(1)
            for x in phi:
                mass *= gw.measure.masses[x]
            total += mass
    return total


def brute_count_induced(h: Graph, g: Graph) -> int:
    if h.order > g.order:
        return 0
    if h.order == 0:
        return 1
    count = 0
    for subset in itertools.combinations(range(g.order), h.order):
        if brute_is_isomorphic(g.induced(subset), h):
            count += 1
    return count


def random_graph(rng: random.Random, order: int, p: float = 0.5) -> Graph:
    edges = [
        (u, v)
        for u in range(order)
        for v in range(u + 1, order)
        if rng.random() < p
    ]
    return Graph.from_edges(order, edges)


def random_measure(rng: random.Random, order: int, top: int = 9) -> Measure:
    weights = [rng.randint(1, top) for _ in range(order)]
    total = sum(weights)
    return Measure(tuple(Fraction(w, total) for w in weights))


def random_twin_free_graph(rng: random.Random, order: int) -> Graph:
    """Rejection-sample until the rows are pairwise distinct."""
    while True:
        g = random_graph(rng, order)
        if len(set(g.rows)) == g.order:
            return g


def lagrange_derivative_at_zero(ys: Sequence[Fraction]) -> Fraction:
    """Exact derivative at 0 of the unique degree-(len(ys)-1) polynomial
    through the points (i, ys[i])."""
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


def iso_class_count(n: int) -> int:
    """Number of isomorphism classes of graphs on n vertices, by visiting all
    2^C(n,2) edge codes and marking, for each unvisited code, its whole orbit
    under every vertex permutation.  No table of known counts is consulted.

    A code holds the upper-triangle bits column-major (bit t of pair t in the
    list below).  Applying a vertex permutation permutes bit positions, so
    each permutation becomes two lookup tables (low/high halves of the code).
    """
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    nbits = len(pairs)
    index_of = {p: t for t, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    low_bits = min(nbits, 11)
    high_bits = nbits - low_bits
    lows = np.arange(1 << low_bits, dtype=np.int64)
    highs = np.arange(1 << high_bits, dtype=np.int64)
    lowtabs = np.zeros((len(perms), 1 << low_bits), dtype=np.int64)
    hightabs = np.zeros((len(perms), 1 << high_bits), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for t, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            if a > b:
                a, b = b, a
            dest = index_of[(a, b)]
            if t < low_bits:
                lowtabs[pi] |= ((lows >> t) & 1) << dest
            else:
                hightabs[pi] |= ((highs >> (t - low_bits)) & 1) << dest
    total = 1 << nbits
    visited = bytearray(total)
    lowmask = (1 << low_bits) - 1
    count = 0
    pos = 0
    zero = 0
    while True:
        pos = visited.find(zero, pos)
        if pos < 0:
            break
        orbit = lowtabs[:, pos & lowmask] | hightabs[:, pos >> low_bits]
        for c in set(orbit.tolist()):
            visited[c] = 1
        count += 1
    return count


def graph_code(g: Graph) -> int:
    """Column-major upper-triangle encoding (for stream-order assertions)."""
    code = 0
    for j in range(1, g.order):
        for i in range(j):
            code = (code << 1) | (1 if g.adjacent(i, j) else 0)
    return code


def measure_from_ints(weights: Sequence[int]) -> Measure:
    total = sum(weights)
    return Measure(tuple(Fraction(w, total) for w in weights))


def distinct_measures(rng: random.Random, order: int, count: int) -> list[Measure]:
    out: list[Measure] = []
    seen: set[tuple[Fraction, ...]] = set()
    while len(out) < count:
        m = random_measure(rng, order)
        if m.masses not in seen:
            seen.add(m.masses)
            out.append(m)
    return out


def twin_free_cores_up_to(max_order: int) -> list[Graph]:
    """Every isomorphism class of twin-free graphs on 1..max_order vertices,
    found by brute-force dedup over all labeled graphs (no library search)."""
    out: list[Graph] = []
    for n in range(1, max_order + 1):
        reps: list[Graph] = []
        for g in all_labeled_graphs(n):
            if len(set(g.rows)) != n:
                continue
            if not any(brute_is_isomorphic(g, r) for r in reps):
                reps.append(g)
        out.extend(reps)
    return out


def multiplicities_match(
    core1: Graph,
    k1: Sequence[int],
    core2: Graph,
    k2: Sequence[int],
) -> bool:
    """Is there an isomorphism core1 -> core2 carrying k1 to k2?"""
    for iso in brute_isomorphisms(core1, core2):
        if all(k2[iso[v]] == k1[v] for v in range(core1.order)):
            return True
    return False
