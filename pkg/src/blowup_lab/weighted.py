"""Comparing weighted graphs: minimum mass, equivalence up to twins,
edit distance between commensurable weighted graphs, and vertex regularity.

Two weighted graphs are commensurable when they share the same vertex set and
the same measure.  They are equivalent when their twin-free cores are
isomorphic via a map matching total class masses; equivalence is exactly
"distance zero" under the measured edit distance d1.

d1 between two weighted graphs on a common measure is
    sum over ordered vertex pairs (u, v) of mu(u) mu(v) [adjacency differs],
minimized over how the mass of each core class of one graph is shared among
the core classes of the other (a transportation coupling).  The coupling
formulation is exact: splitting every vertex into fractional cells realizes
any coupling as a pair of commensurable representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional

from .errors import PreconditionError
from .density import Measure, WeightedGraph, strong_hom_density
from .graphs import Graph, VertexMap, twin_free_factor

# Cap on total exact-arithmetic work in the lattice sweep: evaluating one
# coupling costs (k1*k2)^2 multiplications, so the number of tables visited
# is _WORK_BUDGET divided by that.
_WORK_BUDGET = 2_000_000


def alpha(measure: Measure) -> Fraction:
    """Smallest vertex mass."""
    if measure.order == 0:
        raise PreconditionError("alpha of an empty measure is undefined")
    return min(measure.masses)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Core isomorphism certifying equivalence: core_iso maps core vertices of
    the first graph to core vertices of the second, and class_masses lists
    (class index, first-graph mass, second-graph mass) with equal masses."""

    core_iso: VertexMap
    class_masses: tuple[tuple[int, Fraction, Fraction], ...]


def _class_masses(gw: WeightedGraph) -> tuple[Graph, list[Fraction]]:
    dec = twin_free_factor(gw.graph)
    masses = [Fraction(0)] * dec.core.order
    for v, c in enumerate(dec.class_of):
        masses[c] += gw.measure.masses[v]
    return dec.core, masses


def are_equivalent(
    gw1: WeightedGraph, gw2: WeightedGraph
) -> Optional[EquivalenceWitness]:
    """Search for a twin-free-core isomorphism matching class masses; None
    when no witness exists.  The graphs need not be commensurable."""
    core1, m1 = _class_masses(gw1)
    core2, m2 = _class_masses(gw2)
    if core1.order != core2.order or core1.edge_count() != core2.edge_count():
        return None
    if sorted(m1) != sorted(m2):
        return None
    n = core1.order
    image: list[int] = [-1] * n

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True
        r1 = core1.rows[i]
        for x in range(n):
            if (used >> x) & 1:
                continue
            if m1[i] != m2[x]:
                continue
            if core1.degree(i) != core2.degree(x):
                continue
            ok = True
            for w in range(i):
                if ((r1 >> w) & 1) != ((core2.rows[x] >> image[w]) & 1):
                    ok = False
                    break
            if ok:
                image[i] = x
                if rec(i + 1, used | (1 << x)):
                    return True
                image[i] = -1
        return False

    if not rec(0, 0):
        return None
    iso = tuple(image)
    matched = tuple((i, m1[i], m2[iso[i]]) for i in range(n))
    return EquivalenceWitness(iso, matched)


def d1_commensurable(gw1: WeightedGraph, gw2: WeightedGraph) -> Fraction:
    """Measured disagreement of two graphs on the same weighted vertex set:
    sum of mu(u) mu(v) over ordered pairs whose adjacency differs."""
    if gw1.graph.order != gw2.graph.order:
        raise PreconditionError("graphs must share a vertex set")
    if gw1.measure != gw2.measure:
        raise PreconditionError("graphs must share a measure")
    masses = gw1.measure.masses
    total = Fraction(0)
    for u in range(gw1.graph.order):
        diff = gw1.graph.rows[u] ^ gw2.graph.rows[u]
        while diff:
            low = diff & -diff
            diff ^= low
            total += masses[u] * masses[low.bit_length() - 1]
    return total


def _coupling_cost_matrix(
    core1: Graph, core2: Graph
) -> list[list[int]]:
    """D[(a, b)][(a2, b2)] = 1 iff adjacency of (a, a2) in core1 differs from
    adjacency of (b, b2) in core2; cells are flattened as a * k2 + b."""
    k1, k2 = core1.order, core2.order
    cells = k1 * k2
    d = [[0] * cells for _ in range(cells)]
    for a in range(k1):
        for b in range(k2):
            p = a * k2 + b
            for a2 in range(k1):
                for b2 in range(k2):
                    if core1.adjacent(a, a2) != core2.adjacent(b, b2):
                        d[p][a2 * k2 + b2] = 1
    return d


def _coupling_value(
    w: list[list[Fraction]], d: list[list[int]], k2: int
) -> Fraction:
    flat = [w[a][b] for a in range(len(w)) for b in range(k2)]
    total = Fraction(0)
    for p, wp in enumerate(flat):
        if not wp:
            continue
        row = d[p]
        for q, wq in enumerate(flat):
            if wq and row[q]:
                total += wp * wq
    return total


def _integer_tables(
    row_sums: list[int], col_sums: list[int], budget: int
) -> Iterator[Optional[list[list[int]]]]:
    """All nonnegative integer matrices with the given margins; yields None
    once instead when the enumeration would exceed the budget.

    The last row is forced by the residual column sums, and a cell for column
    j must leave the later rows (with total capacity `later`) able to absorb
    the rest of the column, so each branch taken leads to a valid table.
    """
    k1, k2 = len(row_sums), len(col_sums)
    if sum(row_sums) != sum(col_sums):
        return
    table = [[0] * k2 for _ in range(k1)]
    produced = 0

    def fill_row(i: int, cols: list[int]) -> Iterator[Optional[list[list[int]]]]:
        nonlocal produced
        if i == k1 - 1:
            table[i] = cols[:]
            produced += 1
            if produced > budget:
                yield None
                return
            yield [row[:] for row in table]
            return
        later = sum(row_sums[i + 1 :])

        def fill_cell(j: int, left: int) -> Iterator[Optional[list[list[int]]]]:
            if j == k2 - 1:
                if max(0, cols[j] - later) <= left <= cols[j]:
                    table[i][j] = left
                    cols[j] -= left
                    yield from fill_row(i + 1, cols)
                    cols[j] += left
                    table[i][j] = 0
                return
            lo = max(0, cols[j] - later, left - sum(cols[j + 1 :]))
            for t in range(lo, min(left, cols[j]) + 1):
                table[i][j] = t
                cols[j] -= t
                yield from fill_cell(j + 1, left - t)
                cols[j] += t
                table[i][j] = 0

        yield from fill_cell(0, row_sums[i])

    if k1 == 0 or k2 == 0:
        if produced < budget and all(c == 0 for c in col_sums):
            yield [row[:] for row in table]
        return
    yield from fill_row(0, list(col_sums))


def _improve_coupling(
    w: list[list[Fraction]], d: list[list[int]], sweeps: int = 200
) -> tuple[list[list[Fraction]], Fraction]:
    """Exact local descent over 2x2 transfer cycles.  Each move shifts mass t
    along +(a,b) +(a2,b2) -(a,b2) -(a2,b); the objective is a quadratic in t
    minimized in closed form over the feasible interval."""
    k1 = len(w)
    k2 = len(w[0]) if k1 else 0
    w = [row[:] for row in w]
    value = _coupling_value(w, d, k2)
    for _ in range(sweeps):
        improved = False
        for a, a2 in itertools.combinations(range(k1), 2):
            for b, b2 in itertools.permutations(range(k2), 2):
                lo = -min(w[a][b], w[a2][b2])
                hi = min(w[a][b2], w[a2][b])
                if lo == hi:
                    continue
                cells = (
                    (a * k2 + b, 1),
                    (a2 * k2 + b2, 1),
                    (a * k2 + b2, -1),
                    (a2 * k2 + b, -1),
                )
                flat = [w[i][j] for i in range(k1) for j in range(k2)]
                quad = Fraction(0)
                lin = Fraction(0)
                for p, sp in cells:
                    dp = d[p]
                    for q, sq in cells:
                        if dp[q]:
                            quad += sp * sq
                    s = Fraction(0)
                    for q, wq in enumerate(flat):
                        if wq and dp[q]:
                            s += wq
                    lin += 2 * sp * s
                candidates = [lo, hi]
                if quad > 0:
                    vertex = Fraction(-lin, 2 * quad)
                    if lo < vertex < hi:
                        candidates.append(vertex)
                best_t = Fraction(0)
                best_delta = Fraction(0)
                for t in candidates:
                    delta = quad * t * t + lin * t
                    if delta < best_delta:
                        best_delta = delta
                        best_t = t
                if best_delta < 0:
                    w[a][b] += best_t
                    w[a2][b2] += best_t
                    w[a][b2] -= best_t
                    w[a2][b] -= best_t
                    value += best_delta
                    improved = True
        if not improved:
            break
    return w, value


def d1_distance(
    gw1: WeightedGraph, gw2: WeightedGraph, grid: int = 12
) -> tuple[Fraction, bool]:
    """Upper bound on the measured edit distance between the equivalence
    classes of the two weighted graphs, and whether it is certified exact.

    The distance is the minimum of the quadratic disagreement form over
    couplings of the two core class-mass vectors.  Couplings on the lattice
    with denominator lcm(grid, mass denominators) are enumerated exhaustively
    (subject to a budget), then refined by exact 2x2-cycle descent from the
    best lattice point and from the product coupling.  The result is
    certified when the lattice enumeration completed and both cores have at
    most 3 vertices, where descent from the lattice optimum reaches the true
    minimum of the quadratic form.
    """
    if grid < 1:
        raise PreconditionError("grid must be at least 1")
    if are_equivalent(gw1, gw2) is not None:
        return Fraction(0), True
    core1, m1 = _class_masses(gw1)
    core2, m2 = _class_masses(gw2)
    k1, k2 = core1.order, core2.order
    if k1 == 0 or k2 == 0:
        raise PreconditionError("d1 needs nonempty graphs")
    d = _coupling_cost_matrix(core1, core2)
    denom = lcm(grid, *(m.denominator for m in m1), *(m.denominator for m in m2))
    row_sums = [int(m * denom) for m in m1]
    col_sums = [int(m * denom) for m in m2]
    best: Optional[Fraction] = None
    best_table: Optional[list[list[Fraction]]] = None
    exhausted = True
    table_budget = max(1, _WORK_BUDGET // (k1 * k2) ** 2)
    for table in _integer_tables(row_sums, col_sums, table_budget):
        if table is None:
            exhausted = False
            break
        w = [[Fraction(t, denom) for t in row] for row in table]
        value = _coupling_value(w, d, k2)
        if best is None or value < best:
            best = value
            best_table = w
    starts: list[list[list[Fraction]]] = []
    if best_table is not None:
        starts.append(best_table)
    starts.append([[ma * mb for mb in m2] for ma in m1])
    for start in starts:
        w, value = _improve_coupling(start, d)
        if best is None or value < best:
            best = value
    assert best is not None
    certified = exhausted and k1 <= 3 and k2 <= 3
    return best, certified


@dataclass(frozen=True)
class RegularityReport:
    """Best single-vertex explanation of v0's neighborhood: witness minimizes
    the measure of the symmetric difference between the neighborhood of v0
    in the graph and the witness's neighborhood in the reference graph."""

    vertex: int
    witness: Optional[int]
    discrepancy: Fraction

    def is_regular(self, epsilon: Fraction) -> bool:
        return self.discrepancy <= epsilon


def regularity(
    v0: int, g: Graph, reference: Graph, measure: Measure
) -> RegularityReport:
    """Scan every candidate vertex of the reference graph and return the one
    (smallest index on ties) whose reference neighborhood is closest in
    measure to v0's neighborhood in g."""
    if g.order != reference.order or measure.order != g.order:
        raise PreconditionError("graphs and measure must share a vertex set")
    if not 0 <= v0 < g.order:
        raise PreconditionError(f"vertex {v0} outside range")
    base = g.rows[v0]
    best_v: Optional[int] = None
    best_disc: Optional[Fraction] = None
    for v in range(reference.order):
        diff = base ^ reference.rows[v]
        disc = Fraction(0)
        while diff:
            low = diff & -diff
            diff ^= low
            disc += measure.masses[low.bit_length() - 1]
        if best_disc is None or disc < best_disc:
            best_disc = disc
            best_v = v
    if best_disc is None:
        return RegularityReport(v0, None, Fraction(0))
    return RegularityReport(v0, best_v, best_disc)


def continuity_gap(
    h: Graph, gw1: WeightedGraph, gw2: WeightedGraph
) -> tuple[Fraction, Fraction]:
    """(actual density difference, guaranteed bound): the strong-homomorphism
    density of h moves by at most |V(h)|^2 times the commensurable d1."""
    gap = abs(strong_hom_density(h, gw1) - strong_hom_density(h, gw2))
    bound = Fraction(h.order**2) * d1_commensurable(gw1, gw2)
    return gap, bound
