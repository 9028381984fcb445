"""Finite loopless undirected graphs with packed-bitmask adjacency.

Vertices are the integers 0..order-1.  Each graph stores one integer per
vertex whose bit v is set iff that vertex is adjacent to v, so neighborhood
comparison, twin detection, and induced-subgraph extraction are single
bitwise operations.

The canonical form used throughout is the relabeling that minimizes the
column-major upper-triangle bit encoding of the adjacency matrix (the same
bit order used by the graph6 format).  This choice is hereditary: deleting
the last vertex of a canonically labeled graph leaves a canonically labeled
graph, which the streaming enumerator relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError

# A vertex map phi is a tuple with phi[v] = image of vertex v.
VertexMap = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..order-1.

    rows[u] is the neighbor bitmask of u; bit v of rows[u] equals bit u of
    rows[v], and no diagonal bit is set.
    """

    order: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise PreconditionError("graph order must be nonnegative")
        if len(self.rows) != self.order:
            raise PreconditionError("number of adjacency rows must equal the order")
        full = (1 << self.order) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise PreconditionError(f"row {u} has a bit outside the vertex range")
            if (row >> u) & 1:
                raise PreconditionError(f"loop at vertex {u}")
        for u in range(self.order):
            for v in range(u + 1, self.order):
                if ((self.rows[u] >> v) & 1) != ((self.rows[v] >> u) & 1):
                    raise PreconditionError(f"asymmetric adjacency at ({u}, {v})")

    @staticmethod
    def from_edges(order: int, edges: Sequence[tuple[int, int]]) -> "Graph":
        if order < 0:
            raise PreconditionError("graph order must be nonnegative")
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise PreconditionError(f"edge ({u}, {v}) outside vertex range")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(order, tuple(rows))

    @staticmethod
    def empty(order: int) -> "Graph":
        return Graph(order, (0,) * order)

    @staticmethod
    def complete(order: int) -> "Graph":
        full = (1 << order) - 1
        return Graph(order, tuple(full ^ (1 << v) for v in range(order)))

    @staticmethod
    def path(order: int) -> "Graph":
        return Graph.from_edges(order, [(i, i + 1) for i in range(order - 1)])

    @staticmethod
    def cycle(order: int) -> "Graph":
        if order < 3:
            raise PreconditionError("a cycle needs at least 3 vertices")
        edges = [(i, i + 1) for i in range(order - 1)] + [(0, order - 1)]
        return Graph.from_edges(order, edges)

    @staticmethod
    def complete_bipartite(a: int, b: int) -> "Graph":
        return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, u: int) -> int:
        return bin(self.rows[u]).count("1")

    def neighbors(self, u: int) -> tuple[int, ...]:
        return tuple(v for v in range(self.order) if (self.rows[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in range(self.order)
            for v in range(u + 1, self.order)
            if (self.rows[u] >> v) & 1
        ]

    def edge_count(self) -> int:
        return sum(self.degree(u) for u in range(self.order)) // 2

    def permute(self, perm: Sequence[int]) -> "Graph":
        """Relabeled copy: vertex v of self becomes vertex perm[v]."""
        if sorted(perm) != list(range(self.order)):
            raise PreconditionError("perm must be a permutation of the vertices")
        rows = [0] * self.order
        for u in range(self.order):
            for v in range(u + 1, self.order):
                if (self.rows[u] >> v) & 1:
                    a, b = perm[u], perm[v]
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
        return Graph(self.order, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on the given distinct vertices, relabeled 0..len-1
        in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise PreconditionError("induced subgraph vertices must be distinct")
        rows = [0] * len(vertices)
        for i, u in enumerate(vertices):
            if not 0 <= u < self.order:
                raise PreconditionError(f"vertex {u} outside range")
            r = self.rows[u]
            for j, v in enumerate(vertices):
                if (r >> v) & 1:
                    rows[i] |= 1 << j
        return Graph(len(vertices), tuple(rows))


@dataclass(frozen=True)
class TwinDecomposition:
    """Factorization g = blow_up(core, multiplicities).

    core is the twin-free quotient with vertex i standing for the i-th twin
    class (classes ordered by their smallest member in g), multiplicities[i]
    is that class's size, and class_of[v] is the class of vertex v; class_of
    is a strong homomorphism from g onto core.
    """

    core: Graph
    multiplicities: tuple[int, ...]
    class_of: tuple[int, ...]


def blow_up(core: Graph, multiplicities: Sequence[int]) -> Graph:
    """Replace vertex v of core by an independent set of multiplicities[v]
    copies; copies of u and v are adjacent iff uv is an edge of core.

    Vertices are laid out in blocks: all copies of core vertex 0 first, then
    copies of vertex 1, and so on.
    """
    if len(multiplicities) != core.order:
        raise PreconditionError("multiplicity vector length must equal the core order")
    for v, m in enumerate(multiplicities):
        if m < 1:
            raise PreconditionError(f"multiplicity of vertex {v} must be at least 1")
    offsets = [0] * core.order
    total = 0
    for v in range(core.order):
        offsets[v] = total
        total += multiplicities[v]
    block = [((1 << multiplicities[v]) - 1) << offsets[v] for v in range(core.order)]
    nbr_block = [0] * core.order
    for v in range(core.order):
        m = 0
        for w in range(core.order):
            if core.adjacent(v, w):
                m |= block[w]
        nbr_block[v] = m
    rows = [0] * total
    for v in range(core.order):
        for a in range(offsets[v], offsets[v] + multiplicities[v]):
            rows[a] = nbr_block[v]
    return Graph(total, tuple(rows))


def twin_free_factor(g: Graph) -> TwinDecomposition:
    """Unique factorization of g as a blow-up of a twin-free graph.

    Twins are vertices with identical neighborhoods (equal rows); grouping
    them gives the classes, and the quotient on class representatives is
    twin-free.
    """
    reps: list[int] = []
    sizes: list[int] = []
    class_of: list[int] = []
    for v in range(g.order):
        for ci, r in enumerate(reps):
            if g.rows[v] == g.rows[r]:
                class_of.append(ci)
                sizes[ci] += 1
                break
        else:
            class_of.append(len(reps))
            reps.append(v)
            sizes.append(1)
    k = len(reps)
    rows = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if g.adjacent(reps[i], reps[j]):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    core = Graph(k, tuple(rows))
    return TwinDecomposition(core, tuple(sizes), tuple(class_of))


def is_twin_free(g: Graph) -> bool:
    return len(set(g.rows)) == g.order


def is_strong_hom(phi: Sequence[int], h: Graph, g: Graph) -> bool:
    """True iff phi maps V(h) into V(g) preserving both adjacency and
    non-adjacency (images of distinct non-adjacent vertices may coincide)."""
    if len(phi) != h.order:
        raise PreconditionError("phi must assign an image to every vertex of h")
    for x in phi:
        if not 0 <= x < g.order:
            raise PreconditionError(f"image {x} outside the target vertex range")
    for u in range(h.order):
        for v in range(u + 1, h.order):
            if h.adjacent(u, v) != g.adjacent(phi[u], phi[v]):
                return False
    return True


def _stable_colors(g: Graph) -> list[int]:
    """Iterated degree refinement; equal colors are a necessary condition for
    vertices to be exchangeable by an automorphism."""
    n = g.order
    colors = [g.degree(v) for v in range(n)]
    while True:
        sigs = []
        for v in range(n):
            nb = tuple(sorted(colors[u] for u in g.neighbors(v)))
            sigs.append((colors[v], nb))
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def automorphisms(g: Graph) -> list[VertexMap]:
    """All adjacency-preserving permutations of V(g), sorted lexicographically.

    Backtracking over vertex images, restricted to vertices with the same
    refined color and checked against all previously placed vertices.
    """
    n = g.order
    if n == 0:
        return [()]
    rows = g.rows
    colors = _stable_colors(g)
    cand = []
    for v in range(n):
        m = 0
        for u in range(n):
            if colors[u] == colors[v]:
                m |= 1 << u
        cand.append(m)
    order = sorted(
        range(n), key=lambda v: (bin(cand[v]).count("1"), -g.degree(v), v)
    )
    image = [-1] * n
    found: list[VertexMap] = []

    def rec(i: int, used: int) -> None:
        if i == n:
            found.append(tuple(image))
            return
        v = order[i]
        rv = rows[v]
        avail = cand[v] & ~used
        while avail:
            low = avail & -avail
            avail ^= low
            x = low.bit_length() - 1
            rx = rows[x]
            ok = True
            for w in order[:i]:
                if ((rv >> w) & 1) != ((rx >> image[w]) & 1):
                    ok = False
                    break
            if ok:
                image[v] = x
                rec(i + 1, used | low)
                image[v] = -1

    rec(0, 0)
    found.sort()
    return found


def _identity_columns(g: Graph) -> list[int]:
    """Upper-triangle bit columns of the adjacency matrix under the identity
    labeling; column j holds bits adj(i, j) for i < j, earliest i most
    significant.  Lists of columns compare lexicographically."""
    cols = []
    for j in range(1, g.order):
        rj = g.rows[j]
        c = 0
        for i in range(j):
            c = (c << 1) | ((rj >> i) & 1)
        cols.append(c)
    return cols


def _interchangeable_reps(rows: Sequence[int], cand: Sequence[int]) -> list[int]:
    """One representative per group of candidates whose transposition is an
    automorphism (identical rows after masking the pair's own bits); placing
    any member of a group yields the same set of completions."""
    reps: list[int] = []
    for u in cand:
        ru = rows[u]
        for v in reps:
            m = ~((1 << u) | (1 << v))
            if ru & m == rows[v] & m:
                break
        else:
            reps.append(u)
    return reps


def canonical_form(g: Graph) -> Graph:
    """The relabeling of g whose column encoding is lexicographically least.

    Branch-and-bound over partial labelings: candidates are deduplicated by
    exchangeable pairs, sorted by the column they would produce, and pruned
    against the best complete labeling found so far.
    """
    n = g.order
    if n <= 1:
        return g
    rows = g.rows
    best = [_identity_columns(g)]

    def walk(chosen: list[int], pcols: list[int], remaining: list[int]) -> None:
        j = len(chosen)
        if j == n:
            if pcols < best[0]:
                best[0] = list(pcols)
            return
        reps = _interchangeable_reps(rows, remaining)
        if j == 0:
            for u in reps:
                walk([u], [], [x for x in remaining if x != u])
            return
        scored = []
        for u in reps:
            ru = rows[u]
            c = 0
            for v in chosen:
                c = (c << 1) | ((ru >> v) & 1)
            scored.append((c, u))
        scored.sort()
        for c, u in scored:
            bb = best[0]
            npc = pcols + [c]
            if npc > bb[:j]:
                if pcols == bb[: j - 1]:
                    break  # candidates are sorted; the rest are worse
                continue
            walk(chosen + [u], npc, [x for x in remaining if x != u])

    walk([], [], list(range(n)))
    return _graph_from_columns(n, best[0])


def is_canonical_form(g: Graph) -> bool:
    """True iff no relabeling of g has a smaller column encoding, i.e.
    canonical_form(g) == g, decided without completing the full search."""
    n = g.order
    if n <= 1:
        return True
    rows = g.rows
    inc = _identity_columns(g)

    def walk(chosen: list[int], remaining: list[int]) -> bool:
        j = len(chosen)
        if j == n:
            return True
        reps = _interchangeable_reps(rows, remaining)
        if j == 0:
            for u in reps:
                if not walk([u], [x for x in remaining if x != u]):
                    return False
            return True
        t = inc[j - 1]
        for u in reps:
            ru = rows[u]
            c = 0
            for v in chosen:
                c = (c << 1) | ((ru >> v) & 1)
            if c < t:
                return False
            if c == t and not walk(chosen + [u], [x for x in remaining if x != u]):
                return False
        return True

    return walk([], list(range(n)))


def _graph_from_columns(n: int, cols: Sequence[int]) -> Graph:
    rows = [0] * n
    for j in range(1, n):
        c = cols[j - 1]
        for i in range(j):
            if (c >> (j - 1 - i)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.order != g2.order or g1.edge_count() != g2.edge_count():
        return False
    return canonical_form(g1) == canonical_form(g2)
