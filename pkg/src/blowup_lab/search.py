"""Exhaustive extremal search over all graphs of a given order.

Enumeration is by canonical augmentation: every canonically labeled graph on
n-1 vertices is extended by one last vertex over all 2^(n-1) neighborhoods,
and a child is kept iff it is itself canonically labeled.  Because the
canonical labeling minimizes the column-major encoding, deleting the last
vertex of a canonical graph leaves a canonical graph, so every isomorphism
class is produced exactly once and the stream is globally sorted by
encoding.  The stream position (parent index, neighborhood-subset cursor) is
a complete, serializable checkpoint.
"""

from __future__ import annotations

import json
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from math import comb
from typing import Iterator, Optional, Sequence

from .errors import ParseError, PreconditionError
from .blowup_opt import blowup_self_density, optimize_nu
from .density import Measure, induced_density, strong_hom_count
from .formats import format_fraction, parse_fraction, parse_graph6, write_graph6
from .graphs import Graph, blow_up, is_canonical_form, is_isomorphic, is_twin_free, twin_free_factor

MAX_ORDER = 9
_CHECKPOINT_EVERY = 64  # parents between checkpoint writes


@dataclass(frozen=True)
class EnumerationStream:
    order: int
    graphs: Iterator[Graph]

    def __iter__(self) -> Iterator[Graph]:
        return self.graphs


def _extend(parent: Graph, code: int) -> Graph:
    """Attach a new last vertex whose neighborhood among the first p vertices
    is given by the bits of code (vertex i <-> bit p-1-i, so increasing code
    is increasing column encoding)."""
    p = parent.order
    rows = list(parent.rows)
    new_row = 0
    for i in range(p):
        if (code >> (p - 1 - i)) & 1:
            rows[i] |= 1 << p
            new_row |= 1 << i
    rows.append(new_row)
    return Graph(p + 1, tuple(rows))


@lru_cache(maxsize=None)
def _level(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)
    out: list[Graph] = []
    for parent in _level(n - 1):
        for code in range(1 << (n - 1)):
            child = _extend(parent, code)
            if is_canonical_form(child):
                out.append(child)
    return tuple(out)


def enumerate_graphs(n: int) -> EnumerationStream:
    """One canonically labeled representative per isomorphism class on n
    vertices, streamed in increasing encoding order."""
    if not 1 <= n <= MAX_ORDER:
        raise PreconditionError(f"n must be in 1..{MAX_ORDER}")

    def gen() -> Iterator[Graph]:
        if n == 1:
            yield Graph(1, (0,))
            return
        for parent in _level(n - 1):
            for code in range(1 << (n - 1)):
                child = _extend(parent, code)
                if is_canonical_form(child):
                    yield child

    return EnumerationStream(n, gen())


@dataclass(frozen=True)
class ScanResult:
    n: int
    target: Graph
    best_value: Fraction
    witnesses: tuple[Graph, ...]
    blowup_value: Optional[Fraction]
    sup_simplex: float
    classes_scanned: int


def _graph_value(pattern: Graph, g: Graph, n: int, mode: str) -> Fraction:
    if mode == "strong":
        return Fraction(strong_hom_count(pattern, g), n**pattern.order)
    return induced_density(pattern, g)


def _scan_parent_range(
    bounds: tuple[int, int], pattern: Graph, n: int, mode: str
) -> tuple[Optional[Fraction], list[Graph], int]:
    """Evaluate every accepted child of parents[lo:hi]; returns the chunk
    maximum, its witnesses in stream order, and the number of classes."""
    lo, hi = bounds
    parents = _level(n - 1)
    best: Optional[Fraction] = None
    witnesses: list[Graph] = []
    count = 0
    for pi in range(lo, hi):
        parent = parents[pi]
        for code in range(1 << (n - 1)):
            child = _extend(parent, code)
            if not is_canonical_form(child):
                continue
            count += 1
            value = _graph_value(pattern, child, n, mode)
            if best is None or value > best:
                best = value
                witnesses = [child]
            elif value == best:
                witnesses.append(child)
    return best, witnesses, count


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` positive integers summing to total."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _best_blowup_value(
    core: Graph, k: Sequence[int], h: int, n: int, mode: str, pattern: Graph
) -> Optional[Fraction]:
    if n < core.order:
        return None
    best: Optional[Fraction] = None
    for parts in _compositions(n, core.order):
        if mode == "strong":
            measure = Measure(tuple(Fraction(p, n) for p in parts))
            value = blowup_self_density(core, k, h, measure)
        else:
            value = induced_density(pattern, blow_up(core, parts))
        if best is None or value > best:
            best = value
    return best


class _Checkpoint:
    """Resumable scan position plus the running reduction state."""

    def __init__(self, path: str, config: dict) -> None:
        self.path = path
        self.config = config

    def load(self) -> Optional[dict]:
        if not os.path.exists(self.path):
            return None
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"unreadable checkpoint {self.path}: {exc}") from exc
        if data.get("config") != self.config:
            raise PreconditionError(
                "checkpoint was written by a scan with different parameters"
            )
        return data

    def save(
        self,
        parent_index: int,
        subset_cursor: int,
        best: Optional[Fraction],
        witnesses: Sequence[Graph],
        classes: int,
        complete: bool,
    ) -> None:
        data = {
            "config": self.config,
            "parent_index": parent_index,
            "subset_cursor": subset_cursor,
            "best": format_fraction(best) if best is not None else None,
            "witnesses": [write_graph6(w) for w in witnesses],
            "classes_scanned": classes,
            "complete": complete,
        }
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(data, fh)
        os.replace(tmp, self.path)


def extremal_scan(
    core: Graph,
    k: Sequence[int],
    h: int,
    n: int,
    mode: str,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
) -> ScanResult:
    """Stream every isomorphism class on n vertices, tracking the exact
    maximum density of the h-fold blow-up pattern and all witnesses, then
    attach the best blow-up-of-the-core value on n vertices and the simplex
    supremum from the numeric optimizer.

    The reduction (max, witnesses in stream order) is associative over
    parent ranges, so the result is identical for any worker count.
    """
    if mode not in ("strong", "induced"):
        raise PreconditionError("mode must be 'strong' or 'induced'")
    if not is_twin_free(core):
        raise PreconditionError("core must be twin-free")
    if core.order < 1:
        raise PreconditionError("core must be nonempty")
    if len(k) != core.order or any(kv < 1 for kv in k):
        raise PreconditionError("k must assign a positive multiplicity per core vertex")
    if h < 1:
        raise PreconditionError("h must be at least 1")
    if not 1 <= n <= MAX_ORDER:
        raise PreconditionError(f"n must be in 1..{MAX_ORDER}")
    if jobs < 1:
        raise PreconditionError("jobs must be at least 1")
    pattern = blow_up(core, [h * kv for kv in k])
    if mode == "induced" and n < pattern.order:
        raise PreconditionError(
            f"induced mode needs n >= {pattern.order} (the pattern order)"
        )

    best: Optional[Fraction] = None
    witnesses: list[Graph] = []
    classes = 0

    if n == 1:
        g = Graph(1, (0,))
        best = _graph_value(pattern, g, n, mode)
        witnesses = [g]
        classes = 1
    else:
        parents = _level(n - 1)
        start_parent = 0
        start_cursor = 0
        ckpt: Optional[_Checkpoint] = None
        if checkpoint is not None:
            config = {
                "core": write_graph6(core),
                "k": list(k),
                "h": h,
                "n": n,
                "mode": mode,
            }
            ckpt = _Checkpoint(checkpoint, config)
            state = ckpt.load()
            if state is not None and not state.get("complete"):
                start_parent = int(state["parent_index"])
                start_cursor = int(state["subset_cursor"])
                if state["best"] is not None:
                    best = parse_fraction(state["best"])
                witnesses = [parse_graph6(s) for s in state["witnesses"]]
                classes = int(state["classes_scanned"])
            elif state is not None:
                start_parent = len(parents)
                if state["best"] is not None:
                    best = parse_fraction(state["best"])
                witnesses = [parse_graph6(s) for s in state["witnesses"]]
                classes = int(state["classes_scanned"])

        def absorb(
            chunk_best: Optional[Fraction], chunk_wits: list[Graph], chunk_count: int
        ) -> None:
            nonlocal best, witnesses, classes
            classes += chunk_count
            if chunk_best is None:
                return
            if best is None or chunk_best > best:
                best = chunk_best
                witnesses = list(chunk_wits)
            elif chunk_best == best:
                witnesses.extend(chunk_wits)

        if start_cursor:
            # finish the partially scanned parent from the saved cursor
            parent = parents[start_parent]
            pb: Optional[Fraction] = None
            pw: list[Graph] = []
            pc = 0
            for code in range(start_cursor, 1 << (n - 1)):
                child = _extend(parent, code)
                if not is_canonical_form(child):
                    continue
                pc += 1
                value = _graph_value(pattern, child, n, mode)
                if pb is None or value > pb:
                    pb = value
                    pw = [child]
                elif value == pb:
                    pw.append(child)
            absorb(pb, pw, pc)
            start_parent += 1

        todo = range(start_parent, len(parents))
        if todo:
            chunk = max(1, min(_CHECKPOINT_EVERY, (len(todo) + jobs * 8 - 1) // (jobs * 8)))
            bounds = [
                (lo, min(lo + chunk, len(parents)))
                for lo in range(start_parent, len(parents), chunk)
            ]
            work = partial(_scan_parent_range, pattern=pattern, n=n, mode=mode)
            if jobs == 1:
                results = map(work, bounds)
                for (lo, hi), (cb, cw, cc) in zip(bounds, results):
                    absorb(cb, cw, cc)
                    if ckpt is not None:
                        ckpt.save(hi, 0, best, witnesses, classes, hi == len(parents))
            else:
                ctx = multiprocessing.get_context("fork")
                with ctx.Pool(processes=jobs) as pool:
                    for (lo, hi), (cb, cw, cc) in zip(
                        bounds, pool.imap(work, bounds)
                    ):
                        absorb(cb, cw, cc)
                        if ckpt is not None:
                            ckpt.save(
                                hi, 0, best, witnesses, classes, hi == len(parents)
                            )
        elif ckpt is not None:
            ckpt.save(len(parents), 0, best, witnesses, classes, True)

    assert best is not None
    blowup_value = _best_blowup_value(core, k, h, n, mode, pattern)
    sup = optimize_nu(core, k, h, restarts=16, seed=0)
    return ScanResult(
        n=n,
        target=pattern,
        best_value=best,
        witnesses=tuple(witnesses),
        blowup_value=blowup_value,
        sup_simplex=float(sup.value),
        classes_scanned=classes,
    )


@dataclass(frozen=True)
class EvidenceRow:
    n: int
    feasible: bool
    best_value: Optional[Fraction]
    witness_count: int
    all_blowups: Optional[bool]


@dataclass(frozen=True)
class EvidenceReport:
    core: Graph
    k: tuple[int, ...]
    h: int
    rows: tuple[EvidenceRow, ...]


def report_inducibility_evidence(
    core: Graph, k: Sequence[int], h: int, n_range: Sequence[int]
) -> EvidenceReport:
    """For each n, run the induced-mode scan and classify every witness by
    whether its twin-free factor is isomorphic to the core (i.e. whether the
    extremal graphs are blow-ups).  Evidence only; nothing is asserted."""
    if not is_twin_free(core):
        raise PreconditionError("core must be twin-free")
    if len(k) != core.order or any(kv < 1 for kv in k):
        raise PreconditionError("k must assign a positive multiplicity per core vertex")
    if h < 1:
        raise PreconditionError("h must be at least 1")
    pattern_order = h * sum(k)
    rows: list[EvidenceRow] = []
    for n in n_range:
        if not 1 <= n <= MAX_ORDER or n < pattern_order:
            rows.append(EvidenceRow(n, False, None, 0, None))
            continue
        result = extremal_scan(core, k, h, n, "induced")
        all_blowups = all(
            is_isomorphic(twin_free_factor(w).core, core) for w in result.witnesses
        )
        rows.append(
            EvidenceRow(n, True, result.best_value, len(result.witnesses), all_blowups)
        )
    return EvidenceReport(core, tuple(k), h, tuple(rows))
