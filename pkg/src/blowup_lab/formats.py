"""Text formats: edge lists, graph6, rational strings, and weight files.

Edge list:
    n 4
    0 1
    2 3
with u < v on each edge line; blank lines and '#' comments are ignored.

graph6: the 6-bit printable encoding of the upper triangle read column by
column (column j top to bottom), offset by 63, with the standard 1-, 4-, or
8-byte order header.  Round-trips are bit-exact.

Weight file: a JSON object mapping every vertex index (as a string) to a
positive rational "p/q"; the masses must sum to exactly 1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .graphs import Graph

GRAPH6_HEADER = ">>graph6<<"


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q" or a bare integer into an exact Fraction."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational {text!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Lowest-terms "p/q"; integers still carry the /1 denominator."""
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def format_float(value: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{float(value):.17g}"


def parse_edge_list(text: str) -> Graph:
    order: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if order is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"line {lineno}: expected header 'n <order>'")
            try:
                order = int(parts[1])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: invalid order {parts[1]!r}") from exc
            if order < 0:
                raise ParseError(f"line {lineno}: negative order")
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: invalid edge {line!r}") from exc
        if not (0 <= u < v < order):
            raise ParseError(f"line {lineno}: edge ({u}, {v}) must satisfy 0 <= u < v < n")
        if (u, v) in seen:
            raise ParseError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    if order is None:
        raise ParseError("missing 'n <order>' header")
    return Graph.from_edges(order, edges)


def write_edge_list(g: Graph) -> str:
    lines = [f"n {g.order}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def _g6_encode_order(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(63 + ((n >> s) & 63)) for s in (30, 24, 18, 12, 6, 0))
    raise ParseError("graph too large for graph6")


def write_graph6(g: Graph) -> str:
    n = g.order
    out = [_g6_encode_order(n)]
    bits: list[int] = []
    for j in range(1, n):
        rj = g.rows[j]
        for i in range(j):
            bits.append((rj >> i) & 1)
    while len(bits) % 6:
        bits.append(0)
    for i in range(0, len(bits), 6):
        value = 0
        for b in bits[i : i + 6]:
            value = (value << 1) | b
        out.append(chr(63 + value))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER) :]
    if not s:
        raise ParseError("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"invalid graph6 character {ch!r}")
    pos = 0
    if s[pos] != "~":
        n = ord(s[pos]) - 63
        pos += 1
    elif len(s) > 1 and s[1] != "~":
        if len(s) < 4:
            raise ParseError("truncated graph6 order")
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
    else:
        if len(s) < 8:
            raise ParseError("truncated graph6 order")
        n = 0
        for ch in s[2:8]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 8
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = s[pos:]
    if len(body) != nchars:
        raise ParseError(
            f"graph6 body length {len(body)} does not match order {n} (expected {nchars})"
        )
    bits: list[int] = []
    for ch in body:
        value = ord(ch) - 63
        for shift in range(5, -1, -1):
            bits.append((value >> shift) & 1)
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits in graph6 body")
    rows = [0] * n
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            idx += 1
    return Graph(n, tuple(rows))


def parse_graph(text: str) -> Graph:
    """Auto-detect: an edge list starts with an 'n <order>' header line, and
    anything else that is a single token is treated as graph6."""
    stripped = [
        line.split("#", 1)[0].strip()
        for line in text.splitlines()
        if line.split("#", 1)[0].strip()
    ]
    if stripped and stripped[0].split()[0] == "n":
        return parse_edge_list(text)
    if len(stripped) == 1 and len(stripped[0].split()) == 1:
        return parse_graph6(stripped[0])
    raise ParseError("input is neither an edge list nor a graph6 string")


def parse_weights(text: str, order: int) -> tuple[Fraction, ...]:
    """Decode a weight file into a mass per vertex (validated against order)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"weight file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("weight file must be a JSON object")
    expected = {str(v) for v in range(order)}
    if set(data) != expected:
        raise ParseError(
            f"weight file keys must be exactly the vertex indices 0..{order - 1}"
        )
    masses = []
    for v in range(order):
        value = data[str(v)]
        if not isinstance(value, str):
            raise ParseError(f"weight of vertex {v} must be a rational string")
        masses.append(parse_fraction(value))
    return tuple(masses)


def write_weights(masses: Sequence[Fraction]) -> str:
    return json.dumps(
        {str(v): format_fraction(m) for v, m in enumerate(masses)}, indent=2
    )
