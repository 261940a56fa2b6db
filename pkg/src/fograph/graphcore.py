"""Finite simple graphs stored as adjacency bitsets, plus embeddings and isomorphism."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """Simple undirected graph on ``0..n-1``.

    Row ``i`` of the adjacency matrix is an int whose bit ``j`` is set when
    ``i`` and ``j`` are adjacent. Instances are treated as immutable.
    """

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.rows = tuple(rows) if rows is not None else (0,) * n
        if len(self.rows) != n:
            raise ValueError("row count does not match vertex count")
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << i) for i in range(n)])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def adjacent(self, u: int, v: int) -> bool:
        return (self.rows[u] >> v) & 1 == 1

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def edges_within(self, mask: int) -> int:
        return sum((self.rows[v] & mask).bit_count() for v in iter_bits(mask)) // 2

    def edges_between(self, a: int, b: int) -> int:
        """Edges with one end in ``a`` and the other in ``b`` (disjoint masks)."""
        return sum((self.rows[v] & b).bit_count() for v in iter_bits(a))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.rows))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


def induced(g: Graph, vs: Sequence[int]) -> Graph:
    """Induced subgraph with ``vs[i]`` relabelled to ``i``."""
    vs = list(vs)
    if len(set(vs)) != len(vs):
        raise ValueError("duplicate vertex in induced subgraph request")
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    rows = []
    for v in vs:
        row = 0
        for j, w in enumerate(vs):
            if g.adjacent(v, w):
                row |= 1 << j
        rows.append(row)
    return Graph(len(vs), rows)


def count_edges_vertices(g: Graph) -> tuple[int, int]:
    return g.edge_count(), g.n


def degree_sequence(g: Graph) -> list[int]:
    return sorted(g.degree(v) for v in range(g.n))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False
    if degree_sequence(g) != degree_sequence(h):
        return False
    return find_isomorphism(g, h) is not None


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """Backtracking search; returns ``m`` with ``m[v]`` the image of ``v``."""
    if g.n != h.n:
        return None
    n = g.n
    order = sorted(range(n), key=lambda v: -g.degree(v))
    mapping = [-1] * n
    used = 0

    def extend(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        v = order[k]
        dv = g.degree(v)
        for w in range(n):
            if (used >> w) & 1 or h.degree(w) != dv:
                continue
            if all(g.adjacent(v, order[i]) == h.adjacent(w, mapping[order[i]]) for i in range(k)):
                mapping[v] = w
                used |= 1 << w
                if extend(k + 1):
                    return True
                used &= ~(1 << w)
        mapping[v] = -1
        return False

    return mapping if extend(0) else None


@dataclass(frozen=True)
class PatternPair:
    """Pattern graph ``pattern`` over the subgraph induced by ``roots``."""

    pattern: Graph
    roots: tuple

    def __init__(self, pattern: Graph, roots: Sequence[int] = ()):
        roots = tuple(roots)
        if len(set(roots)) != len(roots):
            raise ValueError("roots must be distinct")
        for r in roots:
            if not 0 <= r < pattern.n:
                raise ValueError(f"root {r} out of range")
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "roots", roots)

    @property
    def extension(self) -> tuple:
        """Non-root vertices in increasing order."""
        rs = set(self.roots)
        return tuple(v for v in range(self.pattern.n) if v not in rs)

    @property
    def root_mask(self) -> int:
        return bits_of(self.roots)

    def base(self) -> Graph:
        return induced(self.pattern, self.roots)


def find_rooted_embedding(
    host: Graph,
    anchors: Sequence[int],
    pp: PatternPair,
    induced_flag: bool,
    forbidden: int = 0,
) -> list[int] | None:
    """Place the non-root pattern vertices on distinct unused host vertices.

    ``anchors[i]`` is the image of ``pp.roots[i]``. With ``induced_flag`` false a
    pattern edge only has to map to a host edge; with it true non-edges must map
    to non-edges too. Edges among the roots are never checked. Returns host
    vertices for ``pp.extension`` in order, or None.
    """
    anchors = list(anchors)
    if len(anchors) != len(pp.roots):
        raise ValueError(f"expected {len(pp.roots)} anchors, got {len(anchors)}")
    if len(set(anchors)) != len(anchors):
        raise ValueError("anchors must be distinct")
    for a in anchors:
        if not 0 <= a < host.n:
            raise ValueError(f"anchor {a} out of range")
    pat = pp.pattern
    image = dict(zip(pp.roots, anchors))
    todo = list(pp.extension)
    if not todo:
        return []

    # place the most constrained pattern vertices first
    placed = set(pp.roots)
    order = []
    while todo:
        best = max(todo, key=lambda v: (sum(pat.adjacent(v, u) for u in placed), pat.degree(v), -v))
        order.append(best)
        placed.add(best)
        todo.remove(best)

    full = host.all_mask()
    used = bits_of(anchors) | forbidden

    def candidates(v: int) -> int:
        mask = full & ~used
        for u, x in image.items():
            if pat.adjacent(v, u):
                mask &= host.rows[x]
            elif induced_flag:
                mask &= ~host.rows[x]
        return mask

    def extend(k: int) -> bool:
        nonlocal used
        if k == len(order):
            return True
        v = order[k]
        for x in iter_bits(candidates(v)):
            image[v] = x
            used |= 1 << x
            if extend(k + 1):
                return True
            used &= ~(1 << x)
            del image[v]
        return False

    if not extend(0):
        return None
    return [image[v] for v in pp.extension]


def iter_rooted_embeddings(host: Graph, anchors: Sequence[int], pp: PatternPair, induced_flag: bool):
    """All embeddings, in the lexicographic order of the extension images."""
    ext = pp.extension
    pat = pp.pattern
    used0 = bits_of(anchors)
    image = dict(zip(pp.roots, anchors))

    def extend(k: int, used: int):
        if k == len(ext):
            yield [image[v] for v in ext]
            return
        v = ext[k]
        mask = host.all_mask() & ~used
        for u, x in image.items():
            if pat.adjacent(v, u):
                mask &= host.rows[x]
            elif induced_flag:
                mask &= ~host.rows[x]
        for x in iter_bits(mask):
            image[v] = x
            yield from extend(k + 1, used | (1 << x))
            del image[v]

    yield from extend(0, used0)


# ---------------------------------------------------------------- enumeration

def all_labeled_graphs(n: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    for code in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if (code >> i) & 1])


def nonisomorphic_graphs(n: int) -> list[Graph]:
    reps: list[Graph] = []
    for g in all_labeled_graphs(n):
        if not any(is_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps


# ---------------------------------------------------------------- file format

def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in sorted(g.edges())]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
                raise ValueError(f"line {lineno}: expected 'n <count>'")
            n = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise ValueError(f"line {lineno}: edge endpoints must satisfy u < v")
        if v >= n:
            raise ValueError(f"line {lineno}: vertex {v} out of range")
        edges.append((u, v))
    if n is None:
        raise ValueError("missing 'n <count>' header")
    return Graph.from_edges(n, edges)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
