"""Sentence evaluation on graphs and the named graph properties built on it."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import formula as F
from .density import as_fraction, is_safe, rigid_steps
from .graphcore import (
    Graph,
    PatternPair,
    bits_of,
    find_rooted_embedding,
    induced,
    iter_bits,
    iter_rooted_embeddings,
)


class EvaluationTimeout(RuntimeError):
    pass


class _Deadline:
    __slots__ = ("at", "ticks")

    def __init__(self, seconds: float | None):
        self.at = None if seconds is None else time.monotonic() + seconds
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.at is not None and not self.ticks & 1023 and time.monotonic() > self.at:
            raise EvaluationTimeout("model checking exceeded its time limit")


# ---------------------------------------------------------------- compiled evaluator

_ATOM, _AND, _OR, _EX, _ALL = range(5)


class _Node:
    __slots__ = ("kind", "rel", "a", "b", "children", "var", "body", "free", "uid",
                 "row_guards", "point_guards")


def _necessary(f) -> frozenset:
    """Atoms that hold whenever ``f`` holds (on a nonempty graph)."""
    if isinstance(f, F.Atom):
        return frozenset({f})
    if isinstance(f, F.Conj):
        return frozenset().union(*(_necessary(c) for c in f.children))
    if isinstance(f, F.Disj):
        sets = [_necessary(c) for c in f.children]
        return frozenset.intersection(*sets)
    if isinstance(f, F.Quantifier):
        return frozenset(a for a in _necessary(f.body) if f.var not in (a.left, a.right))
    raise TypeError(f)


def _sufficient(f) -> frozenset:
    """Atoms any one of which makes ``f`` true (on a nonempty graph)."""
    if isinstance(f, F.Atom):
        return frozenset({f})
    if isinstance(f, F.Disj):
        return frozenset().union(*(_sufficient(c) for c in f.children))
    if isinstance(f, F.Conj):
        sets = [_sufficient(c) for c in f.children]
        return frozenset.intersection(*sets)
    if isinstance(f, F.Quantifier):
        return frozenset(a for a in _sufficient(f.body) if f.var not in (a.left, a.right))
    raise TypeError(f)


def _other(atom: F.Atom, v: int):
    if atom.left == v:
        return atom.right
    if atom.right == v:
        return atom.left
    return None


def _push(label: str, v: int, body):
    """Quantify ``v`` over ``body`` as narrowly as possible."""
    if v not in F.free_vars(body):
        return body
    same, other = (F.Conj, F.Disj) if label == F.FORALL else (F.Disj, F.Conj)
    if isinstance(body, same):
        # the quantifier distributes over this connective
        join = F.conj if same is F.Conj else F.disj
        return join(*(_push(label, v, c) for c in body.children))
    if isinstance(body, other):
        dep = [c for c in body.children if v in F.free_vars(c)]
        if len(dep) < len(body.children):
            join = F.conj if other is F.Conj else F.disj
            rest = [c for c in body.children if v not in F.free_vars(c)]
            return join(*rest, _push(label, v, join(*dep)))
    return F.quant(label, v, body)


def miniscope(f):
    """Push quantifiers inwards. Truth is unchanged on every nonempty graph."""
    if isinstance(f, F.Atom):
        return f
    if isinstance(f, F.Conj):
        return F.conj(*(miniscope(c) for c in f.children))
    if isinstance(f, F.Disj):
        return F.disj(*(miniscope(c) for c in f.children))
    if isinstance(f, F.Quantifier):
        return _push(F.label_of(f), f.var, miniscope(f.body))
    raise TypeError(f"cannot evaluate {type(f).__name__}; normalize first")


def _compile(f, counter: list) -> _Node:
    node = _Node()
    node.uid = counter[0]
    counter[0] += 1
    node.free = tuple(sorted(F.free_vars(f)))
    if isinstance(f, F.Atom):
        node.kind, node.rel, node.a, node.b = _ATOM, f.rel, f.left, f.right
        return node
    if isinstance(f, (F.Conj, F.Disj)):
        node.kind = _AND if isinstance(f, F.Conj) else _OR
        # cheap children first; the connectives are commutative
        ordered = sorted(f.children, key=F.quantifier_count)
        node.children = tuple(_compile(c, counter) for c in ordered)
        return node
    if isinstance(f, F.Quantifier):
        v = f.var
        node.var = v
        node.body = _compile(f.body, counter)
        if isinstance(f, F.Exists):
            node.kind = _EX
            pool, row_rel, point_rel = _necessary(f.body), F.ADJ, F.EQ
        else:
            node.kind = _ALL
            pool, row_rel, point_rel = _sufficient(f.body), F.NADJ, F.NEQ
        rows, points = [], []
        for atom in pool:
            w = _other(atom, v)
            if w is None:
                continue
            if atom.rel == row_rel:
                rows.append(w)
            elif atom.rel == point_rel:
                points.append(w)
        node.row_guards = tuple(sorted(rows))
        node.point_guards = tuple(sorted(points))
        return node
    raise TypeError(f"cannot evaluate {type(f).__name__}; normalize first")


class _Evaluator:
    def __init__(self, g: Graph, deadline: _Deadline):
        self.rows = g.rows
        self.full = g.all_mask()
        self.memo: dict = {}
        self.deadline = deadline

    def ev(self, node: _Node, env: list) -> bool:
        kind = node.kind
        if kind == _ATOM:
            x, y = env[node.a], env[node.b]
            rel = node.rel
            if rel == F.ADJ:
                return (self.rows[x] >> y) & 1 == 1
            if rel == F.NADJ:
                return (self.rows[x] >> y) & 1 == 0
            if rel == F.EQ:
                return x == y
            return x != y
        if kind == _AND:
            for c in node.children:
                if not self.ev(c, env):
                    return False
            return True
        if kind == _OR:
            for c in node.children:
                if self.ev(c, env):
                    return True
            return False
        key = (node.uid,) + tuple(env[v] for v in node.free)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        mask = self.full
        for w in node.row_guards:
            mask &= self.rows[env[w]]
        for w in node.point_guards:
            mask &= 1 << env[w]
        var, body = node.var, node.body
        want = kind == _EX
        result = not want
        tick = self.deadline.tick
        while mask:
            low = mask & -mask
            env[var] = low.bit_length() - 1
            mask ^= low
            tick()
            if self.ev(body, env) == want:
                result = want
                break
        self.memo[key] = result
        return result


def satisfies(g: Graph, f: F.Formula, assignment: dict | None = None,
              timeout: float | None = None) -> bool:
    """Evaluate ``f`` with its free variables bound by ``assignment``."""
    assignment = assignment or {}
    missing = F.free_vars(f) - set(assignment)
    if missing:
        raise F.UnboundVariableError(f"no value for free variables {sorted(missing)}")
    for v in assignment.values():
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    if g.n:
        f = miniscope(f)
    if not F.is_renamed_apart(f):
        f = F.rename_apart(f, start=max(F.all_vars(f) | set(assignment), default=-1) + 1)
    size = max(F.all_vars(f) | set(assignment), default=-1) + 1
    env = [0] * size
    for k, v in assignment.items():
        env[k] = v
    root = _compile(f, [0])
    return _Evaluator(g, _Deadline(timeout)).ev(root, env)


def models(g: Graph, f: F.Formula, timeout: float | None = None) -> bool:
    """Standard satisfaction; quantifiers range over all vertices, repeats allowed."""
    F.require_sentence(f)
    return satisfies(g, f, {}, timeout)


# ---------------------------------------------------------------- substitution evaluator
# An independent oracle: variables are replaced by vertex constants as
# quantifiers are unfolded, and atoms are only ever read on constants.

def _to_terms(f):
    if isinstance(f, F.Atom):
        return ("atom", f.rel, ("var", f.left), ("var", f.right))
    if isinstance(f, F.Conj):
        return ("and", tuple(_to_terms(c) for c in f.children))
    if isinstance(f, F.Disj):
        return ("or", tuple(_to_terms(c) for c in f.children))
    if isinstance(f, F.Exists):
        return ("some", f.var, _to_terms(f.body))
    if isinstance(f, F.Forall):
        return ("every", f.var, _to_terms(f.body))
    raise TypeError(f)


def _plug(t, var, vertex):
    tag = t[0]
    if tag == "atom":
        _, rel, a, b = t
        a = ("const", vertex) if a == ("var", var) else a
        b = ("const", vertex) if b == ("var", var) else b
        return ("atom", rel, a, b)
    if tag in ("and", "or"):
        return (tag, tuple(_plug(c, var, vertex) for c in t[1]))
    if t[1] == var:  # shadowed
        return t
    return (tag, t[1], _plug(t[2], var, vertex))


def _truth(g: Graph, t) -> bool:
    tag = t[0]
    if tag == "atom":
        _, rel, a, b = t
        if a[0] != "const" or b[0] != "const":
            raise F.UnboundVariableError("open formula reached an atom")
        x, y = a[1], b[1]
        edge = g.adjacent(x, y)
        return {F.ADJ: edge, F.NADJ: not edge, F.EQ: x == y, F.NEQ: x != y}[rel]
    if tag == "and":
        return all(_truth(g, c) for c in t[1])
    if tag == "or":
        return any(_truth(g, c) for c in t[1])
    values = (_truth(g, _plug(t[2], t[1], x)) for x in range(g.n))
    return any(values) if tag == "some" else all(values)


def models_by_substitution(g: Graph, f: F.Formula) -> bool:
    F.require_sentence(f)
    return _truth(g, _to_terms(F.normalize(f)))


# ---------------------------------------------------------------- neighbourhood statistics

@dataclass(frozen=True)
class NeighborStats:
    common: frozenset
    childless: frozenset
    adjacent_pairs: int


def common_neighbor_stats(g: Graph, x1: int, x2: int) -> NeighborStats:
    if x1 == x2:
        raise ValueError("common neighbour statistics need two distinct vertices")
    common = g.rows[x1] & g.rows[x2]
    childless = [x3 for x3 in iter_bits(common) if not common & g.rows[x3]]
    return NeighborStats(frozenset(iter_bits(common)), frozenset(childless), g.edges_within(common))


@dataclass(frozen=True, order=True)
class TripleType:
    """Positivity of two witness counts; tuple order gives (0,0)<(0,+)<(+,0)<(+,+)."""

    first: bool
    second: bool

    def __str__(self):
        return "(" + ",".join("+" if b else "0" for b in (self.first, self.second)) + ")"


ALL_TRIPLE_TYPES = tuple(TripleType(a, b) for a in (False, True) for b in (False, True))


def triple_type(g: Graph, x1: int, x2: int, x3: int) -> TripleType:
    """first: some common neighbour of x1, x3 other than x2 is not adjacent to x2.
    second: the same for x2, x3 against x1."""
    if len({x1, x2, x3}) != 3:
        raise ValueError("triple type needs three distinct vertices")
    r = g.rows
    first = r[x1] & r[x3] & ~r[x2] & ~(1 << x2)
    second = r[x2] & r[x3] & ~r[x1] & ~(1 << x1)
    return TripleType(first != 0, second != 0)


# ---------------------------------------------------------------- extension properties

def _distinct_tuples(n: int, k: int):
    return itertools.permutations(range(n), k)


def has_extension_property(host: Graph, pp: PatternPair) -> bool:
    """Every distinct anchor tuple extends (pattern edges map to host edges)."""
    if not pp.roots or not pp.extension:
        raise ValueError("extension property needs at least one root and one extension vertex")
    for anchors in _distinct_tuples(host.n, len(pp.roots)):
        if find_rooted_embedding(host, anchors, pp, induced_flag=False) is None:
            return False
    return True


@dataclass(frozen=True)
class TriplePattern:
    """Outer graph W with ``mid`` listing G's vertices (H's first) and ``inner`` = H's."""

    outer: Graph
    mid: tuple
    inner: tuple

    def __init__(self, outer: Graph, mid: Sequence[int], inner: Sequence[int]):
        mid, inner = tuple(mid), tuple(inner)
        if mid[: len(inner)] != inner:
            raise ValueError("inner roots must be a prefix of the mid roots")
        if len(set(mid)) != len(mid) or any(not 0 <= v < outer.n for v in mid):
            raise ValueError("mid roots must be distinct vertices of the outer graph")
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "inner", inner)

    @property
    def outer_only(self) -> tuple:
        ms = set(self.mid)
        return tuple(v for v in range(self.outer.n) if v not in ms)

    def validate(self) -> None:
        s, m = len(self.inner), len(self.mid) - len(self.inner)
        if m < 1 or not self.outer_only:
            raise ValueError("double extension patterns need m ≥ 1 and r ≥ 1")
        w = self.outer
        cs = bits_of(self.outer_only)
        bs = bits_of(self.mid[s:])
        remaining = cs
        while remaining:
            comp = remaining & -remaining
            frontier = comp
            while frontier:
                grow = 0
                for v in iter_bits(frontier):
                    grow |= w.rows[v] & cs
                frontier = grow & ~comp
                comp |= grow
            if not any(w.rows[v] & bs for v in iter_bits(comp)):
                raise ValueError("an outer component has no edge to the extension layer")
            remaining &= ~comp


def _forbidden_copy_exists(host: Graph, w: TriplePattern, ys, xs) -> bool:
    """Distinct z's with z_h off ys ∪ xs and c_h~a_i ⇒ z_h~y_i, c_h~b_j ⇒ z_h~x_j."""
    W = w.outer
    s = len(w.inner)
    a_list, b_list = w.mid[:s], w.mid[s:]
    taken = bits_of(ys) | bits_of(xs)
    cands = []
    for c in w.outer_only:
        mask = host.all_mask() & ~taken
        for a, y in zip(a_list, ys):
            if W.adjacent(c, a):
                mask &= host.rows[y]
        for b, x in zip(b_list, xs):
            if W.adjacent(c, b):
                mask &= host.rows[x]
        cands.append(mask)
    order = sorted(range(len(cands)), key=lambda i: cands[i].bit_count())

    def place(k: int, used: int) -> bool:
        if k == len(order):
            return True
        for z in iter_bits(cands[order[k]] & ~used):
            if place(k + 1, used | (1 << z)):
                return True
        return False

    return place(0, 0)


def has_double_extension_property(host: Graph, w_set: Sequence[TriplePattern]) -> bool:
    if not w_set:
        raise ValueError("empty pattern family")
    for w in w_set:
        w.validate()
    first = w_set[0]
    s = len(first.inner)
    mid_graph = induced(first.outer, first.mid)
    for w in w_set[1:]:
        if len(w.inner) != s or induced(w.outer, w.mid) != mid_graph:
            raise ValueError("all patterns in the family must share G and H")
    m = len(first.mid) - s
    # only root-to-extension edges are demanded of the x's
    ext_edges_only = PatternPair(
        Graph.from_edges(mid_graph.n, [(a, b) for a in range(s) for b in range(s, s + m)
                                       if mid_graph.adjacent(a, b)]),
        range(s),
    )
    for ys in _distinct_tuples(host.n, s):
        found = False
        for xs in iter_rooted_embeddings(host, ys, ext_edges_only, induced_flag=False):
            if not any(_forbidden_copy_exists(host, w, ys, xs) for w in w_set):
                found = True
                break
        if not found:
            return False
    return True


def find_generic_extension(host: Graph, anchors: Sequence[int], pp: PatternPair, t: int, alpha) -> list[int] | None:
    """An exact copy of the pattern over ``anchors`` whose new vertices have no edge
    to any rigid step of at most ``t`` vertices over the extended set."""
    alpha = as_fraction(alpha)
    if len(anchors) != len(pp.roots):
        raise ValueError(f"expected {len(pp.roots)} anchors, got {len(anchors)}")
    if pp.extension and not is_safe(pp, alpha):
        raise ValueError("generic extensions are defined for safe pattern pairs")
    for ys in iter_rooted_embeddings(host, anchors, pp, induced_flag=True):
        if t == 0:
            return ys
        y_mask = bits_of(ys)
        here = bits_of(anchors) | y_mask
        touching = (
            step for step in rigid_steps(host, here, t, alpha)
            if any(host.rows[z] & y_mask for z in iter_bits(step))
        )
        if next(touching, None) is None:
            return ys
    return None


# ---------------------------------------------------------------- case-one predicates

class Case1Properties(NamedTuple):
    triangle: bool
    sparse_extension: bool
    sparse_subgraph: bool


def _k4_through(g: Graph, x1: int, x2: int) -> bool:
    if not g.adjacent(x1, x2):
        return False
    common = g.rows[x1] & g.rows[x2]
    return any(g.rows[v] & common for v in iter_bits(common))


def has_triangle_property(g: Graph) -> bool:
    combos = [(s, x, y, d) for s in (0, 1, 2) for x in ALL_TRIPLE_TYPES
              for y in ALL_TRIPLE_TYPES for d in (True, False)]
    for x1 in range(g.n):
        profiles = []
        for x2 in range(g.n):
            if x2 == x1:
                continue
            st = common_neighbor_stats(g, x1, x2)
            if st.adjacent_pairs > 1 or _k4_through(g, x1, x2):
                continue
            u_types = {triple_type(g, x1, x2, x3) for x3 in st.childless}
            rest_types = {triple_type(g, x1, x2, x3) for x3 in st.common - st.childless}
            profiles.append((g.adjacent(x1, x2), st.adjacent_pairs, len(st.childless), u_types, rest_types))
        for s, x, y, d in combos:
            ok = False
            for adj, npairs, usize, u_types, rest_types in profiles:
                if adj != d:
                    continue
                if npairs == 1 and usize != min(s, 1):
                    continue
                if npairs == 0 and usize != s:
                    continue
                if u_types - {x} or rest_types - {y}:
                    continue
                ok = True
                break
            if not ok:
                return False
    return True


def has_sparse_extension_property(g: Graph, m_cap: int = 3) -> bool:
    """Checked for every m ≤ m_cap."""
    r = g.rows
    full = g.all_mask()
    for m in range(1, min(m_cap, g.n) + 1):
        for v1 in range(g.n):
            others = [v for v in range(g.n) if v != v1]
            for rest in itertools.combinations(others, m - 1):
                vs = (v1,) + rest
                vmask = bits_of(vs)
                near = 0  # vertices sharing a neighbour with some v_i
                for v in vs:
                    for w in iter_bits(r[v]):
                        near |= r[w]
                ok_base = full & ~vmask & ~near
                z1 = ok_base & r[v1]
                for v in rest:
                    z1 &= ~r[v]
                z2 = ok_base
                for v in vs:
                    z2 &= ~r[v]
                if not z1 or not z2:
                    return False
    return True


def has_sparse_subgraph_property(g: Graph) -> bool:
    for x1 in range(g.n):
        if any(_k4_through(g, x1, x2) for x2 in range(g.n) if x2 != x1):
            continue
        if all(common_neighbor_stats(g, x1, x2).adjacent_pairs <= 1 for x2 in range(g.n) if x2 != x1):
            return True
    return False


def case1_properties(g: Graph, m_cap: int = 3) -> Case1Properties:
    return Case1Properties(
        has_triangle_property(g),
        has_sparse_extension_property(g, m_cap),
        has_sparse_subgraph_property(g),
    )
