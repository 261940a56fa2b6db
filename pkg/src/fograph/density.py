"""Exact densities, safe/rigid pair classification, rigid chains and closures.

All arithmetic is done with :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .graphcore import Graph, PatternPair, bits_of, induced, iter_bits

MAX_EXHAUSTIVE = 20


class SizeCapExceeded(ValueError):
    pass


class ClosureBudgetExceeded(RuntimeError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("densities and alphas must be exact; pass a Fraction or 'p/q' string")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _subset_edge_counts(g: Graph, verts: Sequence[int]) -> list[int]:
    """``counts[m]`` = edges inside the subset of ``verts`` selected by bitmask ``m``."""
    k = len(verts)
    local = [0] * k
    for i, v in enumerate(verts):
        for j, w in enumerate(verts):
            if g.adjacent(v, w):
                local[i] |= 1 << j
    counts = [0] * (1 << k)
    for m in range(1, 1 << k):
        low = (m & -m).bit_length() - 1
        rest = m & (m - 1)
        counts[m] = counts[rest] + (local[low] & rest).bit_count()
    return counts


def max_density(h: Graph) -> Fraction:
    """Largest e(Q)/v(Q) over nonempty vertex subsets Q."""
    if h.n == 0:
        raise ValueError("maximal density of the empty graph is undefined")
    if h.n > MAX_EXHAUSTIVE:
        raise SizeCapExceeded(f"exhaustive density limited to {MAX_EXHAUSTIVE} vertices")
    counts = _subset_edge_counts(h, range(h.n))
    return max(Fraction(counts[m], m.bit_count()) for m in range(1, 1 << h.n))


def _extension_subsets(pp: PatternPair):
    """Yield (mask over pattern, new vertex count, new edge count) for every Q ⊇ roots, Q ≠ roots."""
    g = pp.pattern
    ext = pp.extension
    if len(ext) > MAX_EXHAUSTIVE:
        raise SizeCapExceeded(f"exhaustive search limited to {MAX_EXHAUSTIVE} extension vertices")
    root_mask = pp.root_mask
    base_edges = g.edges_within(root_mask)
    for k in range(1, len(ext) + 1):
        for combo in itertools.combinations(ext, k):
            mask = root_mask | bits_of(combo)
            yield mask, k, g.edges_within(mask) - base_edges


def rel_density(pp: PatternPair) -> Fraction:
    """Largest (e(Q)-e(H))/(v(Q)-v(H)) over H ⊂ Q ⊆ G."""
    if not pp.extension:
        raise ValueError("pattern pair has no extension vertices")
    return max(Fraction(e, v) for _, v, e in _extension_subsets(pp))


def is_safe(pp: PatternPair, alpha) -> bool:
    alpha = as_fraction(alpha)
    return rel_density(pp) < 1 / alpha


def _rigid_over(g: Graph, base: int, step: int, threshold: Fraction) -> bool:
    """Is (g[base ∪ step], g[base]) rigid, i.e. every proper intermediate S leaves a
    remainder with edges/vertices above ``threshold``?"""
    total = base | step
    members = list(iter_bits(step))
    k = len(members)
    for r in range(k):
        for keep in itertools.combinations(members, r):
            rest = step & ~bits_of(keep)
            # edges of total not inside s = base ∪ keep all touch rest
            edges = g.edges_within(rest) + g.edges_between(rest, total & ~rest)
            if Fraction(edges, rest.bit_count()) <= threshold:
                return False
    return True


def is_rigid(pp: PatternPair, alpha) -> bool:
    """For every H ⊆ S ⊂ G: (e(G)-e(S))/(v(G)-v(S)) > 1/alpha."""
    alpha = as_fraction(alpha)
    if not pp.extension:
        raise ValueError("pattern pair has no extension vertices")
    if len(pp.extension) > MAX_EXHAUSTIVE:
        raise SizeCapExceeded(f"exhaustive search limited to {MAX_EXHAUSTIVE} extension vertices")
    return _rigid_over(pp.pattern, pp.root_mask, bits_of(pp.extension), 1 / alpha)


def alpha_avoids_small_numerators(alpha, limit: int) -> bool:
    """True when alpha equals no fraction a/b with a ≤ limit."""
    return as_fraction(alpha).numerator > limit


def find_rigid_subextension(pp: PatternPair, alpha) -> PatternPair | None:
    """A smallest S with H ⊂ S ⊆ G and relative density ≥ 1/alpha, or None if safe.

    The result is the pattern restricted to ``roots + chosen`` (roots first, the
    rest in increasing order) with roots ``0..s-1``.
    """
    alpha = as_fraction(alpha)
    m = len(pp.extension)
    if not alpha_avoids_small_numerators(alpha, m):
        raise ValueError(
            f"alpha={format_fraction(alpha)} equals a fraction with numerator at most {m}"
        )
    threshold = 1 / alpha
    for mask, v, e in _extension_subsets(pp):
        if Fraction(e, v) >= threshold:
            chosen = [x for x in pp.extension if (mask >> x) & 1]
            verts = list(pp.roots) + chosen
            return PatternPair(induced(pp.pattern, verts), range(len(pp.roots)))
    return None


# ---------------------------------------------------------------- closures

@dataclass(frozen=True)
class RigidChain:
    base: frozenset
    steps: tuple  # tuple of frozensets
    alpha: Fraction
    t: int

    @property
    def vertices(self) -> frozenset:
        out = set(self.base)
        for s in self.steps:
            out |= s
        return frozenset(out)



def _attached_sets(g: Graph, current: int, t: int) -> Iterator[int]:
    """Vertex sets of size ≤ t outside ``current`` whose every component touches it."""
    seen = set()
    outside = g.all_mask() & ~current

    def grow(step: int, reach: int):
        # ``reach``: vertices adjacent to current ∪ step, outside both
        for v in iter_bits(reach):
            new = step | (1 << v)
            if new in seen:
                continue
            seen.add(new)
            yield new
            if new.bit_count() < t:
                yield from grow(new, (reach | g.rows[v]) & outside & ~new)

    start = 0
    for v in iter_bits(current):
        start |= g.rows[v]
    yield from grow(0, start & outside)


def rigid_steps(g: Graph, current: int, t: int, alpha: Fraction) -> Iterator[int]:
    """Every set D, 1 ≤ |D| ≤ t, disjoint from ``current`` with (current ∪ D, current) rigid."""
    threshold = 1 / alpha
    # a component with c ≤ t vertices and no edge to ``current`` has density at most (c-1)/2
    if Fraction(t - 1, 2) <= threshold:
        candidates = _attached_sets(g, current, t)
    else:
        outside = list(iter_bits(g.all_mask() & ~current))
        candidates = (bits_of(c) for k in range(1, t + 1) for c in itertools.combinations(outside, k))
    min_edges = threshold.numerator // threshold.denominator + 1  # per-vertex lower bound
    total_needed = {}
    for step in candidates:
        span = current | step
        if any((g.rows[v] & span).bit_count() < min_edges for v in iter_bits(step)):
            continue
        k = step.bit_count()
        if k not in total_needed:
            total_needed[k] = threshold * k
        if g.edges_within(step) + g.edges_between(step, current) <= total_needed[k]:
            continue
        if _rigid_over(g, current, step, threshold):
            yield step


def closure(
    g: Graph,
    base: Iterable[int],
    t: int,
    alpha,
    order: Sequence[int] | None = None,
    budget: int | None = None,
) -> RigidChain:
    """Greedy maximal rigid t-chain over ``base``.

    At each step the first rigid step in the candidate order is taken. The
    default order is lexicographic on sorted vertex tuples; ``order`` (a
    permutation of the vertices) re-ranks vertices to produce another chain.
    """
    alpha = as_fraction(alpha)
    if t < 1:
        raise ValueError("step bound t must be at least 1")
    base = list(base)
    if len(set(base)) != len(base):
        raise ValueError("base vertices must be distinct")
    for v in base:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    rank = list(range(g.n)) if order is None else [0] * g.n
    if order is not None:
        if sorted(order) != list(range(g.n)):
            raise ValueError("order must be a permutation of the vertices")
        for pos, v in enumerate(order):
            rank[v] = pos
    budget = g.n if budget is None else budget

    def key(step: int):
        return (sorted(rank[v] for v in iter_bits(step)),)

    current = bits_of(base)
    steps = []
    while True:
        options = list(rigid_steps(g, current, t, alpha))
        if not options:
            break
        step = min(options, key=key)
        current |= step
        steps.append(frozenset(iter_bits(step)))
        if current.bit_count() > budget:
            raise ClosureBudgetExceeded(
                f"closure grew past the vertex budget of {budget} (now {current.bit_count()})"
            )
    return RigidChain(frozenset(base), tuple(steps), alpha, t)


def closure_vertices(g: Graph, base: Iterable[int], t: int, alpha, **kw) -> frozenset:
    return closure(g, base, t, alpha, **kw).vertices


def random_order_closure(g: Graph, base, t, alpha, rng: random.Random) -> frozenset:
    order = list(range(g.n))
    rng.shuffle(order)
    return closure(g, base, t, alpha, order=order).vertices


def dense_extension_hull(g: Graph, base: Iterable[int], r: int, alpha) -> frozenset:
    """Grow Y by any W ⊃ Y with v(W)-v(Y) ≤ r and ρ(W, Y) > 1/alpha until none exists.

    Among qualifying W an inclusion-minimal one (fewest new vertices, then
    lexicographically first) is taken at every step.
    """
    alpha = as_fraction(alpha)
    threshold = 1 / alpha
    current = bits_of(base)
    while True:
        outside = list(iter_bits(g.all_mask() & ~current))
        found = None
        for k in range(1, r + 1):
            for combo in itertools.combinations(outside, k):
                step = bits_of(combo)
                gain = g.edges_within(current | step) - g.edges_within(current)
                if Fraction(gain, k) > threshold:
                    found = step
                    break
            if found:
                break
        if found is None:
            return frozenset(iter_bits(current))
        current |= found


def closure_size_bound(t: int, base_size: int, a1: int, b1: int) -> Fraction:
    """C + tC/eps where eps = a1/b1 - K and K is the largest a/b < a1/b1 with a ≤ t."""
    lower = Fraction(a1, b1)
    best = None
    for a in range(1, t + 1):
        # largest a/b below ``lower`` for this numerator: smallest b with a/b < lower
        b = a * lower.denominator // lower.numerator + 1
        cand = Fraction(a, b)
        if best is None or cand > best:
            best = cand
    eps = lower - best
    return base_size + Fraction(t * base_size) / eps
