"""Ehrenfeucht games on two graphs, with optional limits on how often Spoiler
switches graphs, and extraction of distinguishing sentences from Spoiler wins.

Chosen vertices are distinct within each graph. Spoiler wins when the map
between the chosen tuples stops being a partial isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import formula as F
from .graphcore import Graph

PLAIN, ATMOST, EXACT = "plain", "atmost", "exact"
SPOILER, DUPLICATOR = "spoiler", "duplicator"
G_SIDE, H_SIDE = "g", "h"


@dataclass(frozen=True)
class GameSpec:
    rounds: int
    mode: str = PLAIN
    k: int | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be positive")
        if self.mode == PLAIN:
            if self.k is not None:
                raise ValueError("plain games take no alternation bound")
        elif self.mode in (ATMOST, EXACT):
            if self.k is None or not 0 <= self.k <= self.rounds - 1:
                raise ValueError(f"alternation bound must lie in 0..{self.rounds - 1}")
        else:
            raise ValueError(f"unknown alternation mode {self.mode!r}")

    @classmethod
    def parse(cls, rounds: int, text: str = PLAIN) -> "GameSpec":
        """Build from ``plain``, ``atmost:k`` or ``exact:k``."""
        if text == PLAIN:
            return cls(rounds)
        mode, sep, k = text.partition(":")
        if not sep or mode not in (ATMOST, EXACT) or not k.isdigit():
            raise ValueError(f"bad alternation mode {text!r}; use plain, atmost:k or exact:k")
        return cls(rounds, mode, int(k))

    def __str__(self):
        return PLAIN if self.mode == PLAIN else f"{self.mode}:{self.k}"


@dataclass
class Move:
    """Spoiler picks ``vertex`` on ``side``; ``replies`` maps each Duplicator
    answer to the continuation (None once the partial isomorphism is broken)."""

    side: str
    vertex: int
    replies: dict = field(default_factory=dict)

    def depth(self) -> int:
        sub = [m.depth() for m in self.replies.values() if m is not None]
        return 1 + max(sub, default=0)


@dataclass
class GameOutcome:
    winner: str
    strategy: Move | None = None


def _extends_iso(g: Graph, h: Graph, gx: Sequence[int], hy: Sequence[int], a: int, b: int) -> bool:
    return all(g.adjacent(a, x) == h.adjacent(b, y) for x, y in zip(gx, hy))


def _is_partial_iso(g: Graph, h: Graph, gx: Sequence[int], hy: Sequence[int]) -> bool:
    return all(
        _extends_iso(g, h, gx[:i], hy[:i], gx[i], hy[i]) for i in range(len(gx))
    )


class _Solver:
    def __init__(self, g: Graph, h: Graph, rounds: int, mode: str, k: int | None):
        self.g, self.h = g, h
        self.rounds = rounds
        self.mode = mode
        self.k = k
        self.memo: dict = {}

    def _finishable(self, used: int, left: int) -> bool:
        # with the isomorphism already broken, can Spoiler still meet the mode?
        if self.mode == EXACT:
            return 0 <= self.k - used <= left
        return True

    def _sides(self, used: int, last, left: int):
        for side in (G_SIDE, H_SIDE):
            step = used + (last is not None and side != last)
            if self.mode != PLAIN and step > self.k:
                continue
            if self.mode == EXACT and self.k - step > left - 1:
                continue
            yield side, step

    def spoiler_wins(self, gx: tuple, hy: tuple, used: int, last) -> bool:
        left = self.rounds - len(gx)
        if left == 0:
            return False
        key = (frozenset(zip(gx, hy)), used, last)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = any(True for _ in self._winning_moves(gx, hy, used, last))
        self.memo[key] = result
        return result

    def _winning_moves(self, gx, hy, used, last):
        left = self.rounds - len(gx)
        for side, step in self._sides(used, last, left):
            mine, theirs = (self.g, self.h) if side == G_SIDE else (self.h, self.g)
            taken_mine = gx if side == G_SIDE else hy
            taken_theirs = hy if side == G_SIDE else gx
            for v in range(mine.n):
                if v in taken_mine:
                    continue
                if self._move_wins(side, v, gx, hy, step, theirs, taken_theirs, left):
                    yield side, v, step

    def _replies(self, side, v, gx, hy):
        theirs = self.h if side == G_SIDE else self.g
        taken = hy if side == G_SIDE else gx
        return [u for u in range(theirs.n) if u not in taken]

    def _extend(self, side, v, u, gx, hy):
        return (gx + (v,), hy + (u,)) if side == G_SIDE else (gx + (u,), hy + (v,))

    def _move_wins(self, side, v, gx, hy, step, theirs, taken_theirs, left) -> bool:
        # a Duplicator with nothing left to pick loses
        for u in self._replies(side, v, gx, hy):
            ngx, nhy = self._extend(side, v, u, gx, hy)
            if not _extends_iso(self.g, self.h, gx, hy, ngx[-1], nhy[-1]):
                if self._finishable(step, left - 1):
                    continue
                return False
            if not self.spoiler_wins(ngx, nhy, step, side):
                return False
        return True

    def strategy(self, gx: tuple, hy: tuple, used: int, last) -> Move | None:
        left = self.rounds - len(gx)
        for side, v, step in self._winning_moves(gx, hy, used, last):
            move = Move(side, v)
            for u in self._replies(side, v, gx, hy):
                ngx, nhy = self._extend(side, v, u, gx, hy)
                if _extends_iso(self.g, self.h, gx, hy, ngx[-1], nhy[-1]):
                    move.replies[u] = self.strategy(ngx, nhy, step, side)
                else:
                    move.replies[u] = None
            return move
        return None


def _check_game(g: Graph, gx, h: Graph, hy, rounds: int):
    gx, hy = tuple(gx), tuple(hy)
    if len(gx) != len(hy):
        raise ValueError(f"preset tuples differ in length ({len(gx)} vs {len(hy)})")
    if len(gx) > rounds:
        raise ValueError("more preset vertices than rounds")
    for tup, graph in ((gx, g), (hy, h)):
        if len(set(tup)) != len(tup):
            raise ValueError("preset vertices must be distinct within a graph")
        if any(not 0 <= v < graph.n for v in tup):
            raise ValueError("preset vertex out of range")
    if rounds > min(g.n, h.n):
        raise ValueError(
            f"{rounds} rounds need at least {rounds} vertices in each graph "
            f"(got {g.n} and {h.n})"
        )
    return gx, hy


def _run(g, gx, h, hy, spec: GameSpec) -> GameOutcome:
    gx, hy = _check_game(g, gx, h, hy, spec.rounds)
    if not _is_partial_iso(g, h, gx, hy):
        return GameOutcome(SPOILER, None)
    solver = _Solver(g, h, spec.rounds, spec.mode, spec.k)
    if solver.spoiler_wins(gx, hy, 0, None):
        return GameOutcome(SPOILER, solver.strategy(gx, hy, 0, None))
    return GameOutcome(DUPLICATOR, None)


def solve(g: Graph, h: Graph, spec: GameSpec) -> GameOutcome:
    return _run(g, (), h, (), spec)


def solve_prefixed(g: Graph, gx: Sequence[int], h: Graph, hy: Sequence[int], q: int) -> GameOutcome:
    """Plain game whose first ``len(gx)`` rounds are fixed to the given tuples."""
    return _run(g, gx, h, hy, GameSpec(q))


def equivalent_k(g: Graph, gx: Sequence[int], h: Graph, hy: Sequence[int], k: int) -> bool:
    return solve_prefixed(g, gx, h, hy, k).winner == DUPLICATOR


# ---------------------------------------------------------------- synthesis

def _leaf_atom(g: Graph, h: Graph, gx, hy) -> F.Atom:
    n = len(gx)
    for i in range(n):
        for j in range(i):
            a, b = g.adjacent(gx[i], gx[j]), h.adjacent(hy[i], hy[j])
            if a != b:
                return F.Atom(F.ADJ if a else F.NADJ, j, i)
    raise AssertionError("position is still a partial isomorphism")


def _synth(g: Graph, h: Graph, move: Move, gx: tuple, hy: tuple) -> F.Formula:
    m = len(gx)
    parts = []
    for u, sub in move.replies.items():
        ngx, nhy = (gx + (move.vertex,), hy + (u,)) if move.side == G_SIDE else (gx + (u,), hy + (move.vertex,))
        piece = _leaf_atom(g, h, ngx, nhy) if sub is None else _synth(g, h, sub, ngx, nhy)
        if piece not in parts:
            parts.append(piece)
    if move.side == G_SIDE:
        guards = [F.Atom(F.NEQ, m, i) for i in range(m)]
        return F.Exists(m, F.conj(*guards, *parts))
    guards = [F.Atom(F.EQ, m, i) for i in range(m)]
    return F.Forall(m, F.disj(*guards, *parts))


def synthesize_distinguishing(g: Graph, h: Graph, spec: GameSpec) -> F.Formula | None:
    """A sentence true on ``g`` and false on ``h`` read off Spoiler's strategy.

    Returns None when Duplicator wins. The nesting depth is at most the
    number of rounds, and its alternations follow Spoiler's graph switches.
    """
    outcome = solve(g, h, spec)
    if outcome.winner == DUPLICATOR:
        return None
    return F.rename_apart(_synth(g, h, outcome.strategy, (), ()))
