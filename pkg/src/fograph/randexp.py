"""Seeded G(n, n^-alpha) sampling and Monte Carlo estimates of graph properties."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Sequence

from . import formula as F
from .density import as_fraction, format_fraction
from .graphcore import Graph, PatternPair, find_rooted_embedding
from .modelcheck import EvaluationTimeout, has_double_extension_property, has_extension_property, models

MASK64 = (1 << 64) - 1
DEFAULT_TIMEOUT = 5.0


def splitmix64(x: int) -> int:
    """One output of the splitmix64 finalizer; used to derive seeds and substreams."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class Xorshift64Star:
    """xorshift64* generator (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)."""

    MULT = 0x2545F4914F6CDD1D

    def __init__(self, seed: int):
        state = splitmix64(seed & MASK64)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * self.MULT) & MASK64

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    @classmethod
    def substream(cls, seed: int, trial: int, n: int) -> "Xorshift64Star":
        key = (seed ^ splitmix64(trial) ^ splitmix64(splitmix64(n))) & MASK64
        return cls(key)


def sample_gnp(n: int, p: float, rng: Xorshift64Star) -> Graph:
    """Binomial random graph; pairs are visited in lexicographic order and
    skipped geometrically so the cost scales with the edge count."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)
    rows = [0] * n
    log_q = math.log1p(-p)
    total = n * (n - 1) // 2
    idx = -1
    u, row_end, row_start = 0, n - 1, 0  # pairs (u, *) occupy [row_start, row_end)
    while True:
        r = rng.random()
        idx += 1 + int(math.log1p(-r) / log_q)
        if idx >= total:
            break
        while idx >= row_end:
            u += 1
            row_start = row_end
            row_end += n - 1 - u
        v = u + 1 + (idx - row_start)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, rows)


def alpha_to_p(n: int, alpha) -> float:
    if n < 2:
        raise ValueError("n must be at least 2")
    return n ** (-float(as_fraction(alpha)))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials and trials >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


# ---------------------------------------------------------------- properties

def contains_triangle(g: Graph) -> bool:
    for u in range(g.n):
        row = g.rows[u] >> (u + 1) << (u + 1)
        while row:
            low = row & -row
            v = low.bit_length() - 1
            if g.rows[u] & g.rows[v] & ~((1 << (v + 1)) - 1):
                return True
            row ^= low
    return False


def contains_subgraph(g: Graph, pattern: Graph) -> bool:
    """Is there a (not necessarily induced) copy of ``pattern`` in ``g``?"""
    if pattern == Graph.complete(3):
        return contains_triangle(g)
    return find_rooted_embedding(g, [], PatternPair(pattern, ()), False) is not None


def neighbor_pattern() -> PatternPair:
    """One root with a single neighbour: "every vertex has a neighbour"."""
    return PatternPair(Graph.from_edges(2, [(0, 1)]), (0,))


def has_no_isolated_vertex(g: Graph) -> bool:
    return all(row for row in g.rows)


@dataclass(frozen=True)
class Property:
    """A named predicate on graphs, optionally evaluated under a deadline."""

    name: str
    check: Callable  # (graph, timeout) -> bool

    @classmethod
    def sentence(cls, f: F.Formula, name: str | None = None) -> "Property":
        F.require_sentence(f)
        return cls(name or F.to_text(f), lambda g, timeout: models(g, f, timeout=timeout))

    @classmethod
    def subgraph(cls, pattern: Graph, name: str | None = None) -> "Property":
        return cls(name or f"subgraph(n={pattern.n})", lambda g, timeout: contains_subgraph(g, pattern))

    @classmethod
    def extension(cls, pp: PatternPair, name: str | None = None) -> "Property":
        if pp == neighbor_pattern():
            return cls(name or "no-isolated-vertex", lambda g, timeout: has_no_isolated_vertex(g))
        return cls(name or "extension", lambda g, timeout: has_extension_property(g, pp))

    @classmethod
    def double_extension(cls, w_set, name: str | None = None) -> "Property":
        return cls(name or "double-extension", lambda g, timeout: has_double_extension_property(g, w_set))


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple
    alpha: Fraction
    trials: int
    seed: int
    prop: Property
    timeout: float | None = DEFAULT_TIMEOUT

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ValueError("n values must be at least 2")


@dataclass(frozen=True)
class EstimateRow:
    n: int
    p: float
    successes: int
    trials: int
    phat: float
    lo: float
    hi: float
    timeouts: int = 0

    def as_dict(self) -> dict:
        return {
            "n": self.n, "p": self.p, "successes": self.successes, "trials": self.trials,
            "phat": self.phat, "lo": self.lo, "hi": self.hi, "timeouts": self.timeouts,
        }


@dataclass(frozen=True)
class SpectrumEstimate:
    alpha: Fraction
    rows: tuple
    property_name: str = ""
    note: str = field(
        default="finite-n estimates only; limiting behaviour is not decided here"
    )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "p", "successes", "trials", "phat", "lo", "hi", "timeouts"])
        for r in self.rows:
            writer.writerow([r.n, repr(r.p), r.successes, r.trials, repr(r.phat), repr(r.lo), repr(r.hi), r.timeouts])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "alpha": format_fraction(self.alpha),
                "property": self.property_name,
                "note": self.note,
                "rows": [r.as_dict() for r in self.rows],
            },
            separators=(",", ":"),
        )


def _estimate_row(n: int, cfg: ExperimentConfig) -> EstimateRow:
    p = alpha_to_p(n, cfg.alpha)
    successes = timeouts = 0
    for trial in range(cfg.trials):
        g = sample_gnp(n, p, Xorshift64Star.substream(cfg.seed, trial, n))
        try:
            if cfg.prop.check(g, cfg.timeout):
                successes += 1
        except EvaluationTimeout:
            timeouts += 1
    decided = cfg.trials - timeouts
    if decided:
        phat = successes / decided
        lo, hi = wilson_interval(successes, decided)
    else:
        phat, lo, hi = math.nan, 0.0, 1.0
    return EstimateRow(n, p, successes, cfg.trials, phat, lo, hi, timeouts)


def estimate(cfg: ExperimentConfig) -> SpectrumEstimate:
    """Per n: sample ``trials`` graphs and report the success fraction.

    Trials that hit the evaluation deadline are counted in ``timeouts`` and
    excluded from ``phat`` and its interval.
    """
    rows = tuple(_estimate_row(n, cfg) for n in sorted(cfg.n_values))
    return SpectrumEstimate(cfg.alpha, rows, cfg.prop.name)


def spectrum_probe(f: F.Formula, alpha, n_values: Sequence[int], trials: int, seed: int,
                   timeout: float | None = DEFAULT_TIMEOUT) -> SpectrumEstimate:
    cfg = ExperimentConfig(tuple(n_values), alpha, trials, seed, Property.sentence(f), timeout)
    return estimate(cfg)

