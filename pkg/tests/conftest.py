"""Shared fixtures and hypothesis strategies."""
from __future__ import annotations

import pytest
from hypothesis import strategies as st

from fograph import corpus
from fograph import formula as F
from fograph.graphcore import Graph, all_labeled_graphs

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def _acceptance_results(config) -> dict:
    if ACCEPTANCE_KEY not in config.stash:
        config.stash[ACCEPTANCE_KEY] = {}
    return config.stash[ACCEPTANCE_KEY]


@pytest.fixture
def acceptance(request):
    """Record a named check for an acceptance criterion: ``acceptance(number, part, ok, detail)``."""
    results = _acceptance_results(request.config)

    def record(number: int, part: str, ok: bool, detail: str = "") -> bool:
        results.setdefault(number, []).append((part, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = _acceptance_results(config)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        parts = results[number]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}")
        for part, ok, detail in parts:
            status = "pass" if ok else "FAIL"
            terminalreporter.write_line(f"    {status}  {part}" + (f"  ({detail})" if detail else ""))


def k3() -> Graph:
    return Graph.complete(3)


def p3() -> Graph:
    return Graph.path(3)


@pytest.fixture(scope="session")
def graphs4() -> list[Graph]:
    return list(all_labeled_graphs(4))


@pytest.fixture(scope="session")
def small_corpus() -> list[F.Formula]:
    return corpus.small_corpus()


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 6) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def sentences(draw, max_quantifiers: int = 4) -> F.Formula:
    """Negation-free sentences led by a quantifier, with 2..max_quantifiers quantifiers."""
    budget = [draw(st.integers(2, max_quantifiers))]
    counter = [0]

    def build(scope: list[int], depth: int) -> F.Formula:
        if len(scope) < 2:
            return quantified(scope, depth)
        options = ["atom", "and", "or"] if depth < 4 else ["atom"]
        if budget[0] > 0:
            options.append("quant")
        kind = draw(st.sampled_from(options))
        if kind == "atom":
            a, b = draw(st.lists(st.sampled_from(scope), min_size=2, max_size=2, unique=True))
            return F.Atom(draw(st.sampled_from(F.RELATIONS)), a, b)
        if kind == "quant":
            return quantified(scope, depth)
        left, right = build(scope, depth + 1), build(scope, depth + 1)
        return F.Conj((left, right)) if kind == "and" else F.Disj((left, right))

    def quantified(scope, depth):
        budget[0] -= 1
        v = counter[0]
        counter[0] += 1
        label = draw(st.sampled_from((F.EXISTS, F.FORALL)))
        return F.quant(label, v, build(scope + [v], depth + 1))

    return F.rename_apart(quantified([], 0))
