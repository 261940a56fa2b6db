"""Acceptance criteria 1-9. Each check is recorded and summarized after the run."""
import itertools
import random
import time
from fractions import Fraction

import pytest

from fograph import corpus
from fograph import density as D
from fograph import formula as F
from fograph import randexp as R
from fograph import transform as T
from fograph.efgame import ATMOST, EXACT, SPOILER, GameSpec, solve, synthesize_distinguishing
from fograph.graphcore import Graph, PatternPair, all_labeled_graphs, nonisomorphic_graphs
from fograph.modelcheck import models, models_by_substitution

GRAPHS4 = list(all_labeled_graphs(4))
SMALL_GRAPHS = [g for n in range(1, 5) for g in nonisomorphic_graphs(n)]
SMALL_PAIRS = list(itertools.combinations(SMALL_GRAPHS, 2))


def transformed(f):
    pf = T.to_pnf(f)
    return {
        "pnf": pf.to_formula(),
        "nepnf": T.to_nepnf(pf).to_formula(),
        "alternation-preserving": T.to_pnf_alternation_preserving(f).to_formula(),
    }


@pytest.fixture(scope="module")
def corpus_forms():
    return [(f, transformed(f)) for f in corpus.small_corpus()]


def rounds_for(g, h):
    return range(1, min(3, g.n, h.n) + 1)


# ---------------------------------------------------------------- 1

def test_criterion1_corpus_metrics(acceptance):
    start = time.perf_counter()
    got = (F.metrics(corpus.theorem1()), F.metrics(corpus.theorem1_pnf()))
    elapsed = time.perf_counter() - start
    ok = got == (F.FormulaMetrics(5, 3), F.FormulaMetrics(8, 3)) and elapsed < 1
    acceptance(1, "depth/alternations of both sentences", ok, f"{got[0]}, {got[1]}, {elapsed:.3f}s")
    assert ok


# ---------------------------------------------------------------- 2

def disagreeing(corpus_forms, kind):
    return [i for i, (f, forms) in enumerate(corpus_forms)
            if any(models(g, f) != models(g, forms[kind]) for g in GRAPHS4)]


@pytest.mark.parametrize("kind", ["pnf", "nepnf", "alternation-preserving"])
def test_criterion2_truth_preserved(acceptance, corpus_forms, kind):
    start = time.perf_counter()
    bad = disagreeing(corpus_forms, kind)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    detail = f"{len(bad)} of {len(corpus_forms)} formulas disagree" + (f": {bad}" if bad else "")
    acceptance(2, f"{kind} agrees on 64 graphs x corpus", ok, detail)
    assert not bad


def test_criterion2_nepnf_keeps_quantifier_sequence(acceptance, corpus_forms):
    bad = [i for i, (f, _) in enumerate(corpus_forms)
           if T.to_nepnf(T.to_pnf(f)).labels != T.to_pnf(f).labels]
    acceptance(2, "nepnf keeps the quantifier sequence", not bad, f"mismatches: {bad}" if bad else "")
    assert not bad


def test_criterion2_alternations_preserved(acceptance, corpus_forms):
    bad = [i for i, (f, forms) in enumerate(corpus_forms)
           if F.metrics(forms["alternation-preserving"]).alternations != F.metrics(f).alternations]
    acceptance(2, "alternation-preserving form keeps the alternation count", not bad,
               f"mismatches: {bad}" if bad else "")
    assert not bad


# ---------------------------------------------------------------- 3

def test_criterion3_synthesis_is_sound(acceptance):
    start = time.perf_counter()
    failures, checked = [], 0
    for g, h in SMALL_PAIRS:
        for q in rounds_for(g, h):
            for spec in [GameSpec(q)] + [GameSpec(q, ATMOST, k) for k in range(q)]:
                if solve(g, h, spec).winner != SPOILER:
                    continue
                checked += 1
                f = synthesize_distinguishing(g, h, spec)
                m = F.metrics(f)
                sound = (models(g, f) and not models(h, f) and m.depth <= q
                         and (spec.mode != ATMOST or m.alternations <= spec.k))
                if not sound:
                    failures.append((g, h, str(spec), q))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    acceptance(3, f"{checked} spoiler wins over {len(SMALL_PAIRS)} pairs", ok,
               f"{len(failures)} unsound, {elapsed:.1f}s")
    assert ok, failures[:5]


# ---------------------------------------------------------------- 4

def test_criterion4_mode_monotonicity(acceptance):
    violations = []
    for g, h in SMALL_PAIRS:
        for q in rounds_for(g, h):
            wins = {(mode, k): solve(g, h, GameSpec(q, mode, k)).winner == SPOILER
                    for mode in (ATMOST, EXACT) for k in range(q)}
            plain = solve(g, h, GameSpec(q)).winner == SPOILER
            for k in range(q):
                if wins[EXACT, k] and not wins[ATMOST, k]:
                    violations.append((g, h, q, "exact->atmost", k))
                if wins[ATMOST, k] and not plain:
                    violations.append((g, h, q, "atmost->plain", k))
                if k + 1 < q and wins[ATMOST, k] and not wins[ATMOST, k + 1]:
                    violations.append((g, h, q, "atmost(k)->atmost(k+1)", k))
            if plain != wins[ATMOST, q - 1]:
                violations.append((g, h, q, "plain!=atmost(q-1)", q - 1))
    acceptance(4, "implications and plain = at-most(q-1)", not violations,
               f"{len(violations)} violations")
    assert not violations, violations[:5]


# ---------------------------------------------------------------- 5

def closure_case(i: int):
    """Sparse random background near the threshold with a few planted dense clusters."""
    rnd = random.Random(1000 + i)
    n = rnd.randint(16, 40)
    alpha = ("3/5", "7/10")[i % 2]
    t = 1 + i % 3
    g = R.sample_gnp(n, R.alpha_to_p(n, alpha), R.Xorshift64Star.substream(5, i, n))
    edges = set(g.edges())
    clusters = [rnd.sample(range(n), rnd.randint(3, 5)) for _ in range(rnd.randint(1, 3))]
    for cluster in clusters:
        edges.update(e for e in itertools.combinations(sorted(cluster), 2) if rnd.random() < 0.85)
    base = [clusters[0][0]] + rnd.sample([v for v in range(n) if v != clusters[0][0]], rnd.randint(0, 2))
    return Graph.from_edges(n, edges), base, t, alpha


def test_criterion5_closure_uniqueness(acceptance):
    start = time.perf_counter()
    mismatched, grown = [], 0
    for i in range(50):
        g, base, t, alpha = closure_case(i)
        reference = D.closure_vertices(g, base, t, alpha)
        grown += len(reference) > len(base)
        rnd = random.Random(i)
        if any(D.random_order_closure(g, base, t, alpha, rnd) != reference for _ in range(100)):
            mismatched.append(i)
    elapsed = time.perf_counter() - start
    ok = not mismatched and elapsed < 120
    acceptance(5, "50 graphs x 100 orders give one closure", ok,
               f"{grown} closures grow past the base, {len(mismatched)} mismatches, {elapsed:.1f}s")
    assert ok, mismatched


# ---------------------------------------------------------------- 6

def random_pattern_pair(rnd: random.Random) -> PatternPair:
    n = rnd.randint(2, 8)
    density = rnd.random()
    edges = [e for e in itertools.combinations(range(n), 2) if rnd.random() < density]
    roots = rnd.sample(range(n), rnd.randint(0, n - 1))
    return PatternPair(Graph.from_edges(n, edges), roots)


def random_alpha(rnd: random.Random, avoid: int) -> Fraction:
    while True:
        numerator = rnd.randint(avoid + 1, 40)
        alpha = Fraction(numerator, rnd.randint(numerator + 1, 3 * numerator))
        if alpha.numerator > avoid:
            return alpha


def test_criterion6_rigid_subextension_round_trip(acceptance):
    rnd = random.Random(8)
    failures, unsafe = [], 0
    for i in range(200):
        pp = random_pattern_pair(rnd)
        alpha = random_alpha(rnd, len(pp.extension))
        found = D.find_rigid_subextension(pp, alpha)
        if D.is_safe(pp, alpha):
            good = found is None
        else:
            unsafe += 1
            good = found is not None and D.is_rigid(found, alpha)
        if not good:
            failures.append(i)
    acceptance(6, f"200 pattern pairs ({unsafe} unsafe)", not failures, f"{len(failures)} failures")
    assert not failures


# ---------------------------------------------------------------- 7

SEED_SETS = (101, 202, 303, 404, 505)
THRESHOLD_CASES = [
    ("triangle", 1500, "4/5", ">=", 0.95),
    ("triangle", 1500, "6/5", "<=", 0.05),
    ("neighbor-extension", 2000, "4/5", ">=", 0.95),
    ("neighbor-extension", 2000, "6/5", "<=", 0.05),
]


def threshold_property(name):
    if name == "triangle":
        return R.Property.subgraph(Graph.complete(3), name)
    return R.Property.extension(R.neighbor_pattern(), name)


@pytest.mark.parametrize("name, n, alpha, direction, bound", THRESHOLD_CASES,
                         ids=[f"{c[0]}-{c[2]}" for c in THRESHOLD_CASES])
def test_criterion7_threshold(acceptance, name, n, alpha, direction, bound):
    phats = []
    for seed in SEED_SETS:
        est = R.estimate(R.ExperimentConfig((n,), alpha, 200, seed, threshold_property(name)))
        phats.append(est.rows[0].phat)
    passes = [p >= bound if direction == ">=" else p <= bound for p in phats]
    ok = all(passes)
    acceptance(7, f"{name} at n={n}, alpha={alpha}: phat {direction} {bound} in each seed set", ok,
               "phat " + ", ".join(f"{p:.3f}" for p in phats))
    assert ok, phats


# ---------------------------------------------------------------- 8

def test_criterion8_spectrum_probe_determinism(acceptance):
    runs = [R.spectrum_probe(corpus.theorem1(), "3/4", [100, 200, 400, 800], 100, 42) for _ in range(2)]
    tables = [run.to_csv() for run in runs]
    header = tables[0].splitlines()[0]
    complete = header.endswith(",timeouts") and len(tables[0].splitlines()) == 5
    ok = tables[0] == tables[1] and complete
    timeouts = [row.timeouts for row in runs[0].rows]
    acceptance(8, "two runs give identical full tables", ok, f"timeouts per n: {timeouts}")
    assert ok


# ---------------------------------------------------------------- 9

def test_criterion9_evaluators_agree(acceptance, corpus_forms):
    disagreements, checked = [], 0
    for i, (f, forms) in enumerate(corpus_forms):
        for kind, phi in [("original", f)] + list(forms.items()):
            for g in GRAPHS4:
                checked += 1
                if models(g, phi) != models_by_substitution(g, phi):
                    disagreements.append((i, kind, g))
    acceptance(9, f"{checked} formula/graph checks", not disagreements,
               f"{len(disagreements)} disagreements")
    assert not disagreements, disagreements[:5]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
