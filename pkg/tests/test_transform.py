import itertools

import pytest
from hypothesis import assume, given, settings

from conftest import graphs, sentences
from fograph import corpus
from fograph import formula as F
from fograph import transform as T
from fograph.formula import ADJ, EQ, EXISTS, FORALL, Atom, Conj, Disj
from fograph.graphcore import Graph, all_labeled_graphs
from fograph.modelcheck import models, satisfies

GRAPHS3 = list(all_labeled_graphs(3))
GRAPHS4 = list(all_labeled_graphs(4))


def text(f) -> str:
    if isinstance(f, T.PrenexFormula):
        f = f.to_formula()
    return F.to_text(f)


def agree_open(f, g, free, hosts=GRAPHS3):
    """Same truth value under every assignment of ``free`` on every host."""
    for host in hosts:
        for values in itertools.product(range(host.n), repeat=len(free)):
            env = dict(zip(free, values))
            if satisfies(host, f, env) != satisfies(host, g, env):
                return False
    return True


def perfect_matching(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(0, n, 2)])


# ---------------------------------------------------------------- merge_prenex

def test_merge_two_existential_blocks():
    # free variable 0 plays the role of the parameter of A and B
    left = T.PrenexFormula(((EXISTS, 1),), Atom(ADJ, 1, 0))
    right = T.PrenexFormula(((EXISTS, 1),), Atom(F.NADJ, 1, 0))
    merged = T.merge_prenex(left, right, "and")
    assert merged.labels == (EXISTS, EXISTS)
    assert len(set(merged.variables)) == 2
    assert agree_open(merged.to_formula(), Conj((left.to_formula(), right.to_formula())), [0])


def test_merge_two_universal_blocks():
    left = T.PrenexFormula(((FORALL, 1),), Atom(ADJ, 1, 0))
    right = T.PrenexFormula(((FORALL, 2),), Atom(EQ, 2, 0))
    merged = T.merge_prenex(left, right, "or")
    assert merged == T.PrenexFormula(((FORALL, 1), (FORALL, 2)), Disj((Atom(ADJ, 1, 0), Atom(EQ, 2, 0))))
    assert agree_open(merged.to_formula(), Disj((left.to_formula(), right.to_formula())), [0])


def test_merge_with_empty_prefix():
    left = T.PrenexFormula(((EXISTS, 1), (EXISTS, 2)), Atom(ADJ, 1, 2))
    right = T.PrenexFormula((), Atom(ADJ, 0, 3))
    merged = T.merge_prenex(left, right, "and")
    assert merged.prefix == left.prefix
    assert merged.matrix == Conj((Atom(ADJ, 1, 2), Atom(ADJ, 0, 3)))


def test_merge_rejects_mixed_blocks():
    mixed = T.PrenexFormula(((EXISTS, 1), (FORALL, 2)), Atom(ADJ, 1, 2))
    with pytest.raises(ValueError):
        T.merge_prenex(mixed, mixed, "and")
    with pytest.raises(ValueError):
        T.merge_prenex(mixed, mixed, "xor")


# ---------------------------------------------------------------- to_pnf

def test_pnf_of_theorem_sentence_matches_displayed_prefix():
    pf = T.to_pnf(corpus.theorem1())
    assert pf.is_prenex()
    assert "".join(pf.labels) == "EEEEAAEA"
    assert F.metrics(pf.to_formula()) == F.FormulaMetrics(8, 3)


def test_pnf_keeps_prenex_input(small_corpus):
    for f in small_corpus:
        if isinstance(f, F.Quantifier):
            try:
                T.PrenexFormula.from_formula(f)
            except ValueError:
                continue
            assert T.to_pnf(f).to_formula() == F.rename_apart(f)


def test_pnf_of_mixed_conjunction():
    f = F.parse_sentence("(Ex x (x ~ y)) & (Ax z (z = y | z !~ y))", free=["y"])
    pf = T.to_pnf(f)
    assert text(pf) == "(Ex x1 (Ax x2 ((x1 ~ x0) & ((x2 = x0) | (x2 !~ x0)))))"
    assert agree_open(pf.to_formula(), f, [0], hosts=GRAPHS4)


def test_pnf_rejects_negations():
    with pytest.raises(ValueError):
        T.to_pnf(F.parse("Ex x !(Ex y x ~ y)"))


@given(sentences())
@settings(max_examples=150, deadline=None)
def test_pnf_agrees_with_input(f):
    pf = T.to_pnf(f)
    assert pf.is_prenex()
    assert F.quantifier_count(pf.to_formula()) == F.quantifier_count(f)
    for g in GRAPHS3 + GRAPHS4[::5]:
        assert models(g, pf.to_formula()) == models(g, f)


# ---------------------------------------------------------------- distinct-witness form

def test_nepnf_of_existential_pair():
    f = F.parse_sentence("Ex a Ex b (a ~ b)")
    assert text(T.to_nepnf(T.to_pnf(f))) == "(Ex x0 (Ex x1 ((x1 != x0) & (x0 ~ x1))))"


def test_nepnf_of_universal_pair_is_frozen():
    # substituting b := a yields the loop a ~ a, which is false, so the core is a contradiction
    f = F.parse_sentence("Ax a Ax b (a ~ b)")
    out = T.to_nepnf(T.to_pnf(f))
    assert text(out) == "(Ax x0 (Ax x1 ((x1 = x0) | ((x0 ~ x1) & (x0 !~ x1)))))"
    assert all(models(g, out.to_formula()) == models(g, f) for g in GRAPHS4)


def test_nepnf_basis_round_trip():
    pf = T.to_pnf(F.parse_sentence("Ax a Ex b (a ~ b)"))
    basis = T.ne_basis(pf)
    assert basis.labels == (FORALL, EXISTS)
    assert not any(a.rel in (EQ, F.NEQ) for a in F.atoms(basis.core))
    assert T.from_ne_basis(basis) == T.to_nepnf(pf)


def test_nepnf_size_cap():
    f = F.parse_sentence(" ".join(f"Ex v{i}" for i in range(11)) + " (v0 ~ v1)")
    with pytest.raises(ValueError):
        T.to_nepnf(T.to_pnf(f))


def test_nepnf_mixed_tail_counterexample_is_frozen(small_corpus):
    # a later quantifier of the opposite label: the case split is joined under it
    f = small_corpus[16]
    assert text(f) == "(Ax x0 (Ex x1 (Ax x2 (Ex x3 ((x0 ~ x1) & ((x2 ~ x3) | (x2 = x0)))))))"
    ne = T.to_nepnf(T.to_pnf(f)).to_formula()
    for n in (8, 20, 40):
        g = perfect_matching(n)
        assert models(g, f) and not models(g, ne)


@given(sentences())
@settings(max_examples=150, deadline=None)
def test_nepnf_preserves_quantifier_sequence(f):
    pf = T.to_pnf(f)
    assert T.to_nepnf(pf).labels == pf.labels


@given(sentences(), graphs(min_n=4, max_n=5))
@settings(max_examples=300, deadline=None)
def test_nepnf_exact_when_tail_is_uniform(f, g):
    pf = T.to_pnf(f)
    assume(len(set(pf.labels[1:])) <= 1)
    assert models(g, T.to_nepnf(pf).to_formula()) == models(g, f)


# ---------------------------------------------------------------- alternation-preserving form

def forest_of(*shape) -> F.NestingForest:
    labels = tuple(EXISTS for _ in shape)
    roots = tuple(i for i, p in enumerate(shape) if p is None)
    return F.NestingForest(labels, shape, roots)


def test_mu_examples():
    assert T.mu_measure(forest_of(None, 0, 1)) == 0
    assert T.mu_measure(forest_of(None, 0, 0)) == 1
    assert T.mu_measure(forest_of(None, 0, 0, 0)) == 1
    assert T.mu_measure(forest_of(None, 0, 0, 1, 2)) == 2
    with pytest.raises(ValueError):
        T.mu_measure(forest_of(None, None))


def test_alternation_preserving_theorem_sentence():
    pf = T.to_pnf_alternation_preserving(corpus.theorem1())
    assert pf.is_prenex()
    assert F.metrics(pf.to_formula()).alternations == 3


def test_alternation_preserving_existential_branches():
    f = F.parse_sentence("Ex x ((Ex y x ~ y) & (Ex z x !~ z))")
    pf = T.to_pnf_alternation_preserving(f)
    assert "".join(pf.labels) == "EEE"
    assert F.metrics(pf.to_formula()).alternations == 0
    assert all(models(g, pf.to_formula()) == models(g, f) for g in GRAPHS4)


def test_alternation_preserving_keeps_prenex_input():
    f = F.parse_sentence("Ax a Ex b Ax c (a ~ b & b !~ c)")
    pf = T.to_pnf_alternation_preserving(f)
    assert pf.to_formula() == f


def test_alternation_preserving_preconditions():
    with pytest.raises(ValueError):
        T.to_pnf_alternation_preserving(F.parse_sentence("(Ex a Ax b a ~ b) | (Ax a Ex b a ~ b)"))
    with pytest.raises(ValueError):
        T.to_pnf_alternation_preserving(Atom(ADJ, 0, 1))


def test_passes_on_theorem_sentence():
    passes = T.alternation_preserving_passes(corpus.theorem1())
    mus = [T.mu_measure(F.nesting_forest(p)) for p in passes]
    assert mus[0] > 0 and mus[-1] == 0
    assert all(a > b for a, b in zip(mus, mus[1:]))
    assert T.to_pnf(passes[-1]).labels == T.to_pnf_alternation_preserving(corpus.theorem1()).labels


@given(sentences())
@settings(max_examples=200, deadline=None)
def test_alternation_preserving_properties(f):
    pf = T.to_pnf_alternation_preserving(f)
    assert pf.is_prenex()
    assert F.metrics(pf.to_formula()).alternations == F.metrics(f).alternations
    for g in GRAPHS3 + GRAPHS4[::5]:
        assert models(g, pf.to_formula()) == models(g, f)


@given(sentences())
@settings(max_examples=200, deadline=None)
def test_passes_strictly_decrease_mu(f):
    passes = T.alternation_preserving_passes(f)
    mus = [T.mu_measure(F.nesting_forest(p)) for p in passes]
    assert all(a - b >= 1 for a, b in zip(mus, mus[1:]))
    assert mus[-1] == 0
    finished = T.to_pnf(passes[-1])
    assert finished.labels == T.to_pnf_alternation_preserving(f).labels
    assert F.metrics(finished.to_formula()).alternations == F.metrics(f).alternations
