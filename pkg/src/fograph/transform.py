"""Prenex normal forms: plain extraction, the distinct-witness form, and an
alternation-preserving construction driven by the nesting tree."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import formula as F
from .formula import EXISTS, Atom, Conj, Disj, Formula

MAX_NEPNF_QUANTIFIERS = 10


@dataclass(frozen=True)
class PrenexFormula:
    prefix: tuple  # ((label, var), ...)
    matrix: Formula

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(tuple(p) for p in self.prefix))

    def to_formula(self) -> Formula:
        out = self.matrix
        for label, var in reversed(self.prefix):
            out = F.quant(label, var, out)
        return out

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.prefix)

    @property
    def variables(self) -> tuple:
        return tuple(var for _, var in self.prefix)

    def is_prenex(self) -> bool:
        return F.is_quantifier_free(self.matrix)

    @classmethod
    def from_formula(cls, f: Formula) -> "PrenexFormula":
        prefix = []
        while isinstance(f, F.Quantifier):
            prefix.append((F.label_of(f), f.var))
            f = f.body
        if not F.is_quantifier_free(f):
            raise ValueError("formula is not in prenex form")
        return cls(tuple(prefix), f)


def quantifier_sequence(f) -> tuple:
    if isinstance(f, PrenexFormula):
        return f.labels
    return PrenexFormula.from_formula(f).labels


def _fresh_from(*formulas) -> int:
    used = set()
    for f in formulas:
        used |= F.all_vars(f)
    return max(used, default=-1) + 1


def _rename_bound(pf: PrenexFormula, clash: set, start: int) -> tuple[PrenexFormula, int]:
    mapping = {}
    prefix = []
    for label, var in pf.prefix:
        if var in clash:
            mapping[var] = start
            start += 1
        prefix.append((label, mapping.get(var, var)))
    return PrenexFormula(tuple(prefix), F.substitute(pf.matrix, mapping)), start


def merge_prenex(f1: PrenexFormula, f2: PrenexFormula, connective: str) -> PrenexFormula:
    """Concatenate two uniform quantifier blocks over a combined matrix.

    ``connective`` is ``"and"`` or ``"or"``. Bound variables of either side that
    would capture a variable of the other side are renamed to fresh ids.
    """
    if connective not in ("and", "or"):
        raise ValueError("connective must be 'and' or 'or'")
    for pf in (f1, f2):
        if len(set(pf.labels)) > 1:
            raise ValueError("merge needs a single repeated quantifier on each side")
    a, b = f1.to_formula(), f2.to_formula()
    start = _fresh_from(a, b)
    f2, start = _rename_bound(f2, F.all_vars(a), start)
    f1, start = _rename_bound(f1, F.free_vars(f2.to_formula()), start)
    join = F.conj if connective == "and" else F.disj
    return PrenexFormula(f1.prefix + f2.prefix, join(f1.matrix, f2.matrix))


def _ensure_apart(f: Formula) -> Formula:
    return f if F.is_renamed_apart(f) else F.rename_apart(f)


def to_pnf(f: Formula) -> PrenexFormula:
    """Pull quantifiers outwards, left to right."""
    if not F.is_negation_free(f):
        raise ValueError("normalize the formula first")
    f = _ensure_apart(f)

    def go(g) -> tuple[list, Formula]:
        if isinstance(g, Atom):
            return [], g
        if isinstance(g, F.Quantifier):
            prefix, matrix = go(g.body)
            return [(F.label_of(g), g.var)] + prefix, matrix
        parts = [go(c) for c in g.children]
        prefix = [q for p, _ in parts for q in p]
        return prefix, type(g)(tuple(m for _, m in parts))

    prefix, matrix = go(f)
    return PrenexFormula(tuple(prefix), matrix)


# ---------------------------------------------------------------- distinct-witness prenex form

_TRUE, _FALSE = "true", "false"


def _fold(kind, parts):
    """Combine partial results, absorbing the constants."""
    unit, zero = (_TRUE, _FALSE) if kind is Conj else (_FALSE, _TRUE)
    kept = []
    for p in parts:
        if p == zero:
            return zero
        if p != unit:
            kept.append(p)
    if not kept:
        return unit
    return kept[0] if len(kept) == 1 else kind(tuple(kept))


def _specialize(f, new: int, earlier: frozenset, target):
    """Decide every equality between ``new`` and an earlier variable, then
    rename ``new`` to ``target`` (None keeps it, meaning it differs from all)."""
    if f in (_TRUE, _FALSE):
        return f
    if isinstance(f, Atom):
        a, b = f.left, f.right
        if new in (a, b):
            other = b if a == new else a
            if other in earlier and f.rel in (F.EQ, F.NEQ):
                same = other == target
                return _TRUE if same == (f.rel == F.EQ) else _FALSE
            if target is not None:
                a = target if a == new else a
                b = target if b == new else b
                if a == b:
                    return _TRUE if f.rel in (F.NADJ, F.EQ) else _FALSE
            return Atom(f.rel, a, b)
        return f
    if isinstance(f, (Conj, Disj)):
        return _fold(type(f), [_specialize(c, new, earlier, target) for c in f.children])
    raise TypeError(f"matrix must be quantifier-free, found {type(f).__name__}")


def _constant_formula(value: str, u: int, v: int) -> Formula:
    if value == _TRUE:
        return Disj((Atom(F.ADJ, u, v), Atom(F.NADJ, u, v)))
    return Conj((Atom(F.ADJ, u, v), Atom(F.NADJ, u, v)))


@dataclass(frozen=True)
class NEBasis:
    core: Formula
    labels: tuple
    variables: tuple


def ne_basis(pf: PrenexFormula) -> NEBasis:
    """Split on every equality pattern among the prefix variables.

    The resulting core has no equality atoms among prefix variables; a
    constant core is written as a tautology or contradiction on the first two
    variables.
    """
    m = len(pf.prefix)
    if m > MAX_NEPNF_QUANTIFIERS:
        raise ValueError(
            f"distinct-witness form is limited to {MAX_NEPNF_QUANTIFIERS} quantifiers, got {m}"
        )
    if not pf.is_prenex():
        raise ValueError("input is not prenex")
    xs = pf.variables
    labels = pf.labels
    phi = pf.matrix
    for j in range(1, m):
        new = xs[j]
        earlier = frozenset(xs[:j])
        cases = [_specialize(phi, new, earlier, None)]
        cases += [_specialize(phi, new, earlier, xs[i]) for i in range(j)]
        phi = _fold(Disj if labels[j] == EXISTS else Conj, cases)
    if phi in (_TRUE, _FALSE):
        phi = _constant_formula(phi, xs[0], xs[1])
    return NEBasis(phi, labels, xs)


def from_ne_basis(basis: NEBasis) -> PrenexFormula:
    xs, labels = basis.variables, basis.labels
    phi = basis.core
    for j in range(1, len(xs)):
        new = xs[j]
        if labels[j] == EXISTS:
            guards = tuple(Atom(F.NEQ, new, xs[i]) for i in reversed(range(j)))
            phi = Conj(guards + (phi,))
        else:
            guards = tuple(Atom(F.EQ, new, xs[i]) for i in reversed(range(j)))
            phi = Disj(guards + (phi,))
    return PrenexFormula(tuple(zip(labels, xs)), phi)


def to_nepnf(pf: PrenexFormula) -> PrenexFormula:
    """Same quantifier sequence; the matrix forces pairwise distinct witnesses.

    The cases for each variable are joined under the later quantifiers, so
    truth is only guaranteed to agree with ``pf`` when every quantifier after
    the first has the same label, and then only on graphs with at least as
    many vertices as there are quantifiers.
    """
    if isinstance(pf, F.Quantifier) or isinstance(pf, (Atom, Conj, Disj)):
        pf = PrenexFormula.from_formula(pf)
    return from_ne_basis(ne_basis(pf))


# ---------------------------------------------------------------- alternation-preserving form

def mu_measure(forest: F.NestingForest) -> int:
    """q + 1 - r, r being the first level holding more than one node (q + 1 if none)."""
    if len(forest.roots) != 1:
        raise ValueError("the measure is defined for a single rooted tree")
    widths = forest.level_widths()
    q = len(widths)
    r = next((i + 1 for i, w in enumerate(widths) if w > 1), q + 1)
    return q + 1 - r


def _leading_block(prefix: Sequence) -> int:
    if not prefix:
        return 0
    k = 1
    while k < len(prefix) and prefix[k][0] == prefix[0][0]:
        k += 1
    return k


def _merge_passes(parts: list, last: str):
    """Yield (merged prefix so far, remaining prefixes) after each pass.

    Every pass takes the leading block of each part that starts with ``last``
    (then with the other label), so the block matching the quantifier just
    above goes first.
    """
    merged = []
    remaining = [list(p) for p in parts]
    while any(remaining):
        first = last
        second = F.DUAL[first]
        groups = {first: [], second: []}
        for idx, pre in enumerate(remaining):
            if pre:
                groups[pre[0][0]].append(idx)
        for label in (first, second):
            for idx in groups[label]:
                k = _leading_block(remaining[idx])
                merged.extend(remaining[idx][:k])
                remaining[idx] = remaining[idx][k:]
        last = merged[-1][0]
        yield list(merged), [list(r) for r in remaining]


def _combine(g, matrices, prefixes) -> Formula:
    parts = []
    for pre, mat in zip(prefixes, matrices):
        parts.append(PrenexFormula(tuple(pre), mat).to_formula())
    return type(g)(tuple(parts))


def _alt_prenex(g, last) -> tuple[list, Formula]:
    if isinstance(g, Atom):
        return [], g
    if isinstance(g, F.Quantifier):
        label = F.label_of(g)
        prefix, matrix = _alt_prenex(g.body, label)
        return [(label, g.var)] + prefix, matrix
    parts = [_alt_prenex(c, last) for c in g.children]
    merged = []
    for merged, _ in _merge_passes([p for p, _ in parts], last):
        pass
    return merged, type(g)(tuple(m for _, m in parts))


def to_pnf_alternation_preserving(f: Formula) -> PrenexFormula:
    """Prenex form with the same number of quantifier alternations as ``f``.

    Subformulas are prenexed bottom-up; at each connective the leading
    quantifier blocks of the operands are interleaved, starting with the block
    that matches the quantifier directly above.
    """
    if not F.is_negation_free(f):
        raise ValueError("normalize the formula first")
    if F.is_quantifier_free(f):
        raise ValueError("formula has no quantifiers")
    if not isinstance(f, F.Quantifier):
        raise ValueError("formula must begin with a quantifier")
    f = _ensure_apart(f)
    prefix, matrix = _alt_prenex(f, None)
    return PrenexFormula(tuple(prefix), matrix)


def alternation_preserving_passes(f: Formula) -> list[Formula]:
    """Working formulas at the first branching point of ``f``'s nesting tree.

    The first entry has every operand below the branching point already
    prenex; each later entry is the result of one more merging pass. The
    trace stops at the first entry whose nesting tree is a path (measure 0);
    plain extraction finishes that one without touching its alternations.
    """
    if not F.is_negation_free(f):
        raise ValueError("normalize the formula first")
    f = _ensure_apart(f)
    head = []
    g = f
    while isinstance(g, F.Quantifier):
        head.append((F.label_of(g), g.var))
        g = g.body
    if isinstance(g, Atom):
        return [f]
    last = head[-1][0] if head else None
    if last is None:
        raise ValueError("formula must begin with a quantifier")
    parts = [_alt_prenex(c, last) for c in g.children]
    prefixes = [p for p, _ in parts]
    matrices = [m for _, m in parts]
    out = [PrenexFormula(tuple(head), _combine(g, matrices, prefixes)).to_formula()]
    for merged, remaining in _merge_passes(prefixes, last):
        if mu_measure(F.nesting_forest(out[-1])) == 0:
            break
        body = _combine(g, matrices, remaining)
        out.append(PrenexFormula(tuple(head + merged), body).to_formula())
    return out
