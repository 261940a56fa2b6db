"""First-order formulas over the graph signature (adjacency and equality).

Variables are dense integer ids. Bound variables are renamed apart when a
formula is parsed, so every quantifier in a parsed formula binds its own id.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

ADJ, NADJ, EQ, NEQ = "adj", "nadj", "eq", "neq"
RELATIONS = (ADJ, NADJ, EQ, NEQ)
FLIP = {ADJ: NADJ, NADJ: ADJ, EQ: NEQ, NEQ: EQ}
SYMBOL = {ADJ: "~", NADJ: "!~", EQ: "=", NEQ: "!="}

EXISTS, FORALL = "E", "A"
DUAL = {EXISTS: FORALL, FORALL: EXISTS}


@dataclass(frozen=True)
class Atom:
    rel: str
    left: int
    right: int

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        if self.left == self.right:
            raise ValueError(f"atom relates variable {self.left} to itself")


@dataclass(frozen=True)
class Conj:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("empty conjunction")


@dataclass(frozen=True)
class Disj:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("empty disjunction")


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Neg:
    child: "Formula"


Formula = Union[Atom, Conj, Disj, Exists, Forall, Neg]
Quantifier = (Exists, Forall)


def conj(*parts: Formula) -> Formula:
    """Conjunction that flattens nested conjunctions and unwraps singletons."""
    flat = []
    for p in parts:
        flat.extend(p.children if isinstance(p, Conj) else (p,))
    return flat[0] if len(flat) == 1 else Conj(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat = []
    for p in parts:
        flat.extend(p.children if isinstance(p, Disj) else (p,))
    return flat[0] if len(flat) == 1 else Disj(tuple(flat))


def quant(label: str, var: int, body: Formula) -> Formula:
    return Exists(var, body) if label == EXISTS else Forall(var, body)


def label_of(f: Formula) -> str:
    return EXISTS if isinstance(f, Exists) else FORALL


# ---------------------------------------------------------------- errors

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnboundVariableError(ValueError):
    pass


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op><->|->|!~|!=|[!~=&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "op", "ident", "quant", "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ident":
            tokens.append(_Token("quant" if chunk in ("Ex", "Ax") else "ident", chunk, line, col))
        elif kind == "op":
            tokens.append(_Token("op", chunk, line, col))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(_Token("end", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser
# Surface trees use variable names; ids are assigned afterwards.
# Precedence, loosest first: <->, -> (right associative), |, &, then the
# prefix operators !, Ex v, Ax v which take the next unary formula.

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(message, tok.line, tok.column)

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            found = tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        return self.take()

    def parse(self):
        tree = self.iff()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return tree

    def _is_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def iff(self):
        left = self.implies()
        while self._is_op("<->"):
            self.take()
            right = self.implies()
            left = ("iff", left, right)
        return left

    def implies(self):
        left = self.disjunction()
        if self._is_op("->"):
            self.take()
            return ("implies", left, self.implies())
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self._is_op("|"):
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def conjunction(self):
        parts = [self.unary()]
        while self._is_op("&"):
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def unary(self):
        tok = self.peek()
        if tok.kind == "quant":
            self.take()
            var = self.take()
            if var.kind != "ident":
                self.fail("expected a variable after quantifier", var)
            return ("quant", EXISTS if tok.text == "Ex" else FORALL, var.text, self.unary(), tok)
        if tok.kind == "op" and tok.text == "!":
            self.take()
            return ("not", self.unary())
        if tok.kind == "op" and tok.text == "(":
            self.take()
            inner = self.iff()
            self.expect_op(")")
            return inner
        if tok.kind == "ident":
            return self.atom()
        self.fail(f"unexpected {tok.text or 'end of input'!r}")

    def atom(self):
        left = self.take()
        op = self.peek()
        rel = {"~": ADJ, "!~": NADJ, "=": EQ, "!=": NEQ}.get(op.text) if op.kind == "op" else None
        if rel is None:
            self.fail("expected one of '~', '!~', '=', '!='", op)
        self.take()
        right = self.take()
        if right.kind != "ident":
            self.fail("expected a variable", right)
        if left.text == right.text:
            raise FormulaSyntaxError(
                f"atom relates {left.text!r} to itself", left.line, left.column
            )
        return ("atom", rel, left, right)


def _build(tree, scope: dict, counter: list, free_names: dict) -> Formula:
    kind = tree[0]
    if kind == "atom":
        _, rel, left, right = tree
        ids = []
        for tok in (left, right):
            if tok.text in scope:
                ids.append(scope[tok.text])
            elif tok.text in free_names:
                ids.append(free_names[tok.text])
            else:
                raise UnboundVariableError(
                    f"variable {tok.text!r} is not bound (line {tok.line}, column {tok.column})"
                )
        if ids[0] == ids[1]:
            raise FormulaSyntaxError("atom relates a variable to itself", left.line, left.column)
        return Atom(rel, ids[0], ids[1])
    if kind == "quant":
        _, label, name, body, _tok = tree
        var = counter[0]
        counter[0] += 1
        inner = dict(scope)
        inner[name] = var
        return quant(label, var, _build(body, inner, counter, free_names))
    if kind == "not":
        return Neg(_build(tree[1], scope, counter, free_names))
    if kind == "and":
        return Conj(tuple(_build(t, scope, counter, free_names) for t in tree[1]))
    if kind == "or":
        return Disj(tuple(_build(t, scope, counter, free_names) for t in tree[1]))
    if kind == "implies":
        return Disj((Neg(_build(tree[1], scope, counter, free_names)),
                     _build(tree[2], scope, counter, free_names)))
    if kind == "iff":
        a, b = tree[1], tree[2]
        # each side is built twice so that bound ids stay distinct
        return Conj((
            Disj((Neg(_build(a, scope, counter, free_names)), _build(b, scope, counter, free_names))),
            Disj((Neg(_build(b, scope, counter, free_names)), _build(a, scope, counter, free_names))),
        ))
    raise AssertionError(kind)


def parse(text: str, free: Sequence[str] = ()) -> Formula:
    """Parse surface syntax into an AST.

    ``free`` whitelists free variable names; they receive ids ``0..len(free)-1``
    in the given order and bound variables are numbered after them in the order
    their quantifiers appear. Negations are kept for :func:`normalize`.
    """
    tree = _Parser(text).parse()
    free_names = {name: i for i, name in enumerate(free)}
    return _build(tree, {}, [len(free_names)], free_names)


def parse_sentence(text: str, free: Sequence[str] = ()) -> Formula:
    """Parse and normalize in one step."""
    return normalize(parse(text, free))


# ---------------------------------------------------------------- printer

def var_name(v: int) -> str:
    return f"x{v}"


def to_text(f: Formula, names=None) -> str:
    """Canonical, fully parenthesized rendering in the parser's grammar."""
    name = names.get if names else None

    def nm(v):
        return (name(v) if name else None) or var_name(v)

    def go(g):
        if isinstance(g, Atom):
            return f"({nm(g.left)} {SYMBOL[g.rel]} {nm(g.right)})"
        if isinstance(g, Conj):
            return "(" + " & ".join(go(c) for c in g.children) + ")"
        if isinstance(g, Disj):
            return "(" + " | ".join(go(c) for c in g.children) + ")"
        if isinstance(g, Exists):
            return f"(Ex {nm(g.var)} {go(g.body)})"
        if isinstance(g, Forall):
            return f"(Ax {nm(g.var)} {go(g.body)})"
        if isinstance(g, Neg):
            return f"(!{go(g.child)})"
        raise TypeError(g)

    return go(f)


# ---------------------------------------------------------------- structure

def normalize(f: Formula) -> Formula:
    """Push negations onto atoms. Negation-free input comes back unchanged."""

    def pos(g):
        if isinstance(g, Atom):
            return g
        if isinstance(g, Neg):
            return neg(g.child)
        if isinstance(g, Conj):
            return Conj(tuple(pos(c) for c in g.children))
        if isinstance(g, Disj):
            return Disj(tuple(pos(c) for c in g.children))
        if isinstance(g, Exists):
            return Exists(g.var, pos(g.body))
        if isinstance(g, Forall):
            return Forall(g.var, pos(g.body))
        raise TypeError(g)

    def neg(g):
        if isinstance(g, Atom):
            return Atom(FLIP[g.rel], g.left, g.right)
        if isinstance(g, Neg):
            return pos(g.child)
        if isinstance(g, Conj):
            return Disj(tuple(neg(c) for c in g.children))
        if isinstance(g, Disj):
            return Conj(tuple(neg(c) for c in g.children))
        if isinstance(g, Exists):
            return Forall(g.var, neg(g.body))
        if isinstance(g, Forall):
            return Exists(g.var, neg(g.body))
        raise TypeError(g)

    return pos(f)


def negate(f: Formula) -> Formula:
    return normalize(Neg(f))


def is_negation_free(f: Formula) -> bool:
    return not any(isinstance(g, Neg) for g in subformulas(f))


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (Conj, Disj)):
            stack.extend(reversed(g.children))
        elif isinstance(g, Quantifier):
            stack.append(g.body)
        elif isinstance(g, Neg):
            stack.append(g.child)


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset((f.left, f.right))
    if isinstance(f, (Conj, Disj)):
        return frozenset().union(*(free_vars(c) for c in f.children))
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Neg):
        return free_vars(f.child)
    raise TypeError(f)


def all_vars(f: Formula) -> set:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.update((g.left, g.right))
        elif isinstance(g, Quantifier):
            out.add(g.var)
    return out


def bound_vars(f: Formula) -> list:
    return [g.var for g in subformulas(f) if isinstance(g, Quantifier)]


def quantifier_count(f: Formula) -> int:
    return sum(1 for g in subformulas(f) if isinstance(g, Quantifier))


def is_quantifier_free(f: Formula) -> bool:
    return quantifier_count(f) == 0


def substitute(f: Formula, mapping: dict) -> Formula:
    """Rename free occurrences according to ``mapping`` (bound ids are left alone)."""
    if isinstance(f, Atom):
        return Atom(f.rel, mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, Conj):
        return Conj(tuple(substitute(c, mapping) for c in f.children))
    if isinstance(f, Disj):
        return Disj(tuple(substitute(c, mapping) for c in f.children))
    if isinstance(f, Quantifier):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    if isinstance(f, Neg):
        return Neg(substitute(f.child, mapping))
    raise TypeError(f)


def rename_apart(f: Formula, start: int | None = None) -> Formula:
    """Give every quantifier a fresh id, numbered in order of appearance.

    Free variables keep their ids; fresh ids start above them (or at ``start``).
    """
    free = free_vars(f)
    counter = [start if start is not None else (max(free) + 1 if free else 0)]

    def go(g, env):
        if isinstance(g, Atom):
            return Atom(g.rel, env.get(g.left, g.left), env.get(g.right, g.right))
        if isinstance(g, Conj):
            return Conj(tuple(go(c, env) for c in g.children))
        if isinstance(g, Disj):
            return Disj(tuple(go(c, env) for c in g.children))
        if isinstance(g, Quantifier):
            fresh = counter[0]
            counter[0] += 1
            return type(g)(fresh, go(g.body, {**env, g.var: fresh}))
        if isinstance(g, Neg):
            return Neg(go(g.child, env))
        raise TypeError(g)

    return go(f, {})


def is_renamed_apart(f: Formula) -> bool:
    bound = bound_vars(f)
    return len(bound) == len(set(bound)) and not (set(bound) & free_vars(f))


def require_sentence(f: Formula) -> None:
    if free_vars(f):
        raise UnboundVariableError(f"formula has free variables {sorted(free_vars(f))}")


# ---------------------------------------------------------------- nesting forest

@dataclass(frozen=True)
class NestingForest:
    labels: tuple  # label per node, EXISTS or FORALL
    parents: tuple  # parent node id or None
    roots: tuple

    def __len__(self):
        return len(self.labels)

    def children(self) -> list[list[int]]:
        kids = [[] for _ in self.labels]
        for node, parent in enumerate(self.parents):
            if parent is not None:
                kids[parent].append(node)
        return kids

    def paths(self) -> Iterator[tuple[int, ...]]:
        """Every maximal root-started path."""
        kids = self.children()
        stack = [(r,) for r in reversed(self.roots)]
        while stack:
            path = stack.pop()
            nxt = kids[path[-1]]
            if not nxt:
                yield path
            stack.extend(path + (c,) for c in reversed(nxt))

    def depth(self) -> int:
        return max((len(p) for p in self.paths()), default=0)

    def alternations(self) -> int:
        best = 0
        for path in self.paths():
            labels = [self.labels[i] for i in path]
            best = max(best, sum(a != b for a, b in zip(labels, labels[1:])))
        return best

    def level_widths(self) -> list[int]:
        """Number of nodes at each distance from the roots."""
        kids = self.children()
        widths, level = [], list(self.roots)
        while level:
            widths.append(len(level))
            level = [c for node in level for c in kids[node]]
        return widths

    def is_path(self) -> bool:
        return all(w == 1 for w in self.level_widths())


def nesting_forest(f: Formula) -> NestingForest:
    labels: list = []
    parents: list = []

    def go(g, parent) -> list[int]:
        if isinstance(g, Atom):
            return []
        if isinstance(g, (Conj, Disj)):
            return [r for c in g.children for r in go(c, parent)]
        if isinstance(g, Quantifier):
            node = len(labels)
            labels.append(label_of(g))
            parents.append(parent)
            go(g.body, node)
            return [node]
        raise TypeError(f"nesting forest needs a negation-free formula, got {type(g).__name__}")

    roots = go(f, None)
    return NestingForest(tuple(labels), tuple(parents), tuple(roots))


@dataclass(frozen=True)
class FormulaMetrics:
    depth: int
    alternations: int

    def as_dict(self) -> dict:
        return {"depth": self.depth, "alternations": self.alternations}


def metrics(f: Formula) -> FormulaMetrics:
    forest = nesting_forest(f)
    return FormulaMetrics(forest.depth(), forest.alternations())


def quantifier_depth(f: Formula) -> int:
    """Nesting depth read straight off the AST."""
    if isinstance(f, Atom):
        return 0
    if isinstance(f, (Conj, Disj)):
        return max(quantifier_depth(c) for c in f.children)
    if isinstance(f, Quantifier):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, Neg):
        return quantifier_depth(f.child)
    raise TypeError(f)


def atoms(f: Formula) -> Iterable[Atom]:
    return (g for g in subformulas(f) if isinstance(g, Atom))
