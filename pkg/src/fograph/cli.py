"""Command-line front end: ``fograph <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import corpus, density, efgame, randexp, transform
from . import formula as F
from .graphcore import Graph, PatternPair, read_graph
from .modelcheck import EvaluationTimeout, models


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _load_formula(ref: str) -> F.Formula:
    """``corpus:<name>`` or a path to a formula file."""
    if ref.startswith("corpus:"):
        return corpus.get(ref.split(":", 1)[1])
    with open(ref, encoding="utf-8") as fh:
        return F.parse_sentence(fh.read())


def _int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 3/4, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("alpha must be positive")
    return value


def _pattern(args) -> PatternPair:
    return PatternPair(read_graph(args.graph), args.roots)


# ---------------------------------------------------------------- commands

def cmd_parse(args):
    f = _load_formula(args.formula)
    text = F.to_text(f)
    return {"formula": text}, text


def cmd_metrics(args):
    m = F.metrics(_load_formula(args.formula)).as_dict()
    return m, _compact(m)


def _prenex_report(pf: transform.PrenexFormula):
    text = F.to_text(pf.to_formula())
    m = F.metrics(pf.to_formula()).as_dict()
    return {"formula": text, "prefix": "".join(pf.labels), **m}, text


def cmd_pnf(args):
    return _prenex_report(transform.to_pnf(_load_formula(args.formula)))


def cmd_nepnf(args):
    f = _load_formula(args.formula)
    try:
        pf = transform.PrenexFormula.from_formula(f)
    except ValueError:
        pf = transform.to_pnf(f)
    return _prenex_report(transform.to_nepnf(pf))


def cmd_pnf_alt(args):
    return _prenex_report(transform.to_pnf_alternation_preserving(_load_formula(args.formula)))


def cmd_density(args):
    value = density.format_fraction(density.max_density(read_graph(args.graph)))
    return {"density": value}, value


def cmd_reldensity(args):
    value = density.format_fraction(density.rel_density(_pattern(args)))
    return {"relative_density": value}, value


def cmd_safe(args):
    value = density.is_safe(_pattern(args), args.alpha)
    return {"safe": value}, str(value).lower()


def cmd_rigid(args):
    value = density.is_rigid(_pattern(args), args.alpha)
    return {"rigid": value}, str(value).lower()


def cmd_closure(args):
    g = read_graph(args.graph)
    order = None
    if args.seed is not None:
        rng = randexp.Xorshift64Star(args.seed)
        order = list(range(g.n))
        for i in range(g.n - 1, 0, -1):  # Fisher-Yates
            j = rng.next_u64() % (i + 1)
            order[i], order[j] = order[j], order[i]
    chain = density.closure(g, args.base, args.t, args.alpha, order=order)
    verts = sorted(chain.vertices)
    steps = [sorted(s) for s in chain.steps]
    return {"closure": verts, "steps": steps}, " ".join(map(str, verts))


def cmd_check(args):
    g = read_graph(args.graph)
    f = _load_formula(args.formula)
    value = models(g, f, timeout=args.timeout)
    return {"satisfied": value}, str(value).lower()


def cmd_game(args):
    g, h = read_graph(args.g), read_graph(args.h)
    spec = efgame.GameSpec.parse(args.rounds, args.alt_mode)
    outcome = efgame.solve(g, h, spec)
    report = {"winner": outcome.winner}
    if args.synthesize and outcome.winner == efgame.SPOILER:
        report["sentence"] = F.to_text(efgame.synthesize_distinguishing(g, h, spec))
    return report, _compact(report)


def _table(est: randexp.SpectrumEstimate, out: str):
    text = est.to_csv().rstrip("\n") if out == "csv" else est.to_json()
    return json.loads(est.to_json()), text


def cmd_probe(args):
    f = _load_formula(args.formula)
    est = randexp.spectrum_probe(f, args.alpha, args.n, args.trials, args.seed, timeout=args.timeout)
    return _table(est, args.out)


_PROPERTIES = ("triangle", "no-isolated", "sentence:<file>", "subgraph:<graph-file>",
               "extension:<graph-file>:<roots>")


def _property(spec: str) -> randexp.Property:
    kind, _, rest = spec.partition(":")
    if kind == "triangle" and not rest:
        return randexp.Property.subgraph(Graph.complete(3), "triangle")
    if kind == "no-isolated" and not rest:
        return randexp.Property.extension(randexp.neighbor_pattern())
    if kind == "sentence" and rest:
        return randexp.Property.sentence(_load_formula(rest), spec)
    if kind == "subgraph" and rest:
        return randexp.Property.subgraph(read_graph(rest), spec)
    if kind == "extension" and rest:
        path, _, roots = rest.rpartition(":")
        if not path:
            raise ValueError("extension property needs <graph-file>:<roots>")
        return randexp.Property.extension(PatternPair(read_graph(path), _int_list(roots)), spec)
    raise ValueError(f"unknown property {spec!r}; use one of {', '.join(_PROPERTIES)}")


def cmd_estimate(args):
    cfg = randexp.ExperimentConfig(args.n, args.alpha, args.trials, args.seed,
                                   _property(args.property), args.timeout)
    return _table(randexp.estimate(cfg), args.out)


def cmd_corpus(args):
    if args.name is None:
        return {"names": list(corpus.NAMES)}, "\n".join(corpus.NAMES)
    text = F.to_text(corpus.get(args.name))
    return {"name": args.name, "formula": text}, text


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fograph", description="First-order sentences on graphs.")
    parser.add_argument("--json", action="store_true", help="print results as JSON")
    # accepted after the subcommand too, without resetting a flag given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print results as JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    formula_help = "formula file (.fo) or corpus:<name>"
    for name, func, help_text in (
        ("parse", cmd_parse, "parse and print a sentence in normal form"),
        ("metrics", cmd_metrics, "quantifier depth and alternation count"),
        ("pnf", cmd_pnf, "prenex form by outward extraction"),
        ("nepnf", cmd_nepnf, "prenex form with distinct witnesses"),
        ("pnf-alt", cmd_pnf_alt, "prenex form keeping the alternation count"),
    ):
        add(name, func, help_text).add_argument("formula", help=formula_help)

    add("density", cmd_density, "maximal density e/v").add_argument("--graph", required=True)

    for name, func, help_text, needs_alpha in (
        ("reldensity", cmd_reldensity, "maximal relative density over the roots", False),
        ("safe", cmd_safe, "is the pair safe for alpha", True),
        ("rigid", cmd_rigid, "is the pair rigid for alpha", True),
    ):
        p = add(name, func, help_text)
        p.add_argument("--graph", required=True, help="pattern graph file")
        p.add_argument("--roots", type=_int_list, required=True, help="comma-separated root vertices")
        if needs_alpha:
            p.add_argument("--alpha", type=_fraction, required=True)

    p = add("closure", cmd_closure, "t-closure of a vertex set")
    p.add_argument("--graph", required=True)
    p.add_argument("--base", type=_int_list, required=True, help="comma-separated base vertices")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--seed", type=int, help="shuffle the candidate order with this seed")

    p = add("check", cmd_check, "does the graph satisfy the sentence")
    p.add_argument("graph")
    p.add_argument("formula", help=formula_help)
    p.add_argument("--timeout", type=float)

    p = add("game", cmd_game, "solve the Ehrenfeucht game on two graphs")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--alt-mode", default="plain", help="plain, atmost:k or exact:k")
    p.add_argument("--synthesize", action="store_true", help="emit a distinguishing sentence")

    def add_sampling(p):
        p.add_argument("--alpha", type=_fraction, required=True)
        p.add_argument("--n", type=_int_list, required=True, help="comma-separated sizes")
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", choices=("csv", "json"), default="csv")
        p.add_argument("--timeout", type=float, default=randexp.DEFAULT_TIMEOUT,
                       help="seconds per trial")

    p = add("probe", cmd_probe, "estimate P(G(n, n^-alpha) satisfies the sentence)")
    p.add_argument("--formula", required=True, help=formula_help)
    add_sampling(p)

    p = add("estimate", cmd_estimate, "estimate the probability of a graph property")
    p.add_argument("--property", required=True, help=", ".join(_PROPERTIES))
    add_sampling(p)

    add("corpus", cmd_corpus, "print a named sentence").add_argument(
        "name", nargs="?", help=", ".join(corpus.NAMES))
    return parser


_DOMAIN_ERRORS = (ValueError, KeyError, OSError, EvaluationTimeout, F.UnboundVariableError)


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        report, text = args.func(args)
    except _DOMAIN_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if args.json:
            print(_compact({"error": type(exc).__name__, "message": message}))
        else:
            print(f"fograph {args.command}: {message}", file=sys.stderr)
        return 1
    print(_compact(report) if args.json else text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
