"""Named sentences used by the CLI and the test-suite."""
from __future__ import annotations

from .formula import Formula, parse_sentence

THEOREM1_TEXT = """
Ex x1 Ex x2 (
  (Ex x3 Ex x4 (x1 ~ x2 & x1 ~ x3 & x1 ~ x4 & x2 ~ x3 & x2 ~ x4 & x3 ~ x4))
  & (Ax y1 (
      y1 ~ x1
      | y1 ~ x2
      | (Ax y2 !(y2 ~ x1 & y2 ~ y1))
      | (Ex z (z ~ x1 & z ~ x2 & (Ax u (!(u ~ z & u ~ y1) | u ~ x1 | u ~ x2))))
    ))
)
"""

THEOREM1_PNF_TEXT = """
Ex x1 Ex x2 Ex x3 Ex x4 Ax y1 Ax y2 Ex z Ax u (
  (x1 ~ x2 & x1 ~ x3 & x1 ~ x4 & x2 ~ x3 & x2 ~ x4 & x3 ~ x4)
  & (
      y1 ~ x1
      | y1 ~ x2
      | !(y2 ~ x1 & y2 ~ y1)
      | (z ~ x1 & z ~ x2 & !(u ~ z & u ~ y1))
      | u ~ x1
      | u ~ x2
    )
)
"""

# Small sentences, each led by a quantifier: at most four quantifiers,
# mixing nesting shapes, connectives and all four atom kinds.
SMALL_TEXTS = (
    "Ex a Ex b (a ~ b)",
    "Ax a Ax b (a = b | a ~ b)",
    "Ax a Ex b (a ~ b)",
    "Ex a Ax b (a = b | a ~ b)",
    "Ex a Ex b Ex c (a ~ b & b ~ c & a ~ c)",
    "Ax a Ex b Ex c (b != c & a ~ b & a ~ c)",
    "Ex a ((Ex b a ~ b) & (Ax c (a = c | a !~ c)))",
    "Ex a ((Ex b a ~ b) & (Ex c (c != a & a !~ c)))",
    "Ex a ((Ax b (a = b | a ~ b)) | (Ax c Ex d (c !~ d & c != d)))",
    "Ax a ((Ex b a ~ b) | (Ax c (a = c | a !~ c)))",
    "Ex a Ax b Ex c (b = a | (c ~ a & c ~ b))",
    "Ax a Ax b (a = b | a ~ b | (Ex c (c ~ a & c ~ b)))",
    "Ex a Ex b (a != b & a !~ b & (Ax c (c ~ a | c ~ b | c = a | c = b)))",
    "Ax a Ex b Ax c (a ~ b & (c = a | c = b | c !~ b))",
    "Ex e ((Ex a (a ~ e)) & (Ex c Ax d (c = d | c !~ d)))",
    "Ex a (Ax b (a = b | a ~ b) & (Ex c Ex d (c ~ d & c != a)))",
    "Ax a Ex b Ax c Ex d (a ~ b & (c ~ d | c = a))",
    "Ex a Ex b Ex c Ex d (a ~ b & b ~ c & c ~ d & a !~ c & b !~ d & a != d)",
    "Ax a (Ex b (a ~ b & (Ax c (c = a | c !~ b))) | (Ax d (a = d | a !~ d)))",
    "Ex a Ex b (a = b & (Ax c (c = a | c ~ a)))",
)

_NAMED = {"theorem1": THEOREM1_TEXT, "theorem1-pnf": THEOREM1_PNF_TEXT}
NAMES = tuple(_NAMED)


def get(name: str) -> Formula:
    try:
        text = _NAMED[name]
    except KeyError:
        raise KeyError(f"unknown corpus formula {name!r}; choose from {', '.join(NAMES)}") from None
    return parse_sentence(text)


def theorem1() -> Formula:
    return get("theorem1")


def theorem1_pnf() -> Formula:
    return get("theorem1-pnf")


def small_corpus() -> list[Formula]:
    return [parse_sentence(t) for t in SMALL_TEXTS]
