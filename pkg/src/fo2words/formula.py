"""First-order formulas over words: AST, parser, printer, NNF, measures.

Grammar (ASCII; unicode glyphs accepted as aliases):

    formula := quant | impl
    quant   := ("E" | "A") var "." formula
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := term ("&" term)*
    term    := "!" term | atom | "(" formula ")"
    atom    := letter "(" var ")" | var cmp var
             | predName "(" var ("," var)? ")" | "true" | "false"
    cmp     := "<" | ">" | "="

A single-character name applied to one variable is a letter atom; longer
names are predicate atoms.  Comparisons desugar to predicate atoms:
``x < y`` becomes ``less(x, y)``, ``x > y`` becomes ``less(y, x)`` and
``x = y`` becomes ``eq(x, y)``.  Implication desugars at parse time.
Formula files hold one formula, UTF-8, with ``#`` line comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class ParseError(ValueError):
    """Syntax error with the offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class TrueAtom:
    pass


@dataclass(frozen=True)
class FalseAtom:
    pass


@dataclass(frozen=True)
class LetterAtom:
    letter: str
    var: str


@dataclass(frozen=True)
class PredAtom:
    name: str
    args: tuple  # 1 or 2 variable names


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Exists:
    var: str
    child: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    child: "Formula"


Formula = Union[TrueAtom, FalseAtom, LetterAtom, PredAtom, Not, And, Or, Exists, Forall]

TRUE = TrueAtom()
FALSE = FalseAtom()

_QUANT_ALIASES = {"E": "E", "A": "A", "∃": "E", "∀": "A"}
_KEYWORDS = {"true", "false", "E", "A"}


# ---------------------------------------------------------------------------
# Parsing


class _Tokens:
    """Tokenizer keeping source offsets for error reports."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.pos += 1
            else:
                return

    def peek(self) -> tuple:
        """Return (kind, value, offset) without consuming."""
        self._skip()
        if self.pos >= len(self.text):
            return ("eof", "", self.pos)
        start = self.pos
        ch = self.text[start]
        if ch.isalpha() or ch == "_" or ch in _QUANT_ALIASES:
            if ch in "∃∀":
                return ("name", _QUANT_ALIASES[ch], start)
            end = start
            while end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
                end += 1
            return ("name", self.text[start:end], start)
        if self.text.startswith("->", start):
            return ("op", "->", start)
        if ch == "→":
            return ("op", "->", start)
        if ch in "&∧":
            return ("op", "&", start)
        if ch in "|∨":
            return ("op", "|", start)
        if ch in "!¬":
            return ("op", "!", start)
        if ch in "(),.<>=":
            return ("op", ch, start)
        raise ParseError(f"unexpected character {ch!r}", start)

    def next(self) -> tuple:
        kind, value, offset = self.peek()
        if kind != "eof":
            self.pos = offset + len(value) if kind == "name" else offset + len(value)
            # unicode aliases are single source chars
            if self.text[offset] in "∃∀→∧∨¬":
                self.pos = offset + 1
        return (kind, value, offset)

    def expect(self, value: str) -> None:
        kind, got, offset = self.next()
        if kind == "eof" or got != value:
            raise ParseError(f"expected {value!r}", offset)


def parse(text: str) -> Formula:
    """Parse a formula; raises ParseError with the failing offset."""
    toks = _Tokens(text)
    f = _parse_formula(toks)
    kind, value, offset = toks.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {value!r}", offset)
    return f


def parse_file(path: str) -> Formula:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _parse_formula(toks: _Tokens) -> Formula:
    kind, value, offset = toks.peek()
    if kind == "name" and value in _QUANT_ALIASES:
        toks.next()
        vkind, var, voff = toks.next()
        if vkind != "name" or var in _KEYWORDS:
            raise ParseError("expected variable after quantifier", voff)
        toks.expect(".")
        body = _parse_formula(toks)
        return Exists(var, body) if _QUANT_ALIASES[value] == "E" else Forall(var, body)
    return _parse_impl(toks)


def _parse_impl(toks: _Tokens) -> Formula:
    left = _parse_or(toks)
    kind, value, _ = toks.peek()
    if kind == "op" and value == "->":
        toks.next()
        right = _parse_impl(toks)
        return Or((Not(left), right))
    return left


def _parse_or(toks: _Tokens) -> Formula:
    parts = [_parse_and(toks)]
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value == "|":
            toks.next()
            parts.append(_parse_and(toks))
        else:
            break
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_and(toks: _Tokens) -> Formula:
    parts = [_parse_term(toks)]
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value == "&":
            toks.next()
            parts.append(_parse_term(toks))
        else:
            break
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_term(toks: _Tokens) -> Formula:
    kind, value, offset = toks.peek()
    if kind == "op" and value == "!":
        toks.next()
        return Not(_parse_term(toks))
    if kind == "op" and value == "(":
        toks.next()
        inner = _parse_formula(toks)
        toks.expect(")")
        return inner
    if kind == "name" and value in _QUANT_ALIASES:
        raise ParseError("quantifier must be parenthesized here", offset)
    return _parse_atom(toks)


def _parse_atom(toks: _Tokens) -> Formula:
    kind, value, offset = toks.next()
    if kind != "name":
        raise ParseError(f"expected atom, got {value!r}" if value else "expected atom", offset)
    if value == "true":
        return TRUE
    if value == "false":
        return FALSE
    nkind, nvalue, noffset = toks.peek()
    if nkind == "op" and nvalue == "(":
        toks.next()
        args = [_expect_var(toks)]
        k2, v2, _ = toks.peek()
        if k2 == "op" and v2 == ",":
            toks.next()
            args.append(_expect_var(toks))
        toks.expect(")")
        if len(value) == 1 and len(args) == 1:
            return LetterAtom(value, args[0])
        return PredAtom(value, tuple(args))
    if nkind == "op" and nvalue in "<>=":
        toks.next()
        other = _expect_var(toks)
        if nvalue == "<":
            return PredAtom("less", (value, other))
        if nvalue == ">":
            return PredAtom("less", (other, value))
        return PredAtom("eq", (value, other))
    raise ParseError("expected '(' or comparison after name", noffset)


def _expect_var(toks: _Tokens) -> str:
    kind, value, offset = toks.next()
    if kind != "name" or value in _KEYWORDS:
        raise ParseError("expected variable", offset)
    return value


# ---------------------------------------------------------------------------
# Printing


def to_text(f: Formula) -> str:
    """Render a formula so that parse(to_text(f)) == f."""
    if isinstance(f, TrueAtom):
        return "true"
    if isinstance(f, FalseAtom):
        return "false"
    if isinstance(f, LetterAtom):
        return f"{f.letter}({f.var})"
    if isinstance(f, PredAtom):
        if f.name == "less" and len(f.args) == 2 and f.args[0] != f.args[1]:
            return f"{f.args[0]} < {f.args[1]}"
        if f.name == "eq" and len(f.args) == 2 and f.args[0] != f.args[1]:
            return f"{f.args[0]} = {f.args[1]}"
        return f"{f.name}({', '.join(f.args)})"
    if isinstance(f, Not):
        return "!" + _wrap(f.child, atom_ok=True)
    if isinstance(f, And):
        return " & ".join(_wrap(c, and_ok=False) for c in f.children)
    if isinstance(f, Or):
        return " | ".join(_wrap(c, and_ok=True) for c in f.children)
    if isinstance(f, Exists):
        return f"E {f.var}. {to_text(f.child)}"
    if isinstance(f, Forall):
        return f"A {f.var}. {to_text(f.child)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, and_ok: bool = False, atom_ok: bool = False) -> str:
    simple = isinstance(f, (TrueAtom, FalseAtom, LetterAtom, PredAtom, Not))
    if simple or (and_ok and isinstance(f, And)):
        return to_text(f)
    if atom_ok and not simple:
        return "(" + to_text(f) + ")"
    if isinstance(f, (Exists, Forall, Or)) or isinstance(f, And):
        return "(" + to_text(f) + ")"
    return to_text(f)


# ---------------------------------------------------------------------------
# Structure queries


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from walk(f.child)
    elif isinstance(f, (And, Or)):
        for c in f.children:
            yield from walk(c)
    elif isinstance(f, (Exists, Forall)):
        yield from walk(f.child)


def variables(f: Formula) -> set:
    """All variable names occurring anywhere (bound or free)."""
    out = set()
    for node in walk(f):
        if isinstance(node, LetterAtom):
            out.add(node.var)
        elif isinstance(node, PredAtom):
            out.update(node.args)
        elif isinstance(node, (Exists, Forall)):
            out.add(node.var)
    return out


def free_variables(f: Formula, bound: frozenset = frozenset()) -> set:
    if isinstance(f, LetterAtom):
        return set() if f.var in bound else {f.var}
    if isinstance(f, PredAtom):
        return {v for v in f.args if v not in bound}
    if isinstance(f, Not):
        return free_variables(f.child, bound)
    if isinstance(f, (And, Or)):
        out: set = set()
        for c in f.children:
            out |= free_variables(c, bound)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.child, bound | {f.var})
    return set()


def is_closed(f: Formula) -> bool:
    return not free_variables(f)


def predicate_names(f: Formula) -> set:
    return {n.name for n in walk(f) if isinstance(n, PredAtom)}


# ---------------------------------------------------------------------------
# Negation normal form


def to_nnf(f: Formula) -> Formula:
    """Push negations to the leaves; equivalent to the input."""
    if isinstance(f, Not):
        return _neg(f.child)
    if isinstance(f, And):
        return And(tuple(to_nnf(c) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(to_nnf(c) for c in f.children))
    if isinstance(f, Exists):
        return Exists(f.var, to_nnf(f.child))
    if isinstance(f, Forall):
        return Forall(f.var, to_nnf(f.child))
    return f


def _neg(f: Formula) -> Formula:
    if isinstance(f, TrueAtom):
        return FALSE
    if isinstance(f, FalseAtom):
        return TRUE
    if isinstance(f, Not):
        return to_nnf(f.child)
    if isinstance(f, And):
        return Or(tuple(_neg(c) for c in f.children))
    if isinstance(f, Or):
        return And(tuple(_neg(c) for c in f.children))
    if isinstance(f, Exists):
        return Forall(f.var, _neg(f.child))
    if isinstance(f, Forall):
        return Exists(f.var, _neg(f.child))
    return Not(f)  # atom


# ---------------------------------------------------------------------------
# Metrics


@dataclass(frozen=True)
class FormulaMetrics:
    variable_count: int
    quantifier_depth: int
    alternation_depth: int
    is_two_variable: bool


def metrics(f: Formula) -> FormulaMetrics:
    """Quantifier depth, path alternation count (on the NNF), variable count.

    Alternation is counted per root-to-leaf path as the number of
    existential/universal switches between consecutive quantifier nodes,
    maximized over paths, after normalizing negations to the leaves.
    """
    nvars = len(variables(f))
    g = to_nnf(f)
    return FormulaMetrics(
        variable_count=nvars,
        quantifier_depth=_qdepth(g),
        alternation_depth=_alternations(g, None),
        is_two_variable=nvars <= 2,
    )


def _qdepth(f: Formula) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + _qdepth(f.child)
    if isinstance(f, Not):
        return _qdepth(f.child)
    if isinstance(f, (And, Or)):
        return max((_qdepth(c) for c in f.children), default=0)
    return 0


def _alternations(f: Formula, last: str | None) -> int:
    if isinstance(f, Exists):
        bump = 1 if last == "A" else 0
        return bump + _alternations(f.child, "E")
    if isinstance(f, Forall):
        bump = 1 if last == "E" else 0
        return bump + _alternations(f.child, "A")
    if isinstance(f, Not):
        return _alternations(f.child, last)
    if isinstance(f, (And, Or)):
        return max((_alternations(c, last) for c in f.children), default=0)
    return 0
