"""CTL- formulas: AST, parser, printer and negation normalisation.

The parser returns *extended* formulas, which may contain :class:`Not` anywhere.
:func:`push_negations` turns them into state formulas where negation only sits
on atoms (:class:`NegAtom`); the prover and the oracle accept only those.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

QUANTIFIERS = ("A", "E")
MODALITIES = ("X", "F", "G")
TEMPORAL_OPS = tuple(q + m for q in QUANTIFIERS for m in MODALITIES)


def _node(cls):
    """Frozen dataclass with a hash computed once; formulas are dictionary keys in hot loops."""
    check = cls.__dict__.get("__post_init__")
    names = list(cls.__annotations__)

    def __post_init__(self):
        if check is not None:
            check(self)
        object.__setattr__(self, "_hash", hash((cls.__name__, *(getattr(self, n) for n in names))))

    cls.__post_init__ = __post_init__
    cls = dataclass(frozen=True)(cls)
    cls.__hash__ = lambda self: self._hash
    return cls


@_node
class Atom:
    name: str


@_node
class NegAtom:
    name: str


@_node
class And:
    left: "Formula"
    right: "Formula"


@_node
class Or:
    left: "Formula"
    right: "Formula"


@_node
class Temporal:
    quantifier: str
    modality: str
    body: "Formula"

    def __post_init__(self) -> None:
        if self.quantifier not in QUANTIFIERS or self.modality not in MODALITIES:
            raise ValueError(f"unknown temporal operator {self.quantifier}{self.modality}")

    @property
    def op(self) -> str:
        return self.quantifier + self.modality


@_node
class Not:
    body: "Formula"


Formula = Union[Atom, NegAtom, And, Or, Temporal, Not]


def EX(f: Formula) -> Temporal:
    return Temporal("E", "X", f)


def AX(f: Formula) -> Temporal:
    return Temporal("A", "X", f)


def EF(f: Formula) -> Temporal:
    return Temporal("E", "F", f)


def AF(f: Formula) -> Temporal:
    return Temporal("A", "F", f)


def EG(f: Formula) -> Temporal:
    return Temporal("E", "G", f)


def AG(f: Formula) -> Temporal:
    return Temporal("A", "G", f)


def is_fixpoint(f: Formula) -> bool:
    """True for the four operators whose sequents carry tags (EF, AF, EG, AG)."""
    return isinstance(f, Temporal) and f.modality != "X"


def is_state_formula(f: Formula) -> bool:
    """True iff ``f`` contains no general negation."""
    if isinstance(f, (Atom, NegAtom)):
        return True
    if isinstance(f, (And, Or)):
        return is_state_formula(f.left) and is_state_formula(f.right)
    if isinstance(f, Temporal):
        return is_state_formula(f.body)
    return False


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield ``f`` and all its subformulas, pre-order."""
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Temporal, Not)):
        yield from subformulas(f.body)


def formula_size(f: Formula) -> int:
    if isinstance(f, (Atom, NegAtom)):
        return 1
    if isinstance(f, (And, Or)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


def push_negations(f: Formula, negate: bool = False) -> Formula:
    """Return the negation normal form of ``f`` (or of its negation)."""
    if isinstance(f, Not):
        return push_negations(f.body, not negate)
    if isinstance(f, Atom):
        return NegAtom(f.name) if negate else f
    if isinstance(f, NegAtom):
        return Atom(f.name) if negate else f
    if isinstance(f, (And, Or)):
        left = push_negations(f.left, negate)
        right = push_negations(f.right, negate)
        if negate:
            return Or(left, right) if isinstance(f, And) else And(left, right)
        return type(f)(left, right)
    body = push_negations(f.body, negate)
    if not negate:
        return Temporal(f.quantifier, f.modality, body)
    # not EX = AX not, not EF = AG not, not EG = AF not (and the A-duals)
    quantifier = "A" if f.quantifier == "E" else "E"
    modality = {"X": "X", "F": "G", "G": "F"}[f.modality]
    return Temporal(quantifier, modality, body)


# -- printing ------------------------------------------------------------------


def _unary(f: Formula) -> str:
    if isinstance(f, (Atom, NegAtom)):
        return to_string(f)
    return f"({to_string(f)})"


def to_string(f: Formula) -> str:
    """Render ``f`` in the concrete syntax; ``parse_formula`` inverts this."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return "!" + f.name
    if isinstance(f, Not):
        # "!p" would read back as a negated atom
        return f"!({f.body.name})" if isinstance(f.body, Atom) else "!" + _unary(f.body)
    if isinstance(f, Temporal):
        return f"{f.op} {_unary(f.body)}"
    if isinstance(f, And):
        left = to_string(f.left) if isinstance(f.left, And) else _unary(f.left)
        return f"{left} & {_unary(f.right)}"
    if isinstance(f, Or):
        left = to_string(f.left) if isinstance(f.left, (And, Or)) else _unary(f.left)
        right = to_string(f.right) if isinstance(f.right, And) else _unary(f.right)
        return f"{left} | {right}"
    raise TypeError(f"not a formula: {f!r}")


# -- parsing -------------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"column {position + 1}: {message}")


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)|(\S)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        if match.group(1):
            word = match.group(1)
            kind = "op" if word in TEMPORAL_OPS else "atom"
            tokens.append((kind, word, match.start(1)))
        elif match.group(2):
            char = match.group(2)
            if char not in "()!&|":
                raise FormulaSyntaxError(f"unknown operator {char!r}", match.start(2))
            tokens.append((char, char, match.start(2)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def formula(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, text, pos = self.take()
        if kind == "!":
            if self.peek()[0] == "atom":
                return NegAtom(self.take()[1])
            return Not(self.unary())
        if kind == "op":
            return Temporal(text[0], text[1], self.unary())
        if kind == "atom":
            return Atom(text)
        if kind == "(":
            f = self.formula()
            close = self.take()
            if close[0] != ")":
                raise FormulaSyntaxError("expected ')'", close[2])
            return f
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of formula", pos)
        raise FormulaSyntaxError(f"unexpected {text!r}", pos)


def parse_formula(text: str) -> Formula:
    """Parse the concrete syntax.

    ``!`` and the prefixes ``EX AX EF AF EG AG`` bind tightest, then ``&``, then
    ``|``; binary operators associate to the left. ``!`` applied directly to an
    atom yields :class:`NegAtom`, otherwise :class:`Not`.
    """
    parser = _Parser(text)
    f = parser.formula()
    kind, tok, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)
    return f


def parse_state_formula(text: str) -> Formula:
    """Parse and normalise to a negation-normal state formula."""
    return push_negations(parse_formula(text))
