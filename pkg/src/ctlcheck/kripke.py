"""Finite Kripke structures, the model-file parser and the pre-image transformers.

States are identified by their index in declaration order. A ``StateSet`` is a
``frozenset`` of such indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import AbstractSet, FrozenSet, Iterable, Mapping, Sequence

StateSet = FrozenSet[int]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

EMPTY: StateSet = frozenset()


class ModelError(ValueError):
    """Raised for malformed model files or inconsistent structures."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class KripkeStructure:
    """A finite Kripke structure ``(S, ->, L)``.

    ``names[i]`` is the name of state ``i``. ``transitions`` holds index pairs and
    ``labels[i]`` the atoms true in state ``i``. The transition relation does not
    have to be total.
    """

    names: tuple[str, ...]
    transitions: frozenset[tuple[int, int]]
    labels: tuple[frozenset[str], ...]
    _succ: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _pred: tuple[frozenset[int], ...] = field(init=False, repr=False)
    _index: Mapping[str, int] = field(init=False, repr=False)
    _all: StateSet = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ModelError("duplicate state name")
        if len(self.labels) != n:
            raise ModelError("labels must give one atom set per state")
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[set[int]] = [set() for _ in range(n)]
        for src, dst in self.transitions:
            if not (0 <= src < n and 0 <= dst < n):
                raise ModelError(f"transition {src}->{dst} references an unknown state")
            succ[src].append(dst)
            pred[dst].add(src)
        object.__setattr__(self, "_succ", tuple(tuple(sorted(s)) for s in succ))
        object.__setattr__(self, "_pred", tuple(frozenset(p) for p in pred))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})
        object.__setattr__(self, "_all", frozenset(range(n)))

    @classmethod
    def build(
        cls,
        names: Sequence[str],
        transitions: Iterable[tuple[str, str]] = (),
        labels: Mapping[str, Iterable[str]] | None = None,
    ) -> "KripkeStructure":
        """Build a structure from state names rather than indices."""
        index = {name: i for i, name in enumerate(names)}
        if len(index) != len(names):
            raise ModelError("duplicate state name")
        labels = labels or {}
        for name in labels:
            if name not in index:
                raise ModelError(f"label for undeclared state {name!r}")
        try:
            trans = frozenset((index[a], index[b]) for a, b in transitions)
        except KeyError as exc:
            raise ModelError(f"transition references undeclared state {exc.args[0]!r}") from None
        return cls(
            names=tuple(names),
            transitions=trans,
            labels=tuple(frozenset(labels.get(name, ())) for name in names),
        )

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def states(self) -> StateSet:
        return self._all

    @property
    def atoms(self) -> frozenset[str]:
        return frozenset().union(*self.labels)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ModelError(f"unknown state {name!r}") from None

    def name(self, state: int) -> str:
        return self.names[state]

    def successors(self, state: int) -> tuple[int, ...]:
        """Successors of ``state`` in index order."""
        return self._succ[state]

    def predecessors(self, state: int) -> StateSet:
        return self._pred[state]

    def holds(self, atom: str, state: int) -> bool:
        return atom in self.labels[state]

    def sorted_names(self, states: AbstractSet[int]) -> list[str]:
        return [self.names[i] for i in sorted(states)]

    def to_text(self) -> str:
        """Render in the model-file format accepted by :func:`parse_model`."""
        lines = ["states: " + " ".join(self.names)]
        labelled = [
            f"{self.names[i]}: {' '.join(sorted(lab))}".rstrip()
            for i, lab in enumerate(self.labels)
            if lab
        ]
        if labelled:
            lines.append("labels: " + "; ".join(labelled))
        if self.transitions:
            lines.append(
                "trans: "
                + "; ".join(f"{self.names[a]} -> {self.names[b]}" for a, b in sorted(self.transitions))
            )
        return "\n".join(lines) + "\n"


def successors(m: KripkeStructure, s: int) -> StateSet:
    return frozenset(m.successors(s))


def pre_exists(m: KripkeStructure, y: AbstractSet[int]) -> StateSet:
    """States with at least one successor in ``y``."""
    out: set[int] = set()
    for t in y:
        out |= m.predecessors(t)
    return frozenset(out)


def pre_forall(m: KripkeStructure, y: AbstractSet[int]) -> StateSet:
    """States all of whose successors lie in ``y``; deadlock states always qualify."""
    y = frozenset(y)
    return frozenset(s for s in range(m.size) if y.issuperset(m.successors(s)))


# -- model file parser ---------------------------------------------------------

_KEYWORDS = ("states", "labels", "trans")


class _Line:
    """Cursor over one source line, tracking 1-based columns."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ModelError:
        return ModelError(message, self.lineno, (self.pos if pos is None else pos) + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def expect(self, token: str) -> None:
        if not self.peek(token):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def ident(self, what: str) -> tuple[str, int]:
        self.skip_ws()
        match = IDENT.match(self.text, self.pos)
        if match is None:
            raise self.error(f"expected {what}")
        self.pos = match.end()
        return match.group(), match.start()


def parse_model(text: str) -> KripkeStructure:
    """Parse the line-oriented model format.

    ``states:`` must be the first non-comment line; ``labels:`` and ``trans:``
    lines are optional and may repeat, entries accumulate.
    """
    names: list[str] | None = None
    index: dict[str, int] = {}
    labels: dict[int, set[str]] = {}
    trans: set[tuple[int, int]] = set()

    def state_ref(line: _Line) -> int:
        name, col = line.ident("state name")
        if name not in index:
            raise line.error(f"undeclared state {name!r}", col)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _Line(raw.split("#", 1)[0].rstrip(), lineno)
        if line.at_end():
            continue
        keyword, col = line.ident("'states:', 'labels:' or 'trans:'")
        if keyword not in _KEYWORDS:
            raise line.error(f"unknown section {keyword!r}", col)
        line.expect(":")
        if keyword == "states":
            if names is not None:
                raise line.error("duplicate 'states:' line", col)
            names = []
            while not line.at_end():
                name, ncol = line.ident("state name")
                if name in index:
                    raise line.error(f"duplicate state name {name!r}", ncol)
                index[name] = len(names)
                names.append(name)
            if not names:
                raise line.error("'states:' declares no states")
            continue
        if names is None:
            raise line.error("the first line must be 'states:'", col)
        if keyword == "labels":
            while True:
                s = state_ref(line)
                line.expect(":")
                atoms = labels.setdefault(s, set())
                while not line.at_end() and not line.peek(";"):
                    atoms.add(line.ident("atom")[0])
                if line.at_end():
                    break
                line.expect(";")
        else:
            while True:
                src = state_ref(line)
                line.expect("->")
                dst = state_ref(line)
                trans.add((src, dst))
                if line.at_end():
                    break
                line.expect(";")

    if names is None:
        raise ModelError("missing 'states:' line", 1, 1)
    return KripkeStructure(
        names=tuple(names),
        transitions=frozenset(trans),
        labels=tuple(frozenset(labels.get(i, ())) for i in range(len(names))),
    )
