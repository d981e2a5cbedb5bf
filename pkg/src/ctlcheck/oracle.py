"""Global fixed-point semantics of tagged CTL- formulas.

This is the ground truth the prover is tested against. A tag ``U`` is removed
from least-fixed-point bodies and added to greatest-fixed-point bodies::

    [[EF f]]_U = mu Y. ([[f]] | pre_exists(Y)) - U
    [[AF f]]_U = mu Y. ([[f]] | pre_forall(Y)) - U
    [[EG f]]_U = nu Y. ([[f]] & pre_exists(Y)) | U
    [[AG f]]_U = nu Y. ([[f]] & pre_forall(Y)) | U

Only those four operators may carry a non-empty tag.
"""

from __future__ import annotations

from typing import AbstractSet, Callable, Literal

from .formula import And, Atom, Formula, NegAtom, Or, Temporal, is_fixpoint
from .kripke import EMPTY, KripkeStructure, StateSet, pre_exists, pre_forall

MonotoneBody = Callable[[StateSet], StateSet]


class FixedPointError(RuntimeError):
    """Iteration failed to stabilise; the body was not monotone."""


class TagError(ValueError):
    """A non-empty tag was supplied for a formula that cannot carry one."""


def lfp(body: MonotoneBody, carrier: AbstractSet[int]) -> StateSet:
    """Least fixed point of ``body`` over subsets of ``carrier``, by Kleene iteration."""
    current: StateSet = EMPTY
    for _ in range(len(carrier) + 1):
        nxt = frozenset(body(current))
        if nxt == current:
            return current
        current = nxt
    raise FixedPointError("least fixed point iteration did not stabilise")


def gfp(body: MonotoneBody, carrier: AbstractSet[int]) -> StateSet:
    """Greatest fixed point of ``body`` over subsets of ``carrier``."""
    current = frozenset(carrier)
    for _ in range(len(carrier) + 1):
        nxt = frozenset(body(current))
        if nxt == current:
            return current
        current = nxt
    raise FixedPointError("greatest fixed point iteration did not stabilise")


def fixpoint_body(
    m: KripkeStructure, f: Temporal, tag: AbstractSet[int] = EMPTY, cache: dict | None = None
) -> tuple[MonotoneBody, Literal["mu", "nu"]]:
    """The monotone body whose extremal fixed point is ``[[f]]_tag``."""
    if not is_fixpoint(f):
        raise TagError(f"{f.op} has no fixed-point body")
    base = denotation(m, f.body, cache=cache)
    pre = pre_exists if f.quantifier == "E" else pre_forall
    tag = frozenset(tag)
    if f.modality == "F":
        return (lambda y: (base | pre(m, y)) - tag), "mu"
    return (lambda y: (base & pre(m, y)) | tag), "nu"


def denotation(
    m: KripkeStructure, f: Formula, tag: AbstractSet[int] = EMPTY, cache: dict | None = None
) -> StateSet:
    """The set of states of ``m`` satisfying ``f`` relative to ``tag``.

    ``cache``, if given, memoises empty-tag results of subformulas; it must
    only ever be used with the one model ``m``.
    """
    if tag:
        if not is_fixpoint(f):
            raise TagError("only EF, AF, EG and AG formulas may carry a non-empty tag")
        return _denote(m, f, frozenset(tag), cache)
    if cache is None:
        return _denote(m, f, EMPTY, None)
    try:
        return cache[f]
    except KeyError:
        result = cache[f] = _denote(m, f, EMPTY, cache)
        return result


def _denote(m: KripkeStructure, f: Formula, tag: StateSet, cache: dict | None) -> StateSet:
    if isinstance(f, Atom):
        return frozenset(s for s in range(m.size) if m.holds(f.name, s))
    if isinstance(f, NegAtom):
        return frozenset(s for s in range(m.size) if not m.holds(f.name, s))
    if isinstance(f, And):
        return denotation(m, f.left, cache=cache) & denotation(m, f.right, cache=cache)
    if isinstance(f, Or):
        return denotation(m, f.left, cache=cache) | denotation(m, f.right, cache=cache)
    if isinstance(f, Temporal):
        if f.modality == "X":
            pre = pre_exists if f.quantifier == "E" else pre_forall
            return pre(m, denotation(m, f.body, cache=cache))
        body, kind = fixpoint_body(m, f, tag, cache)
        return lfp(body, m.states) if kind == "mu" else gfp(body, m.states)
    raise TypeError(f"not a CTL- state formula: {f!r}")


def is_valid(m: KripkeStructure, s: int, tag: AbstractSet[int], f: Formula) -> bool:
    """Validity of the sequent ``M, s |-_tag f``."""
    return s in denotation(m, f, tag)


def reduction_lemma_holds(
    body: MonotoneBody, p: int, kind: Literal["mu", "nu"], carrier: AbstractSet[int]
) -> bool:
    """Evaluate both sides of the single-element unfolding equivalence.

    For ``mu``: ``p in lfp(body)`` iff ``p in body(lfp(Y -> body(Y) - {p}))``;
    for ``nu`` the same with ``gfp`` and ``| {p}``.
    """
    single = frozenset((p,))
    if kind == "mu":
        lhs = p in lfp(body, carrier)
        rhs = p in body(lfp(lambda y: body(y) - single, carrier))
    else:
        lhs = p in gfp(body, carrier)
        rhs = p in body(gfp(lambda y: body(y) | single, carrier))
    return lhs == rhs
