"""Sequents, proof trees and the termination measure shared by prover and certifier."""

from __future__ import annotations

from typing import Iterator, NamedTuple

from .formula import Formula, formula_size, to_string
from .kripke import KripkeStructure, StateSet

RULES = (
    "p", "not_p", "and", "or1", "or2",
    "AX", "EX",
    "AG1", "AG2", "AF1", "AF2",
    "EG1", "EG2", "EF1", "EF2",
)

AXIOMS = frozenset({"p", "not_p", "AG1", "EG1"})


class Sequent(NamedTuple):
    """The judgement ``M, state |-_tag formula``."""

    state: int
    tag: StateSet
    formula: Formula

    def render(self, m: KripkeStructure) -> str:
        tag = ",".join(m.sorted_names(self.tag))
        return f"{m.name(self.state)} ⊢{{{tag}}} {to_string(self.formula)}"


class ProofTree(NamedTuple):
    """A derivation: ``conclusion`` follows by ``rule`` from the children's conclusions.

    Subtrees may be shared between parents, so walk with :func:`unique_nodes`
    when the tree is large.
    """

    conclusion: Sequent
    rule: str
    children: tuple["ProofTree", ...] = ()

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)


def unique_nodes(tree: ProofTree, seen: set[int] | None = None) -> Iterator[ProofTree]:
    """Yield each distinct node object of ``tree`` once, parents before children.

    Nodes whose id is already in ``seen`` are skipped together with their
    subtrees; pass one set across calls to walk a forest of shared proofs.
    """
    seen = set() if seen is None else seen
    stack = [tree]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(node.children))


def iter_nodes(tree: ProofTree, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], ProofTree]]:
    """Yield ``(path, node)`` for every node of the fully expanded tree, pre-order."""
    yield path, tree
    for i, child in enumerate(tree.children):
        yield from iter_nodes(child, path + (i,))


def tree_size(tree: ProofTree) -> int:
    """Number of nodes of the fully expanded tree (shared subtrees counted per use)."""
    memo: dict[int, int] = {}

    def size(node: ProofTree) -> int:
        if id(node) not in memo:
            memo[id(node)] = 1 + sum(size(c) for c in node.children)
        return memo[id(node)]

    return size(tree)


def termination_measure(seq: Sequent, m: KripkeStructure) -> tuple[int, int]:
    """Lexicographic pair ``(formula size, untagged states)``; strictly decreases along every rule."""
    return formula_size(seq.formula), m.size - len(seq.tag)


def measure_violations(
    tree: ProofTree, m: KripkeStructure, seen: set[int] | None = None
) -> list[tuple[Sequent, Sequent]]:
    """Parent/child edges of ``tree`` along which the termination measure fails to decrease.

    ``seen`` works as in :func:`unique_nodes`; the trees must stay alive while
    it is in use, so that node ids are not reused.
    """
    sizes: dict[Formula, int] = {}

    def measure(seq: Sequent) -> tuple[int, int]:
        size = sizes.get(seq.formula)
        if size is None:
            size = sizes[seq.formula] = formula_size(seq.formula)
        return size, m.size - len(seq.tag)

    bad = []
    for node in unique_nodes(tree, seen):
        parent = measure(node.conclusion)
        for child in node.children:
            if not measure(child.conclusion) < parent:
                bad.append((node.conclusion, child.conclusion))
    return bad
