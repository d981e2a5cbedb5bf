"""Generators and independent reference implementations shared by the tests."""

from __future__ import annotations

import itertools
import random
from collections import deque

from ctlcheck.formula import (
    MODALITIES, QUANTIFIERS, And, Atom, Formula, NegAtom, Not, Or, Temporal,
)
from ctlcheck.kripke import KripkeStructure
from ctlcheck.proof import RULES, ProofTree

ATOMS = ("p", "q", "r")
LITERALS = tuple(Atom(a) for a in ATOMS) + tuple(NegAtom(a) for a in ATOMS)
# leaves of enumerated shapes are filled left to right from this cycle
LEAF_CYCLE = (Atom("p"), NegAtom("q"), Atom("r"))


def random_model(rng: random.Random, min_states: int = 2, max_states: int = 6) -> KripkeStructure:
    """States s0..s{n-1}; every ordered pair is an edge with one density drawn uniformly per model."""
    n = rng.randint(min_states, max_states)
    density = rng.random()
    names = [f"s{i}" for i in range(n)]
    transitions = [(a, b) for a in names for b in names if rng.random() < density]
    labels = {s: [a for a in ATOMS if rng.random() < 0.5] for s in names}
    return KripkeStructure.build(names, transitions, labels)


def random_formula(rng: random.Random, depth: int, negation: bool = False) -> Formula:
    """Random CTL- formula of nesting depth at most ``depth``; ``negation`` adds general Not."""
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(LITERALS)
    kinds = ["and", "or", "temporal", "temporal"] + (["not"] if negation else [])
    kind = rng.choice(kinds)
    if kind == "not":
        return Not(random_formula(rng, depth - 1, negation))
    if kind == "temporal":
        return Temporal(rng.choice(QUANTIFIERS), rng.choice(MODALITIES), random_formula(rng, depth - 1, negation))
    cls = And if kind == "and" else Or
    return cls(random_formula(rng, depth - 1, negation), random_formula(rng, depth - 1, negation))


def _shapes(size: int) -> list:
    """All formula shapes with ``size`` nodes; a leaf is ``None``."""
    if size == 1:
        return [None]
    out = [("T", q + m, body) for q in QUANTIFIERS for m in MODALITIES for body in _shapes(size - 1)]
    for left_size in range(1, size - 1):
        for left in _shapes(left_size):
            for right in _shapes(size - 1 - left_size):
                out.append(("&", left, right))
                out.append(("|", left, right))
    return out


def _fill(shape, leaves, interned: dict) -> Formula:
    if shape is None:
        f = next(leaves)
    elif shape[0] == "T":
        f = Temporal(shape[1][0], shape[1][1], _fill(shape[2], leaves, interned))
    else:
        left = _fill(shape[1], leaves, interned)
        right = _fill(shape[2], leaves, interned)
        f = And(left, right) if shape[0] == "&" else Or(left, right)
    return interned.setdefault(f, f)


def enumerate_formulas(max_size: int = 5) -> list[Formula]:
    """Every formula shape up to ``max_size`` nodes, leaves labelled p, !q, r, p, ... left to right."""
    interned: dict = {}
    return [
        _fill(shape, itertools.cycle(LEAF_CYCLE), interned)
        for size in range(1, max_size + 1)
        for shape in _shapes(size)
    ]


# -- reference semantics, written independently of ctlcheck.oracle ---------------


def successor_sets(m: KripkeStructure) -> list[set[int]]:
    return [{b for a, b in m.transitions if a == s} for s in range(m.size)]


def naive_eval(m: KripkeStructure, f: Formula) -> set[int]:
    """Textbook CTL by graph search: EF/AF via backward iteration, EG via SCC-free pruning.

    Handles general negation by complement. Uses no fixed-point helper and no tags.
    """
    succ = successor_sets(m)
    states = set(range(m.size))
    if isinstance(f, Atom):
        return {s for s in states if f.name in m.labels[s]}
    if isinstance(f, NegAtom):
        return {s for s in states if f.name not in m.labels[s]}
    if isinstance(f, Not):
        return states - naive_eval(m, f.body)
    if isinstance(f, And):
        return naive_eval(m, f.left) & naive_eval(m, f.right)
    if isinstance(f, Or):
        return naive_eval(m, f.left) | naive_eval(m, f.right)
    body = naive_eval(m, f.body)
    if f.op == "EX":
        return {s for s in states if succ[s] & body}
    if f.op == "AX":
        return {s for s in states if succ[s] <= body}
    if f.op == "EF":
        return backward_reachable(m, body)
    if f.op == "AG":
        return states - backward_reachable(m, states - body)
    if f.op == "AF":
        # s satisfies AF iff every maximal path from s hits body
        result = set(body)
        changed = True
        while changed:
            changed = False
            for s in states - result:
                if succ[s] <= result:
                    result.add(s)
                    changed = True
        return result
    # EG: keep body states that still have a successor inside the kept set
    kept = set(body)
    changed = True
    while changed:
        changed = False
        for s in list(kept):
            if not succ[s] & kept:
                kept.discard(s)
                changed = True
    return kept


def backward_reachable(m: KripkeStructure, targets: set[int]) -> set[int]:
    """States with a path (length >= 0) into ``targets``, by BFS over reversed edges."""
    preds: list[list[int]] = [[] for _ in range(m.size)]
    for a, b in m.transitions:
        preds[b].append(a)
    seen = set(targets)
    queue = deque(targets)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def brute_lfp(body, carrier: frozenset) -> frozenset:
    """Intersection of all prefixed points ``body(X) <= X``, over every subset."""
    result = frozenset(carrier)
    for k in range(len(carrier) + 1):
        for xs in itertools.combinations(sorted(carrier), k):
            x = frozenset(xs)
            if body(x) <= x:
                result &= x
    return result


def brute_gfp(body, carrier: frozenset) -> frozenset:
    """Union of all postfixed points ``X <= body(X)``, over every subset."""
    result: frozenset = frozenset()
    for k in range(len(carrier) + 1):
        for xs in itertools.combinations(sorted(carrier), k):
            x = frozenset(xs)
            if x <= body(x):
                result |= x
    return result


# -- single-node proof mutations ------------------------------------------------

MUTATIONS = ("flip_rule", "drop_premise", "alter_tag", "swap_state")


def _replace(tree: ProofTree, path: tuple[int, ...], node: ProofTree) -> ProofTree:
    if not path:
        return node
    i = path[0]
    children = list(tree.children)
    children[i] = _replace(children[i], path[1:], node)
    return tree._replace(children=tuple(children))


def _random_path(tree: ProofTree, rng: random.Random) -> tuple[int, ...]:
    path: tuple[int, ...] = ()
    node = tree
    while node.children and rng.random() >= 1 / (1 + len(node.children)):
        i = rng.randrange(len(node.children))
        path += (i,)
        node = node.children[i]
    return path


def _at(tree: ProofTree, path: tuple[int, ...]) -> ProofTree:
    for i in path:
        tree = tree.children[i]
    return tree


def _mutants(m: KripkeStructure, tree: ProofTree, path: tuple[int, ...], rng: random.Random) -> dict:
    """Candidate replacements for the node at ``path``, keyed by mutation kind."""
    node = _at(tree, path)
    seq = node.conclusion
    out = {}
    rules = [x for x in RULES if x != node.rule]
    if isinstance(seq.formula, Or) and seq.formula.left == seq.formula.right:
        # or1 and or2 coincide on p | p
        rules = [x for x in rules if x not in ("or1", "or2")]
    out["flip_rule"] = (path, node._replace(rule=rng.choice(rules)))
    if node.children:
        i = rng.randrange(len(node.children))
        out["drop_premise"] = (path, node._replace(children=node.children[:i] + node.children[i + 1:]))
        child = node.children[i]
        others = [t for t in range(m.size) if t not in m.successors(seq.state) and t != child.conclusion.state]
        if others:
            moved = child.conclusion._replace(state=rng.choice(others))
            out["swap_state"] = (path + (i,), child._replace(conclusion=moved))
    if path:
        flip = rng.randrange(m.size)
        tag = seq.tag ^ {flip}
        out["alter_tag"] = (path, node._replace(conclusion=seq._replace(tag=tag)))
    return out


def mutate(m: KripkeStructure, tree: ProofTree, rng: random.Random, kind: str | None = None):
    """Return ``(kind, mutant)`` differing from ``tree`` in exactly one node, or None if ``kind`` does not apply."""
    for _ in range(20):
        options = _mutants(m, tree, _random_path(tree, rng), rng)
        if kind is None:
            kind_here = rng.choice(sorted(options))
        elif kind in options:
            kind_here = kind
        else:
            continue
        where, node = options[kind_here]
        return kind_here, _replace(tree, where, node)
    return None
