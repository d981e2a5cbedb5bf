"""Backward proof search over tagged sequents.

Search tries every applicable rule instance and keeps a derivation of minimal
height for each sequent, so the proofs it returns are as shallow as possible.
Ties go to the first instance in :func:`applicable_rules` order. Results are
memoised per sequent: provability and minimal height depend only on (state,
tag, formula), and the termination measure rules out cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .formula import And, Atom, Formula, NegAtom, Or, Temporal
from .kripke import EMPTY, KripkeStructure, StateSet
from .proof import ProofTree, Sequent


class RuleInstance(NamedTuple):
    rule: str
    premises: tuple[Sequent, ...]
    choice: bool  # True when picking this instance is a nondeterministic choice


@dataclass
class Stats:
    """Search effort. In a verdict, ``expanded`` and ``backtracks`` count the
    work done for that query; ``max_depth`` is the deepest recursion the
    prover has reached so far."""

    expanded: int = 0
    backtracks: int = 0
    max_depth: int = 0


@dataclass(frozen=True)
class Verdict:
    """Outcome of one query; ``proof`` is None exactly when ``holds`` is false."""

    holds: bool
    proof: ProofTree | None
    stats: Stats = field(default_factory=Stats, compare=False)


# rules whose use involves picking one of several alternatives
_CHOICE = frozenset({"or1", "or2", "EX", "AF1", "AF2", "EG2", "EF1", "EF2"})

# operator codes of compiled formula nodes
_ATOM, _NEG, _AND, _OR, _EX, _AX, _EF, _AF, _EG, _AG = range(10)
_TEMPORAL = {"EX": _EX, "AX": _AX, "EF": _EF, "AF": _AF, "EG": _EG, "AG": _AG}

_INF = float("inf")
_new = tuple.__new__


class Prover:
    """Proof search bound to one model, reusing results across queries.

    Formulas are compiled to integer ids so that the search works on plain
    ``(state, tag, id)`` keys. Use :func:`prove` for a fresh search with
    reproducible statistics.
    """

    def __init__(self, m: KripkeStructure):
        self.m = m
        self.stats = Stats()
        self._labels = m.labels
        self._succ = tuple(m.successors(s) for s in range(m.size))
        self._single = tuple(frozenset((s,)) for s in range(m.size))
        self._ids: dict[Formula, int] = {}
        self._nodes: list[tuple] = []  # id -> (code, arg, arg)
        self._formulas: list[Formula] = []  # id -> formula
        # key -> (height, rule, premises) of a minimal-height proof;
        # height is inf and rule None when the key is unprovable
        self._memo: dict[tuple, tuple[float, str | None, tuple]] = {}
        self._trees: dict[tuple, ProofTree] = {}
        self._active: set[tuple] = set()  # keys whose search is in progress

    def compile(self, f: Formula) -> int:
        """Id of ``f``; raises ``TypeError`` if it is not a negation-normal state formula."""
        i = self._ids.get(f)
        if i is not None:
            return i
        kind = type(f)
        if kind is Atom:
            node = (_ATOM, f.name, None)
        elif kind is NegAtom:
            node = (_NEG, f.name, None)
        elif kind is And or kind is Or:
            node = (_AND if kind is And else _OR, self.compile(f.left), self.compile(f.right))
        elif kind is Temporal:
            node = (_TEMPORAL[f.op], self.compile(f.body), None)
        else:
            raise TypeError("formula contains general negation; normalise it first")
        i = self._ids[f] = len(self._nodes)
        self._nodes.append(node)
        self._formulas.append(f)
        return i

    def expand(self, s: int, tag: StateSet, i: int) -> list[tuple[str, tuple]]:
        """Rule instances for the compiled key ``(s, tag, i)`` as ``(rule, premise keys)``."""
        code, a, b = self._nodes[i]
        if code <= _OR:
            if tag:
                return []
            if code == _ATOM:
                return [("p", ())] if a in self._labels[s] else []
            if code == _NEG:
                return [] if a in self._labels[s] else [("not_p", ())]
            if code == _AND:
                return [("and", ((s, EMPTY, a), (s, EMPTY, b)))]
            return [("or1", ((s, EMPTY, a),)), ("or2", ((s, EMPTY, b),))]
        succ = self._succ[s]
        if code == _EX:
            return [] if tag else [("EX", ((t, EMPTY, a),)) for t in succ]
        if code == _AX:
            return [] if tag else [("AX", tuple([(t, EMPTY, a) for t in succ]))]
        if s in tag:
            if code == _EG:
                return [("EG1", ())]
            return [("AG1", ())] if code == _AG else []
        grown = tag | self._single[s]
        here = (s, EMPTY, a)
        if code == _EF:
            return [("EF1", (here,))] + [("EF2", ((t, grown, i),)) for t in succ]
        if code == _AF:
            return [("AF1", (here,)), ("AF2", tuple([(t, grown, i) for t in succ]))]
        if code == _EG:
            return [("EG2", (here, (t, grown, i))) for t in succ]
        return [("AG2", (here, *[(t, grown, i) for t in succ]))]

    def sequent(self, key: tuple) -> Sequent:
        s, tag, i = key
        return _new(Sequent, (s, tag, self._formulas[i]))

    def prove_sequent(self, seq: Sequent) -> ProofTree | None:
        key = (seq.state, seq.tag, self.compile(seq.formula))
        found = self._memo.get(key)
        if (found[0] if found is not None else self._search(key, 1)) == _INF:
            return None
        return self._tree(key)

    def prove(self, s: int, f: Formula) -> Verdict:
        stats = self.stats
        expanded, backtracks = stats.expanded, stats.backtracks
        proof = self.prove_sequent(_new(Sequent, (s, EMPTY, f)))
        delta = Stats(stats.expanded - expanded, stats.backtracks - backtracks, stats.max_depth)
        return Verdict(proof is not None, proof, delta)

    def _search(self, key: tuple, depth: int) -> float:
        """Height of a shallowest proof of ``key`` (inf if none), memoised.

        Every premise is strictly smaller in the termination measure, so the
        recursion ends.
        """
        memo = self._memo
        stats = self.stats
        stats.expanded += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        depth += 1
        if self._nodes[key[2]][0] == _EF:
            entry = memo[key] = self._reach(key, depth)
            return entry[0]
        best = _INF
        entry: tuple = (_INF, None, ())
        active = self._active
        active.add(key)
        for rule, premises in self.expand(*key):
            if not premises:
                entry = (1, rule, ())
                break
            height = 0
            for premise in premises:
                found = memo.get(premise)
                if found is None and premise[1] and self._nodes[premise[2]][0] == _AF:
                    # dropping every tag keeps an AF-proof a proof, so the
                    # empty-tag height is a lower bound
                    base = (premise[0], EMPTY, premise[2])
                    lower = memo.get(base)
                    if lower is not None:
                        if lower[0] >= best - 1:
                            break
                    elif base not in active and self._search(base, depth) >= best - 1:
                        break
                    found = memo.get(premise)
                h = found[0] if found is not None else self._search(premise, depth)
                if h >= best - 1:
                    break  # failed, or cannot beat the proof already found
                if h > height:
                    height = h
            else:
                best = height + 1
                entry = (best, rule, premises)
                continue
            stats.backtracks += 1
        active.discard(key)
        memo[key] = entry
        return entry[0]

    def _reach(self, key: tuple, depth: int) -> tuple[float, str | None, tuple]:
        """Memo entry for an EF key, read off shortest paths.

        A chain of EF2 steps followed by EF1 is a path that avoids the tag and
        never repeats a state, and a shortest path to a state never repeats
        one. So the height through successor ``t`` is one more than the
        cheapest ``distance + 1 + body height`` over states reachable from
        ``t`` outside the grown tag. Candidates are compared in
        :meth:`expand` order, as in the generic search.
        """
        s, tag, i = key
        if s in tag:
            return _INF, None, ()
        body = self._nodes[i][1]
        best = self._height((s, EMPTY, body), depth) + 1
        entry: tuple = (best, "EF1", ((s, EMPTY, body),)) if best < _INF else (_INF, None, ())
        grown = tag | self._single[s]
        for t in self._succ[s]:
            h = _INF if t in grown else self._nearest(t, grown, body, best - 1, depth)
            if h < best - 1:
                best = h + 1
                entry = (best, "EF2", ((t, grown, i),))
            else:
                self.stats.backtracks += 1
        return entry

    def _nearest(self, start: int, avoid: StateSet, body: int, cap: float, depth: int) -> float:
        """Least ``d + 1 + h`` over states at distance ``d`` from ``start`` outside ``avoid``
        whose body proof has height ``h``; values of at least ``cap`` count as inf."""
        best = cap
        seen = {start}
        frontier = [start]
        d = 0
        while frontier and d + 2 < best:
            nxt = []
            for v in frontier:
                h = self._height((v, EMPTY, body), depth)
                if d + 1 + h < best:
                    best = d + 1 + h
                for w in self._succ[v]:
                    if w not in seen and w not in avoid:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
            d += 1
        return best if best < cap else _INF

    def _height(self, key: tuple, depth: int) -> float:
        found = self._memo.get(key)
        return found[0] if found is not None else self._search(key, depth)

    def _tree(self, key: tuple) -> ProofTree:
        """Rebuild the proof recorded for ``key``; equal subproofs are shared."""
        trees = self._trees
        tree = trees.get(key)
        if tree is None:
            if key not in self._memo:
                self._search(key, 1)  # an EF premise only its parent's distance was computed for
            _, rule, premises = self._memo[key]
            children = tuple([self._tree(p) for p in premises])
            tree = trees[key] = _new(ProofTree, (self.sequent(key), rule, children))
        return tree


def applicable_rules(m: KripkeStructure, seq: Sequent) -> list[RuleInstance]:
    """All rule instances whose conclusion is ``seq`` and whose side condition holds.

    Order: axioms, then the remaining rules; F1 before F2, or1 before or2, and
    successor choices in state-index order.
    """
    prover = Prover(m)
    i = prover.compile(seq.formula)
    return [
        RuleInstance(rule, tuple(prover.sequent(p) for p in premises), rule in _CHOICE)
        for rule, premises in prover.expand(seq.state, seq.tag, i)
    ]


def prove(m: KripkeStructure, s: int, f: Formula) -> Verdict:
    """Decide ``M, s |-_{} f``; on success the verdict carries a shallowest proof."""
    return Prover(m).prove(s, f)
