"""Independent checker for proof trees.

Every node must be an instance of exactly the rule it names: matching
conclusion shape, satisfied side condition, and premises equal to the ones the
rule prescribes. The checker re-derives the premises itself and never consults
the prover or the semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import And, Atom, NegAtom, Or, Temporal, is_state_formula
from .kripke import EMPTY, KripkeStructure
from .proof import RULES, ProofTree, Sequent

Path = tuple[int, ...]


@dataclass
class CertificateReport:
    failures: list[tuple[Path, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def describe(self) -> list[str]:
        return [f"/{'/'.join(map(str, path))}: {msg}" for path, msg in self.failures]


class _Violation(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise _Violation(message)


def _chosen_successor(m: KripkeStructure, s: int, children: tuple[ProofTree, ...], slot: int) -> int:
    _require(len(children) > slot, "missing premise for the chosen successor")
    t = children[slot].conclusion.state
    _require(t in m.successors(s), f"premise state is not a successor of {m.name(s)}")
    return t


def expected_premises(m: KripkeStructure, seq: Sequent, rule: str, children: tuple[ProofTree, ...]) -> list[Sequent]:
    """Premises ``rule`` demands for ``seq``; E-rule successor choices are read from ``children``.

    Raises ``_Violation`` if the rule does not fit the conclusion.
    """
    s, tag, f = seq.state, seq.tag, seq.formula
    if rule in ("p", "not_p"):
        _require(isinstance(f, Atom if rule == "p" else NegAtom), f"rule {rule} needs a literal of that polarity")
        _require(not tag, "literal sequents must have an empty tag")
        _require(m.holds(f.name, s) == (rule == "p"), f"side condition on label of {m.name(s)} fails")
        return []
    if rule == "and":
        _require(isinstance(f, And), "rule and needs a conjunction")
        _require(not tag, "conjunction sequents must have an empty tag")
        return [Sequent(s, EMPTY, f.left), Sequent(s, EMPTY, f.right)]
    if rule in ("or1", "or2"):
        _require(isinstance(f, Or), f"rule {rule} needs a disjunction")
        _require(not tag, "disjunction sequents must have an empty tag")
        return [Sequent(s, EMPTY, f.left if rule == "or1" else f.right)]

    _require(isinstance(f, Temporal) and f.op == rule[:2], f"rule {rule} does not match the formula")
    succ = m.successors(s)
    if rule in ("AX", "EX"):
        _require(not tag, "next-state sequents must have an empty tag")
        if rule == "AX":
            return [Sequent(t, EMPTY, f.body) for t in succ]
        return [Sequent(_chosen_successor(m, s, children, 0), EMPTY, f.body)]

    if rule.endswith("1") and f.modality == "G":
        _require(s in tag, f"side condition {m.name(s)} in tag fails")
        return []
    _require(s not in tag, f"side condition {m.name(s)} not in tag fails")
    here = Sequent(s, EMPTY, f.body)
    grown = tag | {s}
    if rule.endswith("1"):
        return [here]
    if rule == "AG2":
        return [here] + [Sequent(t, grown, f) for t in succ]
    if rule == "AF2":
        return [Sequent(t, grown, f) for t in succ]
    if rule == "EG2":
        return [here, Sequent(_chosen_successor(m, s, children, 1), grown, f)]
    return [Sequent(_chosen_successor(m, s, children, 0), grown, f)]


def _show(m: KripkeStructure, seqs: list[Sequent]) -> str:
    def one(q: Sequent) -> str:
        try:
            return q.render(m)
        except (AttributeError, IndexError, TypeError):
            return repr(q)

    return "[" + "; ".join(one(q) for q in seqs) + "]"


def _check_node(m: KripkeStructure, node: ProofTree) -> str | None:
    seq = node.conclusion
    if not isinstance(seq, Sequent):
        return "conclusion is not a sequent"
    if not (isinstance(seq.state, int) and 0 <= seq.state < m.size):
        return f"state {seq.state!r} is not in the model"
    if not seq.tag <= m.states:
        return "tag contains states outside the model"
    if not is_state_formula(seq.formula):
        return "formula is not a negation-normal state formula"
    if node.rule not in RULES:
        return f"unknown rule {node.rule!r}"
    try:
        expected = expected_premises(m, seq, node.rule, node.children)
    except _Violation as exc:
        return str(exc)
    actual = [c.conclusion for c in node.children]
    if actual != expected:
        return f"rule {node.rule}: premises {_show(m, actual)} but expected {_show(m, expected)}"
    return None


def check_proof(
    m: KripkeStructure, t: ProofTree, verified: dict[int, ProofTree] | None = None
) -> CertificateReport:
    """Check every node of ``t``; failures are reported with their path from the root.

    A subtree shared by several parents is checked once and reported at the
    first path where it is met. ``verified`` maps ``id(node)`` to roots of
    subtrees already found correct for this same model (holding the node keeps
    its id stable); pass one dict across calls to certify many proofs that
    share subtrees. Nodes are only added to it when the whole of ``t`` checks.
    """
    report = CertificateReport()
    checked: dict[int, ProofTree] = {}
    stack: list[tuple[Path, ProofTree]] = [((), t)]
    while stack:
        path, node = stack.pop()
        if id(node) in checked or (verified is not None and verified.get(id(node)) is node):
            continue
        checked[id(node)] = node
        problem = _check_node(m, node)
        if problem is not None:
            report.failures.append((path, problem))
        for i in reversed(range(len(node.children))):
            stack.append((path + (i,), node.children[i]))
    report.failures.sort()
    if verified is not None and report.valid:
        verified.update(checked)
    return report
