"""Command-line front end and proof certificate (de)serialisation.

Exit codes: 0 holds / certificate valid, 1 does not hold / certificate
invalid, 2 usage, I/O or parse error, 3 prover and oracle disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .certifier import check_proof
from .formula import FormulaSyntaxError, parse_formula, push_negations, to_string
from .kripke import KripkeStructure, ModelError, parse_model
from .oracle import is_valid
from .proof import ProofTree, Sequent
from .prover import Verdict, prove

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3


class ProofFormatError(ValueError):
    pass


def proof_to_json(m: KripkeStructure, t: ProofTree) -> dict[str, Any]:
    seq = t.conclusion
    return {
        "state": m.name(seq.state),
        "tag": m.sorted_names(seq.tag),
        "formula": to_string(seq.formula),
        "rule": t.rule,
        "children": [proof_to_json(m, c) for c in t.children],
    }


def proof_from_json(m: KripkeStructure, data: Any, where: str = "/") -> ProofTree:
    """Rebuild a proof tree; raises ``ProofFormatError`` on schema or reference errors."""
    if not isinstance(data, dict):
        raise ProofFormatError(f"{where}: node must be an object")
    missing = {"state", "tag", "formula", "rule", "children"} - data.keys()
    if missing:
        raise ProofFormatError(f"{where}: missing field(s) {', '.join(sorted(missing))}")
    state, tag, formula, rule, children = (data[k] for k in ("state", "tag", "formula", "rule", "children"))
    if not isinstance(state, str) or not isinstance(rule, str) or not isinstance(formula, str):
        raise ProofFormatError(f"{where}: state, formula and rule must be strings")
    if not isinstance(tag, list) or not all(isinstance(x, str) for x in tag):
        raise ProofFormatError(f"{where}: tag must be an array of state names")
    if not isinstance(children, list):
        raise ProofFormatError(f"{where}: children must be an array")
    try:
        seq = Sequent(m.index(state), frozenset(m.index(x) for x in tag), parse_formula(formula))
    except (ModelError, FormulaSyntaxError) as exc:
        raise ProofFormatError(f"{where}: {exc}") from None
    kids = tuple(proof_from_json(m, c, f"{where.rstrip('/')}/{i}") for i, c in enumerate(children))
    return ProofTree(seq, rule, kids)


def render_text(m: KripkeStructure, t: ProofTree) -> str:
    lines: list[str] = []

    def walk(node: ProofTree, depth: int) -> None:
        lines.append(f"{'  ' * depth}[{node.rule}] {node.conclusion.render(m)}")
        for child in node.children:
            walk(child, depth + 1)

    walk(t, 0)
    return "\n".join(lines)


def verdict_to_json(m: KripkeStructure, s: int, formula: str, v: Verdict) -> dict[str, Any]:
    return {
        "state": m.name(s),
        "formula": formula,
        "holds": v.holds,
        "proof": proof_to_json(m, v.proof) if v.proof is not None else None,
    }


def load_model(path: str) -> KripkeStructure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read model file {path!r}: {exc.strerror}") from None
    return parse_model(text)


def _error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def cmd_check(args: argparse.Namespace) -> int:
    try:
        m = load_model(args.model)
        formula = push_negations(parse_formula(args.formula))
        s = m.index(args.state)
    except ModelError as exc:
        return _error(f"{args.model}: {exc}")
    except FormulaSyntaxError as exc:
        return _error(f"formula: {exc}")

    verdict = prove(m, s, formula)
    text = to_string(formula)
    if args.stats:
        st = verdict.stats
        print(f"expanded={st.expanded} backtracks={st.backtracks} max_depth={st.max_depth}", file=sys.stderr)
    if args.oracle:
        expected = is_valid(m, s, frozenset(), formula)
        if expected != verdict.holds:
            print(
                f"internal error: prover says {verdict.holds}, oracle says {expected} for {text} at {args.state}",
                file=sys.stderr,
            )
            return EXIT_DISAGREE

    if args.format == "json":
        print(json.dumps(verdict_to_json(m, s, text, verdict), indent=2, ensure_ascii=False))
    elif verdict.holds:
        print(render_text(m, verdict.proof))
    else:
        print(f"{text} does not hold in state {args.state}")

    if verdict.holds and args.proof:
        try:
            Path(args.proof).write_text(
                json.dumps(proof_to_json(m, verdict.proof), indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
        except OSError as exc:
            return _error(f"cannot write proof file {args.proof!r}: {exc.strerror}")
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def cmd_certify(args: argparse.Namespace) -> int:
    try:
        m = load_model(args.model)
    except ModelError as exc:
        return _error(f"{args.model}: {exc}")
    try:
        data = json.loads(Path(args.proof).read_text(encoding="utf-8"))
        tree = proof_from_json(m, data)
    except OSError as exc:
        return _error(f"cannot read proof file {args.proof!r}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        return _error(f"{args.proof}: malformed JSON: {exc}")
    except ProofFormatError as exc:
        return _error(f"{args.proof}: {exc}")

    report = check_proof(m, tree)
    root = tree.conclusion
    if report.valid:
        print(f"valid certificate for {root.render(m)}")
        return EXIT_HOLDS
    print(f"invalid certificate ({len(report.failures)} failure(s)):")
    for line in report.describe():
        print(f"  {line}")
    return EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctlcheck", description="Local CTL- model checking by proof search.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="check a formula at a state and print the proof")
    check.add_argument("--model", required=True, metavar="PATH")
    check.add_argument("--formula", required=True, metavar="STRING")
    check.add_argument("--state", required=True, metavar="NAME")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--proof", metavar="PATH", help="write the proof certificate as JSON")
    check.add_argument("--oracle", action="store_true", help="cross-check against the fixed-point semantics")
    check.add_argument("--stats", action="store_true", help="print search statistics to stderr")
    check.set_defaults(func=cmd_check)

    certify = sub.add_parser("certify", help="verify a JSON proof certificate against a model")
    certify.add_argument("--model", required=True, metavar="PATH")
    certify.add_argument("--proof", required=True, metavar="PATH")
    certify.set_defaults(func=cmd_certify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_HOLDS
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
