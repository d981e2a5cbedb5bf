"""Local model checking for CTL- by backward proof search over tagged sequents."""

from .certifier import CertificateReport, check_proof
from .formula import (
    AF, AG, AX, EF, EG, EX, And, Atom, NegAtom, Not, Or, Temporal,
    formula_size, parse_formula, parse_state_formula, push_negations, to_string,
)
from .kripke import KripkeStructure, ModelError, parse_model, pre_exists, pre_forall, successors
from .oracle import denotation, gfp, is_valid, lfp, reduction_lemma_holds
from .proof import ProofTree, Sequent, termination_measure
from .prover import Prover, Verdict, applicable_rules, prove

__all__ = [
    "AF", "AG", "AX", "EF", "EG", "EX", "And", "Atom", "NegAtom", "Not", "Or", "Temporal",
    "formula_size", "parse_formula", "parse_state_formula", "push_negations", "to_string",
    "KripkeStructure", "ModelError", "parse_model", "pre_exists", "pre_forall", "successors",
    "denotation", "gfp", "is_valid", "lfp", "reduction_lemma_holds",
    "ProofTree", "Sequent", "termination_measure",
    "Prover", "Verdict", "applicable_rules", "prove",
    "CertificateReport", "check_proof",
]
