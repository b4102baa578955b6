"""Orthologic reasoning toolkit.

A hash-consed formula store, a worst-case quadratic entailment prover for
orthologic with axioms, a minimizing normalizer, and circuit/CNF machinery
for building SAT benchmarks and normalization-based preprocessing pipelines.
"""

from .aig import AigCircuit, AigError, cone_formula, emit_aag, formula_to_circuit, \
    formulas_to_circuit, parse_aag, simulate
from .cnf import CnfError, CnfInstance, emit_dimacs, miter_cnf, parse_dimacs, \
    satisfiable, tseitin
from .formula import AND, BOT, NOT, OR, TOP, VAR, FormulaError, FormulaStore, ParseError
from .normalform import Normalizer, WordProblem, certify_equivalence, leq, normalize
from .oracle import DepthLimitExceeded, brute_force_tautology, enumerate_formulas, \
    naive_prove, random_formula
from .prover import AxiomSet, DerivationRecord, LimitExceededError, ProofResult, \
    ProofStats, Sequent, Verdict, check_derivations, prepare_goal, prove, saturate, sequent
from .solver import SolverConfig, SolverOutcome, run_external_solver

__all__ = [
    "AND", "BOT", "NOT", "OR", "TOP", "VAR",
    "AigCircuit", "AigError", "AxiomSet", "CnfError", "CnfInstance",
    "DepthLimitExceeded", "DerivationRecord", "FormulaError", "FormulaStore",
    "LimitExceededError", "Normalizer", "ParseError", "ProofResult", "ProofStats",
    "Sequent", "SolverConfig", "SolverOutcome", "Verdict", "WordProblem",
    "brute_force_tautology", "certify_equivalence", "check_derivations",
    "cone_formula", "emit_aag", "emit_dimacs", "enumerate_formulas",
    "formula_to_circuit", "formulas_to_circuit", "leq", "miter_cnf", "naive_prove",
    "normalize", "parse_aag", "parse_dimacs", "prepare_goal", "prove",
    "random_formula", "run_external_solver", "satisfiable", "saturate", "sequent",
    "simulate", "tseitin",
]

__version__ = "0.1.0"
