"""Exact integral computations on the diagonal of the homotopy spectral
sequence for long knots in R^3, and the tree/graph model of its E1 and E2
pages."""

from .brackets import Bracket, Gen, LinComb, br, normalize_to_hall, parse_combo, parse_term, x, y
from .correspondence import Psi_D, Psi_T, d1_combinatorial, e2_diagonal, phi_D, phi_T, psi_D, psi_T
from .spectral import DsepElement, d1_bruteforce, d1_simplified, dsep_generators, e1_entry
from .utg import UniTriGraph, canonical_encode, decode, enumerate_trees, to_dot
from .zlinalg import GroupPresentation, IntMatrix, cokernel_invariants, hermite_normal_form, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "Gen",
    "LinComb",
    "br",
    "x",
    "y",
    "parse_term",
    "parse_combo",
    "normalize_to_hall",
    "e1_entry",
    "DsepElement",
    "dsep_generators",
    "d1_bruteforce",
    "d1_simplified",
    "UniTriGraph",
    "canonical_encode",
    "decode",
    "enumerate_trees",
    "to_dot",
    "psi_T",
    "Psi_T",
    "phi_T",
    "psi_D",
    "Psi_D",
    "phi_D",
    "d1_combinatorial",
    "e2_diagonal",
    "GroupPresentation",
    "IntMatrix",
    "smith_normal_form",
    "hermite_normal_form",
    "cokernel_invariants",
]
