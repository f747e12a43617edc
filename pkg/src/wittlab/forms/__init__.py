"""Quadratic forms, Witt classes, Brauer symbols and residue computations."""
from .brauer import BrauerTwoTorsionClass, clifford_invariant, hasse_witt, symbol
from .oracles import (
    ResiduePair,
    WittClass,
    is_isometric,
    is_isotropic,
    represents,
    similar_pfister_rewrite,
    similarity_factor_check,
    witt_decompose,
    witt_equal,
)
from .quadratic import (
    Block,
    QuadraticForm,
    determinant,
    diag,
    discriminant,
    hyperbolic,
    negate,
    orth_sum,
    pfister,
    plain,
    scale,
    tensor,
)
from .residues import conic_kernel_membership, springer_residues
from .verdict import Obligation, Status, Verdict

__all__ = [
    "BrauerTwoTorsionClass", "clifford_invariant", "hasse_witt", "symbol",
    "ResiduePair", "WittClass", "is_isometric", "is_isotropic", "represents",
    "similar_pfister_rewrite", "similarity_factor_check", "witt_decompose", "witt_equal",
    "Block", "QuadraticForm", "determinant", "diag", "discriminant", "hyperbolic",
    "negate", "orth_sum", "pfister", "plain", "scale", "tensor",
    "conic_kernel_membership", "springer_residues",
    "Obligation", "Status", "Verdict",
]
