"""Quaternion algebras, involutions rho ⊗ ad(phi) and the isomorphism criteria."""
from .criteria import Assumption, iso_base, iso_generic
from .generic import GenericSum, generic_sum, generic_sum_residues
from .involutions import (
    InvolutionPresentation,
    SkewHermitianForm,
    adjoint_presentation,
    e1_invariant,
    e2_invariant,
    morita_transfer,
    skew_form,
)
from .quaternion import QuaternionAlgebra, is_split

__all__ = [
    "Assumption", "iso_base", "iso_generic",
    "GenericSum", "generic_sum", "generic_sum_residues",
    "InvolutionPresentation", "SkewHermitianForm", "adjoint_presentation",
    "e1_invariant", "e2_invariant", "morita_transfer", "skew_form",
    "QuaternionAlgebra", "is_split",
]
