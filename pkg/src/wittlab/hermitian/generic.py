"""Generic sums h = h1 ⊥ <t> h2 over k((t)) and their residues.

Everything is computed on the transfer side: h_i corresponds to
<<a>> phi_i, and h is hyperbolic iff its transfer is hyperbolic over the
conic field, i.e. iff <<a>> phi lies in <<a, b>> W.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import EvenRamification, FieldMismatch
from ..forms.oracles import ResiduePair, WittClass, witt_decompose
from ..forms.quadratic import Block, QuadraticForm, scale
from ..forms.residues import conic_kernel_membership
from ..forms.verdict import Obligation, Verdict, jsonable
from .involutions import InvolutionPresentation, SkewHermitianForm, adjoint_presentation

UNIT = "ubar"


@dataclass(frozen=True)
class GenericSum:
    h1: SkewHermitianForm
    h2: SkewHermitianForm
    variable: str
    result: SkewHermitianForm

    def presentation(self) -> InvolutionPresentation:
        return adjoint_presentation(self.result)

    def __str__(self) -> str:
        return f"gsum({self.h1}, {self.h2}, {self.variable})"


def _blocks(h: SkewHermitianForm):
    if h.blocks is not None:
        return h.blocks
    return tuple(Block(c, ()) for c in h.coefficients)


def generic_sum(h1: SkewHermitianForm, h2: SkewHermitianForm, t: str) -> GenericSum:
    if h1.algebra != h2.algebra:
        raise FieldMismatch(f"{h1.algebra} over {h1.algebra.field} vs {h2.algebra} over {h2.algebra.field}")
    tower = h1.algebra.field.laurent(t)
    algebra = h1.algebra.extend(tower)
    tt = tower.gen(t)
    blocks = tuple(b.coerce(tower) for b in _blocks(h1))
    blocks += tuple(Block(tt * b.scale.coerce(tower), tuple(s.coerce(tower) for s in b.slots)) for b in _blocks(h2))
    coeffs = tuple(e for b in blocks for e in b.entries())
    keep = h1.blocks is not None or h2.blocks is not None
    result = SkewHermitianForm(algebra, coeffs, blocks if keep else None, h1.pure_part)
    return GenericSum(h1, h2, t, result)


@dataclass(frozen=True)
class GenericSumResidues:
    residues: ResiduePair
    ramified: bool
    hyperbolicity: tuple[Verdict, Verdict]
    obligations: tuple[Obligation, ...]
    e: int

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "residues": self.residues.to_json(),
            "ramified": self.ramified,
            "hyperbolicity": [v.to_json() for v in self.hyperbolicity],
            "obligations": [o.to_json() for o in self.obligations],
        }


def generic_sum_residues(g: GenericSum, e: int) -> GenericSumResidues:
    """Residues of h over an extension K of k((t)) with odd ramification e.

    Since e is odd, t = u pi^e is u pi modulo squares for a unit u, so the
    residues are h1 and <ubar> h2 with ubar the residue of u, kept as a
    symbol. For e = 1 (K = k((t))) the unit is 1.
    """
    if not isinstance(e, int) or e <= 0:
        raise ValueError("the ramification index must be a positive integer")
    if e % 2 == 0:
        raise EvenRamification(f"ramification index {e} is even")
    f1 = adjoint_presentation(g.h1).split_form()
    f2 = adjoint_presentation(g.h2).split_form()
    base = f1.field
    first = witt_decompose(f1, strict=False)
    if e == 1:
        second = witt_decompose(f2, strict=False)
    else:
        ext = base.rat(UNIT, param=True)
        second = witt_decompose(scale(ext.gen(UNIT), f2.coerce(ext)), strict=False)
    Q = g.h1.algebra
    hyp = (
        conic_kernel_membership(f1, Q.a, Q.b),
        conic_kernel_membership(f2, Q.a, Q.b),
    )
    ramified = hyp[0].is_refuted and hyp[1].is_refuted
    obligations = ()
    if ramified:
        obligations = (
            Obligation(
                "h1 and h2 not similar",
                citation="needed for v(G(h)) ⊆ 2Γ",
            ),
        )
    return GenericSumResidues(ResiduePair(first, second), ramified, hyp, obligations, e)


__all__ = ["GenericSum", "GenericSumResidues", "generic_sum", "generic_sum_residues", "UNIT", "WittClass", "QuadraticForm", "jsonable"]
