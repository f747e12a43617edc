"""Skew-hermitian forms over (Q, canonical involution) and the involutions
rho ⊗ ad(phi) on M_r(Q) they are adjoint to.

Only decomposed presentations are modelled: sigma = rho ⊗ ad(phi) where rho
is the orthogonal involution Int(i) ∘ bar of discriminant a on Q = (a, b).
The skew-hermitian form <i*alpha_1, ..., i*alpha_r> corresponds to
phi = <alpha_1, ..., alpha_r>, and after extending to the conic function
field the involution is adjoint to the quadratic form <<a>> phi.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConicMismatch, FieldMismatch, ZeroElement
from ..fields.squares import SquareClass
from ..fields.tower import Element, Tower
from ..forms.brauer import BrauerTwoTorsionClass, clifford_invariant
from ..forms.quadratic import Block, QuadraticForm, discriminant, pfister, tensor
from .quaternion import QuaternionAlgebra


@dataclass(frozen=True)
class SkewHermitianForm:
    algebra: QuaternionAlgebra
    coefficients: tuple[Element, ...]
    blocks: tuple[Block, ...] | None = None
    pure_part: str = "i"

    def __post_init__(self):
        tower = self.algebra.field
        coeffs = tuple(tower.element(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a skew-hermitian form needs at least one coefficient")
        if any(c.is_zero() for c in coeffs):
            raise ZeroElement("coefficients must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def __str__(self) -> str:
        return "<" + ", ".join(f"{self.pure_part}*{_paren(c)}" for c in self.coefficients) + ">"


def _paren(e: Element) -> str:
    from ..fields.tower import _is_atomic

    s = str(e)
    return s if _is_atomic(s) else f"({s})"


@dataclass(frozen=True)
class InvolutionPresentation:
    """sigma = rho ⊗ ad(phi) on M_r(Q), disc(rho) = rho_disc."""

    algebra: QuaternionAlgebra
    rho_disc: Element
    phi: QuadraticForm

    def __post_init__(self):
        if self.phi.field != self.algebra.field:
            raise FieldMismatch(f"phi over {self.phi.field}, algebra over {self.algebra.field}")
        object.__setattr__(self, "rho_disc", self.algebra.field.element(self.rho_disc))

    @property
    def field(self) -> Tower:
        return self.algebra.field

    @property
    def degree(self) -> int:
        return 2 * self.phi.dim

    def split_form(self) -> QuadraticForm:
        """<<rho_disc>> phi over the base field."""
        return tensor(pfister(self.rho_disc), self.phi)

    def __str__(self) -> str:
        return f"inv({self.algebra}, rho={self.rho_disc}, phi={self.phi})"


def adjoint_presentation(h: SkewHermitianForm) -> InvolutionPresentation:
    tower = h.algebra.field
    if h.blocks is not None:
        phi = QuadraticForm(tower, h.coefficients, h.blocks)
    else:
        phi = QuadraticForm(tower, h.coefficients, tuple(Block(c, ()) for c in h.coefficients))
    return InvolutionPresentation(h.algebra, h.algebra.a, phi)


def skew_form(sigma: InvolutionPresentation) -> SkewHermitianForm:
    """Inverse of adjoint_presentation (requires rho_disc = a)."""
    return SkewHermitianForm(sigma.algebra, sigma.phi.entries, sigma.phi.blocks)


def morita_transfer(sigma: InvolutionPresentation, conic: Tower | None = None) -> QuadraticForm:
    """<<a>> phi extended to the function field of the conic of Q."""
    Q = sigma.algebra
    expected = Q.conic_field()
    if conic is None:
        conic = expected
    elif conic != expected:
        layer = conic.conic_layer()
        if layer is None or conic.base() != Q.field:
            raise ConicMismatch(f"{conic} is not a conic field over {Q.field}")
        a, b = Q.field.element(layer.args[0]), Q.field.element(layer.args[1])
        if (a, b) != (Q.a, Q.b):
            raise ConicMismatch(f"conic of ({a}, {b}) does not match {Q}")
    return sigma.split_form().coerce(conic)


def e1_invariant(sigma: InvolutionPresentation) -> SquareClass:
    return discriminant(sigma.split_form())


def e2_invariant(sigma: InvolutionPresentation) -> BrauerTwoTorsionClass:
    """Clifford class of <<a>> phi modulo the subgroup generated by [Q]."""
    Q = sigma.algebra
    return clifford_invariant(sigma.split_form()).simplified().quotient((Q.a, Q.b))
