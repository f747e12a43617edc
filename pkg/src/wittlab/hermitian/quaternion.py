"""Quaternion algebras (a, b) and their splitting behaviour."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ZeroElement
from ..fields.tower import Element, Tower
from ..forms.oracles import is_isotropic
from ..forms.quadratic import QuadraticForm, diag, pfister
from ..forms.verdict import Verdict


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The algebra (a, b): i^2 = a, j^2 = b, ij = -ji."""

    field: Tower
    a: Element
    b: Element

    def __post_init__(self):
        a, b = self.field.element(self.a), self.field.element(self.b)
        if a.is_zero() or b.is_zero():
            raise ZeroElement("quaternion slots must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def norm_form(self) -> QuadraticForm:
        return pfister(self.a, self.b)

    def pure_norm_form(self) -> QuadraticForm:
        return diag(self.field, 1, -self.a, -self.b)

    def conic_field(self) -> Tower:
        """Function field of the conic X^2 - aY^2 + ab = 0."""
        return self.field.conic(self.a, self.b)

    def extend(self, tower: Tower) -> "QuaternionAlgebra":
        return QuaternionAlgebra(tower, self.a.coerce(tower), self.b.coerce(tower))

    def __str__(self) -> str:
        return f"quat({self.a}, {self.b})"


def is_split(Q: QuaternionAlgebra) -> Verdict:
    """Proved: Q is split (with an isotropic vector of <1, -a, -b>).
    Refuted: Q is a division algebra (with the anisotropy certificate)."""
    v = is_isotropic(Q.pure_norm_form())
    if v.is_proved:
        cert = dict(v.certificate)
        return Verdict.proved(method="pure_norm_isotropic", isotropy_method=cert.pop("method", None), **cert)
    if v.is_refuted:
        return Verdict.refuted(method="pure_norm_anisotropic", division=True, obstruction=v.certificate)
    return Verdict.reduced(v.obligations, method="pure_norm_form")
