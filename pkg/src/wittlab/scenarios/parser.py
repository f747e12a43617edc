"""Text syntax for elements, quadratic forms, involutions and generic sums.

Forms::

    form    := tensor ('+' tensor)*
    tensor  := scaled ('x' scaled)*
    scaled  := ['-'] (factor '*')* atom
    atom    := '<' elem (',' elem)* '>' | 'pf(' elem (',' elem)* ')'
             | '<<' elem (',' elem)* '>>' | '(' form ')'

Involutions and generic sums::

    inv(quat(a, b), rho=a, phi=<form>)
    herm(quat(a, b), <i*alpha1, ..., i*alphar>)
    gsum(h1, h2, t)            h1, h2 given as herm(...) or inv(...) with rho = a

``to_text`` prints the canonical text of any parsed object.
"""
from __future__ import annotations

from ..errors import FieldMismatch, ParseError
from ..fields.expr import ExprParser, tokenize
from ..fields.tower import Element, Tower, _is_atomic, _resolver, parse_tower
from ..forms.quadratic import Block, QuadraticForm, orth_sum, scale, tensor
from ..hermitian.generic import GenericSum, generic_sum
from ..hermitian.involutions import InvolutionPresentation, SkewHermitianForm, skew_form
from ..hermitian.quaternion import QuaternionAlgebra


class FormParser(ExprParser):
    def __init__(self, text: str, tower: Tower):
        super().__init__(text, _resolver(tower), tower.const)
        self.tower = tower

    # forms
    def parse_form(self) -> QuadraticForm:
        f = self.parse_tensor()
        while self.accept("+"):
            f = orth_sum(f, self.parse_tensor())
        return f

    def parse_tensor(self) -> QuadraticForm:
        f = self.parse_scaled()
        while self.tok.kind == "name" and self.tok.text == "x":
            self.i += 1
            f = tensor(f, self.parse_scaled())
        return f

    def _at_form_atom(self) -> bool:
        tok = self.tok
        if tok.kind == "op" and tok.text in ("<", "<<"):
            return True
        return tok.kind == "name" and tok.text == "pf" and self.peek().text == "("

    def parse_scaled(self) -> QuadraticForm:
        s = self.tower.one()
        if self.accept("-"):
            s = -s
        while True:
            if self._at_form_atom():
                f = self.parse_form_atom()
                return f if s.is_one() else scale(s, f)
            if self.tok.text == "(":
                start = self.i
                try:
                    self.i += 1
                    f = self.parse_form()
                    self.expect(")")
                    return f if s.is_one() else scale(s, f)
                except ParseError:
                    self.i = start
            s = s * self.parse_power()
            self.expect("*")

    def _elements(self, close: str) -> list[Element]:
        if self.tok.text == close:
            self.error("expected at least one entry")
        out = [self.parse_sum()]
        while self.accept(","):
            out.append(self.parse_sum())
        self.expect(close)
        return out

    def parse_form_atom(self) -> QuadraticForm:
        if self.accept("<<"):
            return _pf(self.tower, self._elements(">>"))
        if self.accept("<"):
            entries = self._elements(">")
            return QuadraticForm.from_blocks(self.tower, [Block(e, ()) for e in entries])
        self.expect_name()  # pf
        self.expect("(")
        return _pf(self.tower, self._elements(")"))

    # algebras, involutions, generic sums
    def parse_quat(self) -> QuaternionAlgebra:
        self._keyword("quat")
        self.expect("(")
        a = self.parse_sum()
        self.expect(",")
        b = self.parse_sum()
        self.expect(")")
        return QuaternionAlgebra(self.tower, a, b)

    def _keyword(self, word: str):
        tok = self.tok
        if tok.kind != "name" or tok.text != word:
            self.error(f"expected {word!r}")
        self.i += 1

    def parse_inv(self) -> InvolutionPresentation:
        self._keyword("inv")
        self.expect("(")
        Q = self.parse_quat()
        self.expect(",")
        self._keyword("rho")
        self.expect("=")
        rho = self.parse_sum()
        self.expect(",")
        self._keyword("phi")
        self.expect("=")
        phi = self.parse_form()
        self.expect(")")
        return InvolutionPresentation(Q, rho, phi)

    def parse_herm(self) -> SkewHermitianForm:
        if self.tok.text == "inv":
            tok = self.tok
            sigma = self.parse_inv()
            if sigma.rho_disc != sigma.algebra.a:
                self.error("a skew-hermitian form needs rho = a", tok)
            return skew_form(sigma)
        self._keyword("herm")
        self.expect("(")
        Q = self.parse_quat()
        self.expect(",")
        self.expect("<")
        coeffs = []
        while True:
            self._keyword("i")
            self.expect("*")
            # i*alpha: alpha is a whole product, so i*a*t means i*(a*t)
            coeffs.append(self.parse_term())
            if not self.accept(","):
                break
        self.expect(">")
        self.expect(")")
        return SkewHermitianForm(Q, tuple(coeffs))

    def parse_gsum(self) -> GenericSum:
        self._keyword("gsum")
        self.expect("(")
        h1 = self.parse_herm()
        self.expect(",")
        h2 = self.parse_herm()
        self.expect(",")
        tok = self.tok
        t = self.expect_name()
        self.expect(")")
        if t in self.tower.names:
            self.error(f"{t!r} is already a symbol of {self.tower}", tok)
        try:
            return generic_sum(h1, h2, t)
        except FieldMismatch as exc:
            raise ParseError(str(exc), self.text, tok.pos) from None


def _pf(tower: Tower, slots) -> QuadraticForm:
    return QuadraticForm.from_blocks(tower, [Block(tower.one(), tuple(slots))])


def _tower(F) -> Tower:
    return parse_tower(F) if isinstance(F, str) else F


def _run(text: str, F, method: str):
    p = FormParser(text, _tower(F))
    value = getattr(p, method)()
    p.finish()
    return value


def parse_form(text: str, F) -> QuadraticForm:
    return _run(text, F, "parse_form")


def parse_involution(text: str, F) -> InvolutionPresentation:
    return _run(text, F, "parse_inv")


def parse_generic_sum(text: str, F) -> GenericSum:
    return _run(text, F, "parse_gsum")


def parse(text: str, F):
    """Parse an element, a form, an involution or a generic sum."""
    head = text.lstrip()
    if head.startswith("inv("):
        return parse_involution(text, F)
    if head.startswith("gsum("):
        return parse_generic_sum(text, F)
    if head.startswith("herm("):
        return _run(text, F, "parse_herm")
    toks = tokenize(text)
    is_form = any(
        t.text in ("<", "<<") or (t.kind == "name" and t.text == "pf" and n.text == "(")
        for t, n in zip(toks, toks[1:])
    )
    return _run(text, F, "parse_form" if is_form else "parse_sum")


def _factor(e: Element) -> str:
    s = str(e)
    return s if _is_atomic(s) else f"({s})"


def to_text(obj) -> str:
    if isinstance(obj, SkewHermitianForm):
        body = ", ".join(f"i*{_factor(c)}" for c in obj.coefficients)
        return f"herm({obj.algebra}, <{body}>)"
    if isinstance(obj, GenericSum):
        return f"gsum({to_text(obj.h1)}, {to_text(obj.h2)}, {obj.variable})"
    return str(obj)


__all__ = ["FormParser", "parse", "parse_form", "parse_involution", "parse_generic_sum", "to_text"]
