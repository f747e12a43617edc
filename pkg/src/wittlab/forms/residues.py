"""Springer residues and membership in Pfister ideals of Laurent towers.

For K = k((t)) and a Pfister form pi over K, membership theta in pi W(K) is
pushed down one layer at a time. Normalize the slots of pi so that at most
one has odd valuation (<<x, y>> = <<x, -xy>>), then

* all slots units:  theta in pi W(K)  iff  d1(theta), d2(theta) in pi0 W(k)
* one slot t*u:     theta in pi W(K)  iff  d1(theta) in pi0 W(k) and
                    d2(theta) + <u> d1(theta) = 0 in W(k)

where pi0 is the Pfister form on the residues of the unit slots. At the
bottom, <<b>> W(k0) is the kernel of W(k0) -> W(k0(sqrt b)), so membership
means hyperbolicity over L = k0(sqrt b).

The bottom conditions are translated into short statements over L such as
"x ∈ L^×2", "x ≡ y mod L^×2" or "x ∈ D_L(<<y>>)". Statements free of
parameters are decided exactly by square-class computations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import FieldMismatch, NonMonomialEntry, NotLaurentLayer, UnsupportedTower, WittlabError
from ..fields.squares import is_square, square_class
from ..fields.tower import Element, Tower, _is_atomic
from ..fields.valuation import ValuationSpec, monomial_split
from .brauer import BrauerTwoTorsionClass, _factor_element, clifford_invariant
from .kinds import field_kind
from .oracles import ResiduePair, WittClass, _cancel_pairs, witt_decompose
from .quadratic import Block, QuadraticForm, plain, scale, signed_determinant
from .verdict import Obligation, Verdict


def springer_residues(f: QuadraticForm, v: ValuationSpec, normalize: bool = True) -> ResiduePair:
    """First and second residue forms at the top Laurent layer.

    With normalize=True entries are first replaced by square-class
    representatives (t + t^2 becomes t); otherwise a non-monomial entry raises.
    """
    tower = f.field
    if not tower.layers or tower.layers[-1].kind != "laurent" or tower.layers[-1].names[0] != v.variable:
        v.check(tower)
        raise NotLaurentLayer(f"{v.variable!r} is not the top Laurent layer of {tower}")
    res = v.residue_tower(tower)
    first, second = [], []
    for e in f.entries:
        try:
            m, u = monomial_split(e, v)
        except NonMonomialEntry:
            if not normalize:
                raise
            m, u = monomial_split(square_class(e).rep, v)
        (second if m % 2 else first).append(u)
    w1 = witt_decompose(plain(res, first), strict=False) if first else WittClass(res, None)
    w2 = witt_decompose(plain(res, second), strict=False) if second else WittClass(res, None)
    return ResiduePair(w1, w2)


def _residue_forms(theta: QuadraticForm, t: str):
    """Residue forms (lists of units) without any Witt reduction."""
    res = theta.field.without(t)
    first, second = [], []
    for e in theta.entries:
        m, u = monomial_split(square_class(e).rep, t)
        (second if m % 2 else first).append(u)
    return res, first, second


# ----------------------------------------------------------------------------
# residue cascade


@dataclass(frozen=True)
class BaseCondition:
    """theta0 in <<slots>> W(k0) over the base of the tower.

    ``slots`` None means the zero ideal (theta0 must be hyperbolic).
    """

    form: QuadraticForm
    slots: tuple[Element, ...] | None
    path: tuple[str, ...]

    def describe(self) -> str:
        ideal = "0" if self.slots is None else "<<" + ", ".join(map(str, self.slots)) + ">> W"
        return f"{self.form} ∈ {ideal} ({' / '.join(self.path)})"


def _normalize_slots(slots, t: str):
    """Residue slots plus the residue unit of the odd slot (or None)."""
    odd = None
    units = []
    for s in slots:
        m, u = monomial_split(square_class(s).rep, t)
        if m % 2 == 0:
            units.append(u)
        elif odd is None:
            odd = u
        else:
            units.append(-odd * u)  # <<t u0, t u1>> = <<t u0, -u0 u1>>
    return units, odd


def ideal_conditions(theta: QuadraticForm, slots, chain: dict | None = None, path=()) -> list[BaseCondition]:
    """Necessary conditions at the base for theta in <<slots>> W(K).

    ``chain`` maps a Laurent variable to "first", "second" or "both" (the
    default); with "both" everywhere the conditions are also sufficient.
    """
    chain = chain or {}
    tower = theta.field
    if slots is not None:
        slots = tuple(slots)
        for s in slots:
            if is_square(s):
                slots = None  # the Pfister form is hyperbolic: zero ideal
                break
    if not tower.laurent_vars:
        if slots == ():
            return []
        return [BaseCondition(theta, slots, tuple(path))]
    t = tower.laurent_vars[-1]
    which = chain.get(t, "both")
    res, d1, d2 = _residue_forms(theta, t)
    f1 = plain(res, d1) if d1 else None
    f2 = plain(res, d2) if d2 else None
    out = []
    if slots is None:
        if which in ("first", "both") and f1:
            out += ideal_conditions(f1, None, chain, path + (f"{t}:first",))
        if which in ("second", "both") and f2:
            out += ideal_conditions(f2, None, chain, path + (f"{t}:second",))
        return out
    units, odd = _normalize_slots(slots, t)
    if which in ("first", "both") and f1:
        out += ideal_conditions(f1, tuple(units), chain, path + (f"{t}:first",))
    if which in ("second", "both"):
        if odd is None:
            if f2:
                out += ideal_conditions(f2, tuple(units), chain, path + (f"{t}:second",))
        else:
            parts = ([] if f2 is None else list(f2.entries)) + (
                [] if f1 is None else [odd * e for e in f1.entries]
            )
            if parts:
                out += ideal_conditions(plain(res, parts), None, chain, path + (f"{t}:second",))
    return out


# ----------------------------------------------------------------------------
# translation of base conditions


@dataclass(frozen=True)
class ConditionResult:
    status: str  # "holds", "fails" or "open"
    statement: str
    path: tuple[str, ...]
    certificate: dict = field(default_factory=dict)
    parameters: tuple[str, ...] = ()
    kind: str = ""  # "square", "congruent", "norm", "hyperbolic", ...
    data: tuple = ()  # (x,) or (x, y) as Elements of the base

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "statement": self.statement,
            "path": list(self.path),
            "certificate": self.certificate,
        }


def _paren(e: Element | str) -> str:
    text = str(e)
    return text if _is_atomic(text) else f"({text})"


def _field_name(b: Element) -> str:
    return f"k0(√{b})" if _is_atomic(str(b)) else f"k0(√({b}))"


def _params_in(e: Element) -> tuple[str, ...]:
    params = set(e.tower.param_vars)
    return tuple(sorted(params & e.symbols()))


def _factors_mod_L(x: Element, b: Element) -> list[Element]:
    """Odd-multiplicity factors of x in k0, dropping those that are squares in L."""
    if field_kind(x.tower) != "function":
        return [square_class(x).rep]
    facs = list(_factor_element(x).values())
    out = []
    for f in facs:
        if f == b or is_square(f * b):
            continue  # b is a square in L = k0(sqrt b)
        out.append(f)
    return sorted(out, key=lambda e: (len(e.symbols()), len(str(e)), str(e)))


def _product_text(factors, tower: Tower) -> str:
    if not factors:
        return "1"
    if len(factors) == 1:
        return str(factors[0])
    return "*".join(_paren(f) for f in factors)


def _square_rep(x: Element, b: Element) -> Element:
    prod = x.tower.one()
    for f in _factors_mod_L(x, b):
        prod = prod * f
    return prod


def _L_tower(k0: Tower, b: Element) -> Tower | None:
    try:
        return k0.sqrt(b)
    except Exception:
        return None


def _square_in_L(x: Element, L: Tower) -> bool | None:
    """None when the question is outside the supported towers."""
    try:
        return is_square(x.coerce(L))
    except UnsupportedTower:
        pass
    # retry over the subtower without the parameters x does not involve
    tower = L
    for name in L.param_vars:
        if name in x.symbols():
            return None
        try:
            tower = tower.without(name)
        except ValueError:
            return None
    if tower == L:
        return None
    try:
        return is_square(x.coerce(tower))
    except (UnsupportedTower, WittlabError):
        return None


def evaluate_condition(cond: BaseCondition) -> ConditionResult:
    form = cond.form
    k0 = form.field
    if cond.slots is None:
        w = witt_decompose(form, strict=False)
        stmt = f"{form} is hyperbolic over k0"
        if w.is_zero:
            return ConditionResult("holds", stmt, cond.path, {"witt": w.to_json()})
        if w.certified:
            return ConditionResult("fails", stmt, cond.path, {"kernel": str(w.anisotropic_kernel)})
        return ConditionResult("open", stmt, cond.path, kind="hyperbolic")
    if len(cond.slots) == 1:
        return _evaluate_one_fold(form, cond.slots[0], cond.path)
    return _evaluate_general(form, cond.slots, cond.path)


def _evaluate_one_fold(form: QuadraticForm, b: Element, path) -> ConditionResult:
    k0 = form.field
    L = _L_tower(k0, b)
    Lname = _field_name(b)
    entries = list(form.entries)
    if L is None:
        return ConditionResult("open", f"{form} is hyperbolic over {Lname}", path, kind="hyperbolic")
    # cancel hyperbolic pairs over L, keeping k0 representatives
    trail = []
    while entries:
        lifted = [e.coerce(L) for e in entries]
        rest, pair = _cancel_pairs(lifted)
        if rest is None:
            break
        trail.append([str(entries[pair[0]]), str(entries[pair[1]])])
        entries = [e for k, e in enumerate(entries) if k not in pair]
    cert = {"cancelled_over_L": trail, "kernel": [str(e) for e in entries]}
    n = len(entries)
    if n == 0:
        return ConditionResult("holds", f"{form} is hyperbolic over {Lname}", path, cert)
    if n % 2:
        return ConditionResult("fails", f"dim {n} kernel over {Lname} is not hyperbolic", path, cert)
    if n == 2:
        x = -entries[0] * entries[1]
        facs = _factors_mod_L(x, b)
        rep = _square_rep(x, b)
        stmt = f"{_product_text(facs, k0)} ∈ {Lname}^×2"
        params = _params_in(rep)
        if not params:
            holds = _square_in_L(rep, L)
            if holds is None:
                return ConditionResult("open", stmt, path, cert, (), "square", (rep,))
            return ConditionResult("holds" if holds else "fails", stmt, path, cert, (), "square", (rep,))
        return ConditionResult("open", stmt, path, cert, params, "square", (rep,))
    if n == 4:
        d = entries[0] * entries[1] * entries[2] * entries[3]
        d_square = _square_in_L(d, L)
        if d_square is None:
            stmt = f"{form} is hyperbolic over {Lname}"
            return ConditionResult("open", stmt, path, cert, kind="hyperbolic")
        if not d_square:
            facs = _factors_mod_L(d, b)
            rep = _square_rep(d, b)
            params = _params_in(rep)
            if len(facs) == 2:
                stmt = f"{facs[0]} ≡ {facs[1]} mod {Lname}^×2"
                data, kind = (facs[0], facs[1]), "congruent"
            else:
                stmt = f"{_product_text(facs, k0)} ∈ {Lname}^×2"
                data, kind = (rep,), "square"
            status = "open" if params else "fails"
            cert = dict(cert, discriminant=str(rep))
            return ConditionResult(status, stmt, path, cert, params, kind, data)
        # trivial discriminant: <e1> <<x, y>> with x carrying the parameters
        e1 = entries[0]
        ratios = [-e / e1 for e in entries[1:]]
        free = [r for r in ratios if not _params_in(_square_rep(r, b))]
        with_param = [r for r in ratios if _params_in(_square_rep(r, b))]
        if free and with_param:
            y, x = _square_rep(free[0], b), _square_rep(with_param[0], b)
        else:
            y, x = _square_rep(ratios[1], b), _square_rep(ratios[0], b)
        stmt = f"{x} ∈ D_{Lname}(⟨⟨{y}⟩⟩)"
        params = _params_in(x) + _params_in(y)
        return ConditionResult("open", stmt, path, cert, tuple(sorted(set(params))), "norm", (x, y))
    return ConditionResult(
        "open", f"{plain(k0, entries)} is hyperbolic over {Lname}", path, cert, kind="hyperbolic"
    )


def _evaluate_general(form: QuadraticForm, slots, path) -> ConditionResult:
    """Membership in an n-fold Pfister ideal, n >= 2: necessary I^2 tests and
    an explicit factorization when the kernel is small."""
    k0 = form.field
    ideal = "<<" + ", ".join(map(str, slots)) + ">> W(k0)"
    stmt = f"{form} ∈ {ideal}"
    w = witt_decompose(form, strict=False)
    if w.is_zero:
        return ConditionResult("holds", stmt, path, {"witt": w.to_json()})
    kernel = w.anisotropic_kernel
    if w.certified and kernel.dim % (2 ** len(slots)):
        return ConditionResult("fails", stmt, path, {"kernel_dim": kernel.dim})
    if not is_square(signed_determinant(kernel)):
        return ConditionResult("fails", stmt, path, {"discriminant": str(square_class(signed_determinant(kernel)))})
    if w.certified and kernel.dim == 2 ** len(slots):
        pi = QuadraticForm.from_blocks(k0, (Block(k0.one(), tuple(slots)),))
        from .oracles import is_isometric

        v = is_isometric(kernel, scale(kernel.entries[0], pi))
        if v.is_proved:
            return ConditionResult("holds", stmt, path, {"factorization": f"<{kernel.entries[0]}>{pi}"})
        if v.is_refuted and kernel.dim == 4:
            # anisotropic 4-dim forms in <<a, b>> W are the similar copies of pi
            return ConditionResult("fails", stmt, path, {"not_similar": v.to_json()})
    return ConditionResult("open", stmt, path)


# ----------------------------------------------------------------------------
# conic kernel


def conic_kernel_membership(theta: QuadraticForm, a, b) -> Verdict:
    """theta in <<a, b>> W(k), the kernel of W(k) -> W(k(C)) for the conic of (a, b)."""
    tower = theta.field
    a, b = tower.element(a), tower.element(b)
    if a.tower != tower or b.tower != tower:
        raise FieldMismatch("slots must live over the field of theta")
    w = witt_decompose(theta, strict=False)
    if w.is_zero:
        return Verdict.proved(method="hyperbolic", witt=w.to_json())
    kernel = w.anisotropic_kernel
    if w.certified and kernel.dim % 2:
        return Verdict.refuted(method="dimension", kernel=str(kernel))
    try:
        disc = signed_determinant(kernel)
        if not is_square(disc):
            return Verdict.refuted(method="discriminant", discriminant=str(square_class(disc)))
    except UnsupportedTower:
        pass
    kind = field_kind(tower)
    if kind == "laurent":
        conds = ideal_conditions(kernel, (a, b))
        results = [evaluate_condition(c) for c in conds]
        failed = [r for r in results if r.status == "fails"]
        if failed:
            return Verdict.refuted(method="residues", failed=[r.to_json() for r in failed])
        if all(r.status == "holds" for r in results):
            return Verdict.proved(method="residues", conditions=[r.to_json() for r in results])
        return Verdict.reduced(
            [Obligation(r.statement) for r in results if r.status == "open"],
            method="residues",
            conditions=[r.to_json() for r in results],
        )
    r = _evaluate_general(kernel, (a, b), ())
    if r.status == "holds":
        return Verdict.proved(method="factorization", **r.certificate)
    if r.status == "fails":
        return Verdict.refuted(method="invariants", **r.certificate)
    # Clifford invariant of an element of <<a, b>> W lies in {0, (a, b)}
    c = clifford_invariant(kernel)
    v0 = c.is_trivial()
    v1 = (c + BrauerTwoTorsionClass(tower, ((a, b),))).is_trivial()
    if v0.is_refuted and v1.is_refuted:
        return Verdict.refuted(method="clifford_invariant", clifford=str(c))
    return Verdict.reduced([Obligation(f"{kernel} ∈ <<{a}, {b}>> W({tower})")], method="unsupported")


__all__ = [
    "springer_residues",
    "ResiduePair",
    "BaseCondition",
    "ConditionResult",
    "ideal_conditions",
    "evaluate_condition",
    "conic_kernel_membership",
]
