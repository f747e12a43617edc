"""The two isomorphism criteria for sigma = rho ⊗ ad(phi), sigma' = rho ⊗ ad(phi').

* over the conic field:  sigma ≅ sigma'  iff  <<a>>phi' ≅ <lambda><<a>>phi
  for some lambda in F(Q);
* over the base:  sigma ≅ sigma'  iff  there is nu in k^× with
  <<a>>phi' ≅ <nu><<a>>phi over F(Q), i.e. with
  <<a>>phi' - <nu><<a>>phi in <<a, b>> W(k)
  (the kernel of W(k) -> W(F(Q))).

Base-side questions are decided on the quadratic side; injectivity of
the Witt group of (Q, bar) into W(F(Q)) is used as a rule, not re-proved.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import FieldMismatch, UnsupportedTower
from ..fields.squares import split_square
from ..fields.tower import Element
from ..forms.kinds import field_kind
from ..forms.oracles import is_isometric, represents
from ..forms.quadratic import Block, QuadraticForm, orth_sum, pfister, scale, tensor
from ..forms.residues import conic_kernel_membership
from ..forms.verdict import Obligation, Verdict
from ..scenarios.cases import Case, WittRelation, enumerate_cases
from .involutions import InvolutionPresentation, morita_transfer


def _same_algebra(s1: InvolutionPresentation, s2: InvolutionPresentation) -> None:
    if s1.algebra != s2.algebra:
        raise FieldMismatch(f"{s1.algebra} over {s1.field} vs {s2.algebra} over {s2.field}")
    if s1.rho_disc != s2.rho_disc:
        raise FieldMismatch("the two presentations use different rho")


# ----------------------------------------------------------------------------
# over the conic function field


def _pfister_of(block: Block, tower) -> QuadraticForm:
    return QuadraticForm.from_blocks(tower, (Block(tower.one(), block.slots),))


def _usable_hints(hints, dim):
    return [h for h in (hints or ()) if len(h) == dim]


def iso_generic(
    sigma: InvolutionPresentation,
    sigma_p: InvolutionPresentation,
    lam,
    hints=None,
) -> Verdict:
    """Certify <<a>>phi' ≅ <lambda><<a>>phi over F(Q) blockwise.

    For matching blocks <s'>pi and <lambda s>pi write s'/s = r w^2 over the
    base; then s'/(lambda s) = (lambda r)(w/lambda)^2, so a vector with
    pi(v) = lambda r shows the scale ratio is a similarity factor of pi.
    """
    _same_algebra(sigma, sigma_p)
    f = morita_transfer(sigma)
    fp = morita_transfer(sigma_p)
    conic = f.field
    lam = conic.element(lam)
    base = sigma.field
    components = []
    pending = list(f.blocks or ())
    ok = fp.blocks is not None and f.blocks is not None and len(fp.blocks) == len(f.blocks)
    for bp in fp.blocks or ():
        if not ok:
            break
        match = None
        for i, b in enumerate(pending):
            if b.slots != bp.slots:
                continue
            ratio = bp.scale.coerce(base) / b.scale.coerce(base)
            r, w = split_square(ratio)
            if w is None:
                continue
            pi = _pfister_of(b, conic)
            target = lam * r.coerce(conic)
            v = represents(pi, target, _usable_hints(hints, pi.dim))
            if v.is_proved:
                match = i
                components.append(
                    {
                        "block": str(bp),
                        "against": f"<{lam}>{b}",
                        "ratio_class": str(r),
                        "represented": str(target),
                        "representation": v.certificate,
                    }
                )
                break
        if match is None:
            ok = False
            break
        pending.pop(match)
    if ok:
        return Verdict.proved(
            method="componentwise_similarity",
            lam=str(lam),
            transfer=str(fp),
            components=components,
            citation="represented values of a Pfister form are similarity factors",
        )
    fallback = is_isometric(fp, scale(lam, f))
    if fallback.is_proved:
        return Verdict.proved(method="isometry", lam=str(lam), certificate=fallback.certificate)
    return Verdict(fallback.status, dict(fallback.certificate, lam=str(lam)), fallback.obligations)


# ----------------------------------------------------------------------------
# over the base field


@dataclass(frozen=True)
class Assumption:
    """A declared external fact: the common value property fails for (y1, y2; c).

    Meaning: c ∉ (k0^× ∩ D_L(<<y1>>)) · (k0^× ∩ D_L(<<y2>>)), L = k0(sqrt b).
    """

    y1: str
    y2: str
    c: str
    citation: str
    b: str = "b"

    def statement(self) -> str:
        L = f"k0(√{self.b})"
        return (
            f"{self.c} ∉ (k0^× ∩ D_{L}(⟨⟨{self.y1}⟩⟩))·(k0^× ∩ D_{L}(⟨⟨{self.y2}⟩⟩))"
        )

    def to_json(self) -> dict:
        return {"statement": self.statement(), "citation": self.citation}


def _classes_equal(x: Element, y: Element) -> bool:
    from ..fields.squares import is_square

    return is_square(x / y)


def _match_cvp(results, assumptions, k0) -> tuple[Assumption, str] | None:
    """Two norm conditions x1 ∈ D(<<y1>>), x2 ∈ D(<<y2>>) with x1 x2 free of
    the unknown combine to x1 x2 ∈ (k0^× ∩ D(<<y1>>))(k0^× ∩ D(<<y2>>))."""
    norms = [r for r in results if r.kind == "norm"]
    if len(norms) != 2:
        return None
    (x1, y1), (x2, y2) = norms[0].data, norms[1].data
    prod = x1 * x2
    if set(prod.symbols()) & set(prod.tower.param_vars):
        prod_sq = split_square(prod)[0]
        if set(prod_sq.symbols()) & set(prod.tower.param_vars):
            return None
        prod = prod_sq
    try:
        prod0, y10, y20 = (e.coerce(k0) for e in (prod, y1, y2))
    except Exception:
        return None
    for a in assumptions:
        c = k0.element(a.c)
        z1, z2 = k0.element(a.y1), k0.element(a.y2)
        same = (_classes_equal(y10, z1) and _classes_equal(y20, z2)) or (
            _classes_equal(y10, z2) and _classes_equal(y20, z1)
        )
        if same and _classes_equal(prod0, c):
            L = f"k0(√{a.b})"
            combined = f"{prod0} ∈ (k0^× ∩ D_{L}(⟨⟨{y10}⟩⟩))·(k0^× ∩ D_{L}(⟨⟨{y20}⟩⟩))"
            return a, combined
    return None


@dataclass(frozen=True)
class CaseVerdict:
    case: Case
    status: str  # "refuted", "assumed", "open", "holds"
    obligations: tuple[Obligation, ...]
    combined: str = ""
    citation: str = ""

    def to_json(self) -> dict:
        out = self.case.to_json()
        out["status"] = self.status
        if self.combined:
            out["combined"] = {"statement": self.combined, "citation": self.citation}
        return out


def judge_case(case: Case, assumptions, k0) -> CaseVerdict:
    obligations = []
    failed = [r for r in case.results if r.status == "fails"]
    open_ = [r for r in case.results if r.status == "open"]
    for r in case.results:
        if r.status in ("fails", "holds"):
            obligations.append(
                Obligation(r.statement, "", "discharged", r.status == "holds", context=case.coset)
            )
    if failed:
        for r in open_:
            obligations.append(Obligation(r.statement, "", "open", context=case.coset))
        return CaseVerdict(case, "refuted", tuple(obligations))
    if not open_:
        return CaseVerdict(case, "holds", tuple(obligations))
    match = _match_cvp(open_, assumptions, k0)
    if match is not None and len(open_) == 2:
        a, combined = match
        for r in open_:
            obligations.append(Obligation(r.statement, a.citation, "assumed", context=case.coset))
        return CaseVerdict(case, "assumed", tuple(obligations), combined, a.citation)
    for r in open_:
        obligations.append(Obligation(r.statement, "", "open", context=case.coset))
    return CaseVerdict(case, "open", tuple(obligations))


def iso_base(
    sigma: InvolutionPresentation,
    sigma_p: InvolutionPresentation,
    assumptions=(),
    chain=None,
    candidates=None,
) -> Verdict:
    """Decide sigma ≅ sigma' over the base field k (a Laurent tower over k0)."""
    _same_algebra(sigma, sigma_p)
    k = sigma.field
    if field_kind(k) != "laurent":
        raise UnsupportedTower(f"the coset frame needs a Laurent tower, got {k}")
    Q = sigma.algebra
    a = sigma.rho_disc
    fixed = sigma_p.split_form()
    moving = sigma.split_form()
    # explicit candidates first: <<a>>phi' ≅ <nu><<a>>phi already over k
    nus = [k.element(nu) for nu in (candidates if candidates is not None else (1,))]
    for nu in nus:
        v = is_isometric(fixed, scale(nu, moving))
        if v.is_proved:
            return Verdict.proved(method="explicit_nu", nu=str(nu), isometry=v.certificate)
    absorb = str(a) if str(a) in k.laurent_vars else None
    relation = WittRelation(fixed, moving, (Q.a, Q.b), absorb)
    cases = enumerate_cases(relation, chain)
    k0 = k.prefix(next(i for i, layer in enumerate(k.layers) if layer.kind == "laurent"))
    judged = [judge_case(c, assumptions, k0) for c in cases]
    obligations = [o for j in judged for o in j.obligations]
    cert = {
        "relation": str(relation),
        "cases": [j.to_json() for j in judged],
        "chain": _chain_text(chain),
    }
    statuses = {j.status for j in judged}
    complete = _chain_complete(chain)
    if "holds" in statuses and complete:
        j = next(j for j in judged if j.status == "holds")
        nu = j.case.nu
        return Verdict.proved(method="coset_holds", nu=str(nu).replace("nu0", "1"), **cert)
    if statuses <= {"refuted", "assumed"}:
        used = sorted({j.citation for j in judged if j.citation})
        cert["assumptions_used"] = used
        return Verdict(_refuted(), cert, tuple(obligations))
    # the frame left questions open: a candidate whose difference dies over
    # F(Q) still settles it (equal dimensions, so Witt cancellation turns
    # this into an isometry there)
    for nu in nus:
        w = conic_kernel_membership(orth_sum(fixed, scale(-nu, moving)), Q.a, Q.b)
        if w.is_proved:
            return Verdict.proved(method="explicit_nu", nu=str(nu), kernel=w.certificate)
    return Verdict.reduced(obligations, **cert)


def _refuted():
    from ..forms.verdict import Status

    return Status.REFUTED


def _chain_text(chain) -> list:
    if chain is None:
        return []
    if isinstance(chain, dict):
        return [f"{k}:{v}" for k, v in chain.items()]
    return [f"{c[0]}:{c[1]}" if isinstance(c, tuple) else str(c) for c in chain]


def _chain_complete(chain) -> bool:
    if chain is None:
        return True
    items = chain.values() if isinstance(chain, dict) else [c[1] if isinstance(c, tuple) else "both" for c in chain]
    return all(w == "both" for w in items)


__all__ = [
    "iso_generic",
    "iso_base",
    "Assumption",
    "CaseVerdict",
    "judge_case",
    "pfister",
    "tensor",
]
