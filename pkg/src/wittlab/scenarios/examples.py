"""Executable replays of the two worked examples.

Example 1: over k = k0((a))((t)) with Q = (a, b),
    phi  = <<b+1>> + <t><<b+c^2>>,   phi' = <<b+1>> + <ct><<b+c^2>>.
Example 2: over k((u)),
    psi  = phi  + <u><<P>>,          psi' = phi' + <c'u><<P>>,
with P = (b+1)(b+c^2) and c' = 1 - (b+1)c/(b+c^2).

Each step records the operation, its inputs as text and the verdict.
Reports never contain timings, so two runs give identical JSON.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..fields.squares import is_square
from ..fields.tower import Element, Tower
from ..forms.quadratic import QuadraticForm, orth_sum, pfister, scale
from ..forms.verdict import Obligation, Status, Verdict, jsonable
from ..hermitian.criteria import Assumption, iso_base, iso_generic
from ..hermitian.involutions import InvolutionPresentation, e1_invariant, e2_invariant
from ..hermitian.quaternion import QuaternionAlgebra

CITE_QB = "[STW Rem. 5.4]"
CITE_LBC = "[STW Rem. 5.10]"

CHAIN_EX1 = (("t", "both"), ("a", "first"))
CHAIN_EX2 = (("u", "first"), ("t", "both"), ("a", "first"))


@dataclass(frozen=True)
class Step:
    op: str
    inputs: dict
    verdict: Verdict

    def to_json(self) -> dict:
        return {"op": self.op, "inputs": jsonable(self.inputs), "verdict": self.verdict.to_json()}


@dataclass(frozen=True)
class Scenario:
    name: str
    tower: Tower
    inputs: dict
    assumptions: tuple[Assumption, ...]
    steps: tuple[str, ...]

    def __post_init__(self):
        for a in self.assumptions:
            if not a.citation:
                raise ValueError("every assumption needs a citation")


@dataclass
class Report:
    scenario: Scenario
    steps: list[Step] = field(default_factory=list)
    final: dict = field(default_factory=dict)
    seconds: float = 0.0

    def step(self, op: str) -> Step:
        return next(s for s in self.steps if s.op == op)

    @property
    def status(self) -> str:
        return self.final.get("status", "")

    @property
    def has_reduced(self) -> bool:
        return any(s.verdict.is_reduced for s in self.steps)

    @property
    def exit_code(self) -> int:
        return 2 if self.has_reduced else 0

    def obligations(self) -> list[Obligation]:
        return [o for s in self.steps for o in s.verdict.obligations]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario.name,
            "field": str(self.scenario.tower),
            "inputs": jsonable(self.scenario.inputs),
            "assumptions": [a.to_json() for a in self.scenario.assumptions],
            "steps": [s.to_json() for s in self.steps],
            "final": self.final,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=False)

    def summary(self) -> str:
        lines = [f"scenario {self.scenario.name} over {self.scenario.tower}"]
        for s in self.steps:
            lines.append(f"  {s.op}: {s.verdict.status}")
            for o in s.verdict.obligations:
                tag = o.status if o.holds is None else f"{o.status}, holds={o.holds}"
                cite = f" {o.citation}" if o.citation else ""
                ctx = f"[{o.context}] " if o.context else ""
                lines.append(f"    {ctx}{o.statement} ({tag}){cite}")
        for key, value in self.final.items():
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)


# ----------------------------------------------------------------------------
# shared pieces


def _k0(choice: str, c) -> tuple[Tower, str]:
    if choice == "Qb":
        return Tower.Q().rat("b"), CITE_QB
    if choice == "lbc":
        if c is not None:
            raise ValueError("with k0 = l(b, c) the scalar c is the indeterminate")
        return Tower.Q().rat("b").rat("c"), CITE_LBC
    raise ValueError(f"unknown k0 choice {choice!r} (use 'Qb' or 'lbc')")


def _c_of(k: Tower, choice: str, c) -> Element:
    if choice == "lbc":
        return k.gen("c")
    return k.element(2 if c is None else c)


def _identity_step(op: str, lhs: Element, rhs: Element, text: str) -> Step:
    diff = lhs - rhs
    inputs = {"identity": text, "lhs": str(lhs), "rhs": str(rhs)}
    if diff.is_zero():
        return Step(op, inputs, Verdict.proved(method="exact_normalization", difference="0"))
    return Step(op, inputs, Verdict.refuted(method="exact_normalization", difference=str(diff)))


def _conic_identities(k: Tower, c: Element, steps: list[Step]):
    a, b = k.gen("a"), k.gen("b")
    C = QuaternionAlgebra(k, a, b).conic_field()
    X, Y = C.gen("X"), C.gen("Y")
    aC, bC, cC = a.coerce(C), b.coerce(C), c.coerce(C)
    steps.append(
        _identity_step(
            "conic_identity_1",
            X**2 - aC * (Y + 1) ** 2 + aC * (bC + 1),
            -2 * aC * Y,
            "X^2 - a(Y+1)^2 + a(b+1) = -2aY",
        )
    )
    steps.append(
        _identity_step(
            "conic_identity_c",
            X**2 - aC * (Y + cC) ** 2 + aC * (bC + cC**2),
            -2 * aC * Y * cC,
            "X^2 - a(Y+c)^2 + a(b+c^2) = -2aYc",
        )
    )
    return C, X, Y


def _final(status: Status, citations) -> str:
    if status is Status.REFUTED and citations:
        return f"Refuted modulo {', '.join(citations)}"
    return status.value


def _claims(gen: Verdict, base: Verdict) -> dict:
    cites = base.certificate.get("assumptions_used", []) if base.is_refuted else []
    generic = f"σ_F(Q) ≅ σ′_F(Q): {gen.status}"
    if base.is_refuted:
        claim = "σ ≇ σ′" + (f" assuming {', '.join(cites)}" if cites else "")
    elif base.is_proved:
        claim = f"σ ≅ σ′ with ν = {base.certificate.get('nu')}"
    else:
        claim = "σ ≅ σ′ undecided: obligations remain"
    return {"generic": generic, "claim": claim, "status": _final(base.status, cites)}


# ----------------------------------------------------------------------------
# Example 1


def example1_scenario(k0: str = "Qb", c=None, control: bool = False) -> Scenario:
    if control:
        k0, c = "Qb", 1
    base, cite = _k0(k0, c)
    k = base.laurent("a").laurent("t")
    a, b, t = k.gen("a"), k.gen("b"), k.gen("t")
    cc = _c_of(k, k0, c)
    Q = QuaternionAlgebra(k, a, b)
    phi = orth_sum(pfister(b + 1), scale(t, pfister(b + cc**2)))
    phip = orth_sum(pfister(b + 1), scale(cc * t, pfister(b + cc**2)))
    assumptions = () if control else (Assumption("b + 1", str(b + cc**2), str(cc), cite),)
    name = "example1-control" if control else f"example1[{k0}]"
    return Scenario(
        name,
        k,
        {
            "sigma": InvolutionPresentation(Q, a, phi),
            "sigma_p": InvolutionPresentation(Q, a, phip),
            "c": cc,
        },
        assumptions,
        ("conic_identity_1", "conic_identity_c", "iso_generic", "iso_base"),
    )


def run_example1(k0: str = "Qb", c=None, control: bool = False) -> Report:
    start = time.perf_counter()
    sc = example1_scenario(k0, c, control)
    k = sc.tower
    report = Report(sc)
    C, X, Y = _conic_identities(k, sc.inputs["c"], report.steps)
    sigma, sigma_p = sc.inputs["sigma"], sc.inputs["sigma_p"]
    lam = -2 * k.gen("a").coerce(C) * Y
    gen = iso_generic(sigma, sigma_p, lam)
    report.steps.append(Step("iso_generic", {"sigma": sigma, "sigma_p": sigma_p, "lambda": lam}, gen))
    base = iso_base(sigma, sigma_p, sc.assumptions, chain=CHAIN_EX1)
    report.steps.append(
        Step("iso_base", {"sigma": sigma, "sigma_p": sigma_p, "chain": [f"{v}:{w}" for v, w in CHAIN_EX1]}, base)
    )
    report.final = _claims(gen, base)
    report.seconds = time.perf_counter() - start
    return report


# ----------------------------------------------------------------------------
# Example 2


def example2_scenario(k0: str = "lbc", c=None) -> Scenario:
    base, cite = _k0(k0, c)
    k = base.laurent("a").laurent("t").laurent("u")
    a, b, t, u = (k.gen(n) for n in "abtu")
    cc = _c_of(k, k0, c)
    P = (b + 1) * (b + cc**2)
    cp = 1 - (b + 1) * cc / (b + cc**2)
    Q = QuaternionAlgebra(k, a, b)
    psi = orth_sum(orth_sum(pfister(b + 1), scale(t, pfister(b + cc**2))), scale(u, pfister(P)))
    psip = orth_sum(orth_sum(pfister(b + 1), scale(cc * t, pfister(b + cc**2))), scale(cp * u, pfister(P)))
    return Scenario(
        f"example2[{k0}]",
        k,
        {
            "tau": InvolutionPresentation(Q, a, psi),
            "tau_p": InvolutionPresentation(Q, a, psip),
            "c": cc,
            "c_prime": cp,
            "P": P,
        },
        (Assumption("b + 1", str(b + cc**2), str(cc), cite),),
        ("c_prime_nonzero", "summed_identity", "iso_generic", "iso_base", "e1", "e2"),
    )


def _c_prime_step(k: Tower, c: Element, cp: Element) -> Step:
    # c' = 0 would force b + c^2 = (b+1)c, so <<a, c>> hyperbolic and c a square
    k0 = k.prefix(next(i for i, layer in enumerate(k.layers) if layer.kind == "laurent"))
    c_square = is_square(c.coerce(k0))
    inputs = {"c_prime": cp, "c": c}
    cert = {"c_prime": str(cp), "c_is_square_in_k0": c_square}
    if not cp.is_zero() and not c_square:
        return Step("c_prime_nonzero", inputs, Verdict.proved(method="exact", **cert))
    return Step("c_prime_nonzero", inputs, Verdict.refuted(method="exact", **cert))


def summed_identity_vector(C: Tower, P: Element, c: Element, X: Element, Y: Element):
    bc = C.gen("b") + c**2
    return (X, Y + 1, X / bc, (Y + c) / bc)


def run_example2(k0: str = "lbc", c=None) -> Report:
    start = time.perf_counter()
    sc = example2_scenario(k0, c)
    k = sc.tower
    report = Report(sc)
    cc, cp, P = sc.inputs["c"], sc.inputs["c_prime"], sc.inputs["P"]
    report.steps.append(_c_prime_step(k, cc, cp))
    a = k.gen("a")
    C = QuaternionAlgebra(k, a, k.gen("b")).conic_field()
    X, Y = C.gen("X"), C.gen("Y")
    aC, PC, cC = a.coerce(C), P.coerce(C), cc.coerce(C)
    vec = summed_identity_vector(C, PC, cC, X, Y)
    pi = pfister(aC, PC)
    report.steps.append(
        _identity_step(
            "summed_identity",
            pi.value(vec),
            -2 * aC * Y * cp.coerce(C),
            "pf(a, (b+1)(b+c^2)) at (X, Y+1, X/(b+c^2), (Y+c)/(b+c^2)) = -2aYc'",
        )
    )
    tau, tau_p = sc.inputs["tau"], sc.inputs["tau_p"]
    lam = -2 * aC * Y
    gen = iso_generic(tau, tau_p, lam, hints=[vec])
    report.steps.append(Step("iso_generic", {"sigma": tau, "sigma_p": tau_p, "lambda": lam}, gen))
    base = iso_base(tau, tau_p, sc.assumptions, chain=CHAIN_EX2)
    report.steps.append(
        Step("iso_base", {"sigma": tau, "sigma_p": tau_p, "chain": [f"{v}:{w}" for v, w in CHAIN_EX2]}, base)
    )
    for name, fn in (("e1", _e1_step), ("e2", _e2_step)):
        report.steps.append(fn(tau, tau_p, name))
    report.final = _claims(gen, base)
    report.seconds = time.perf_counter() - start
    return report


def _e1_step(tau, tau_p, name) -> Step:
    d, dp = e1_invariant(tau), e1_invariant(tau_p)
    cert = {"e1_tau": str(d), "e1_tau_p": str(dp)}
    trivial = d.is_trivial() and dp.is_trivial()
    v = Verdict.proved(method="discriminant", **cert) if trivial else Verdict.refuted(method="discriminant", **cert)
    return Step(name, {"sigma": tau, "sigma_p": tau_p}, v)


def _e2_step(tau, tau_p, name) -> Step:
    classes = [e2_invariant(s) for s in (tau, tau_p)]
    verdicts = [c.is_trivial() for c in classes]
    cert = {
        "e2_tau": str(classes[0]),
        "e2_tau_p": str(classes[1]),
        "triviality": [v.to_json() for v in verdicts],
    }
    if all(v.is_proved for v in verdicts):
        v = Verdict.proved(method="clifford_modulo_Q", **cert)
    elif any(v.is_refuted for v in verdicts):
        v = Verdict.refuted(method="clifford_modulo_Q", **cert)
    else:
        v = Verdict.reduced([o for x in verdicts for o in x.obligations], method="clifford_modulo_Q", **cert)
    return Step(name, {"sigma": tau, "sigma_p": tau_p}, v)


SCENARIOS = {"example1": run_example1, "example2": run_example2}

__all__ = [
    "Step",
    "Scenario",
    "Report",
    "example1_scenario",
    "example2_scenario",
    "run_example1",
    "run_example2",
    "SCENARIOS",
    "CITE_QB",
    "CITE_LBC",
    "QuadraticForm",
]
