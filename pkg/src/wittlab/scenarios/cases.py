"""Square-class case enumeration for Witt relations with an unknown scalar.

A relation has the shape  fixed ⊥ <-nu> scaled ∈ <<slots>> W(k)  over an
iterated Laurent tower k = k0((x1))...((xn)). Every square class of k is
nu0 * x1^e1 ... xn^en with nu0 in k0 and e_i in {0, 1}; nu0 is modelled as a
parameter layer inserted into k0. When ``scaled`` is divisible by <<x>> for
a Laurent variable x, the substitution nu -> -x nu leaves the relation
unchanged and removes the x-exponent from the frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..errors import NotLaurentLayer
from ..fields.tower import Element, Tower
from ..fields.valuation import ValuationSpec
from ..forms.quadratic import QuadraticForm, orth_sum, scale
from ..forms.residues import ConditionResult, evaluate_condition, ideal_conditions

UNKNOWN = "nu0"


@dataclass(frozen=True)
class WittRelation:
    fixed: QuadraticForm
    scaled: QuadraticForm | None
    slots: tuple[Element, ...]
    absorb: str | None = None  # Laurent variable x with <-x> scaled ≅ scaled

    @property
    def field(self) -> Tower:
        return self.fixed.field

    def instantiate(self, nu: Element) -> QuadraticForm:
        tower = nu.tower
        fixed = self.fixed.coerce(tower)
        if self.scaled is None:
            return fixed
        return orth_sum(fixed, scale(-nu, self.scaled.coerce(tower)))

    def __str__(self) -> str:
        ideal = "<<" + ", ".join(map(str, self.slots)) + ">> W"
        if self.scaled is None:
            return f"{self.fixed} ∈ {ideal}"
        return f"{self.fixed} + <-nu>({self.scaled}) ∈ {ideal}"


@dataclass(frozen=True)
class Case:
    coset: str
    covers: tuple[str, ...]
    nu: Element | None
    results: tuple[ConditionResult, ...]
    substitution: str = ""

    def to_json(self) -> dict:
        out = {
            "coset": self.coset,
            "covers": list(self.covers),
            "conditions": [r.to_json() for r in self.results],
        }
        if self.substitution:
            out["substitution"] = self.substitution
        return out


def normalize_chain(tower: Tower, chain) -> dict:
    """Accept [(var, which)], [ValuationSpec] or {var: which}; check the order
    runs from the top Laurent layer downwards."""
    if chain is None:
        return {}
    if isinstance(chain, dict):
        items = list(chain.items())
    else:
        items = []
        for step in chain:
            if isinstance(step, ValuationSpec):
                items.append((step.variable, "both"))
            elif isinstance(step, str):
                items.append((step, "both"))
            else:
                var, which = step
                items.append((var.variable if isinstance(var, ValuationSpec) else var, which))
    order = list(reversed(tower.laurent_vars))
    pos = []
    for var, which in items:
        if var not in order:
            raise NotLaurentLayer(f"{var!r} is not a Laurent layer of {tower}")
        if which not in ("first", "second", "both"):
            raise ValueError(f"unknown residue choice {which!r}")
        pos.append(order.index(var))
    if pos != sorted(pos):
        raise ValueError("the valuation chain must start at the top Laurent layer")
    return dict(items)


def _monomial_text(exps: dict) -> str:
    names = [v for v, e in exps.items() if e]
    return "*".join(names + [UNKNOWN])


def parameter_tower(tower: Tower) -> tuple[Tower, int]:
    """Insert the unknown nu0 as a parameter layer just below the Laurent layers."""
    index = next((i for i, layer in enumerate(tower.layers) if layer.kind == "laurent"), len(tower.layers))
    return tower.insert_rat(index, UNKNOWN, param=True), index


def enumerate_cases(relation: WittRelation, chain=None) -> list[Case]:
    tower = relation.field
    steps = normalize_chain(tower, chain)
    if relation.scaled is None:
        conds = ideal_conditions(relation.fixed, relation.slots, steps)
        results = tuple(_dedupe(evaluate_condition(c) for c in conds))
        return [Case("-", (), None, results)]
    ptower, _ = parameter_tower(tower)
    nu0 = ptower.gen(UNKNOWN)
    lvars = list(tower.laurent_vars)
    absorb = relation.absorb if relation.absorb in lvars else None
    free = [v for v in lvars if v != absorb]
    cases = []
    for bits in product((0, 1), repeat=len(free)):
        exps = {v: 0 for v in lvars}
        exps.update(dict(zip(free, bits)))
        nu = nu0
        for v, e in exps.items():
            if e:
                nu = nu * ptower.gen(v)
        coset = _monomial_text(exps)
        covers = [coset]
        subst = ""
        if absorb is not None:
            other = dict(exps, **{absorb: 1})
            covers.append(_monomial_text(other))
            subst = f"nu -> -{absorb}*nu maps {covers[1]} to this case"
        theta = relation.instantiate(nu)
        conds = ideal_conditions(theta, tuple(s.coerce(ptower) for s in relation.slots), steps)
        results = tuple(_dedupe(evaluate_condition(c) for c in conds))
        cases.append(Case(coset, tuple(covers), nu, results, subst))
    # list cosets by total degree so nu0 comes first
    cases.sort(key=lambda c: (c.coset.count("*"), c.coset))
    return cases


def _dedupe(results):
    seen = set()
    for r in results:
        if r.statement in seen:
            continue
        seen.add(r.statement)
        yield r


__all__ = ["WittRelation", "Case", "enumerate_cases", "normalize_chain", "parameter_tower", "UNKNOWN"]
