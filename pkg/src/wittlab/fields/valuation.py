"""Discrete valuations attached to Laurent layers, and residue maps."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import NonMonomialEntry, NotLaurentLayer, UnsupportedTower, ZeroElement
from .tower import Element, Tower, _canon


@dataclass(frozen=True)
class ValuationSpec:
    """The t-adic valuation of the Laurent layer named ``variable``."""

    variable: str

    def check(self, tower: Tower, laurent_only: bool = True) -> int:
        try:
            i = tower.layer_of(self.variable)
        except Exception:
            raise NotLaurentLayer(f"{self.variable!r} is not a layer of {tower}") from None
        kind = tower.layers[i].kind
        if kind != "laurent" and (laurent_only or kind != "rat"):
            raise NotLaurentLayer(f"{self.variable!r} is a {kind} layer of {tower}")
        return i

    def residue_tower(self, tower: Tower) -> Tower:
        self.check(tower, laurent_only=False)
        return tower.without(self.variable)


def poly_order(poly, idx: int) -> int:
    """Largest power of the idx-th generator dividing a nonzero polynomial."""
    return min(m[idx] for m in poly.monoms())


def _leaf_order(fe, idx: int) -> int:
    return poly_order(fe.numer, idx) - poly_order(fe.denom, idx)


def _alg_depth_below(tower: Tower, layer_index: int) -> None:
    for layer in tower.layers[layer_index + 1:]:
        if layer.kind in ("sqrt", "conic"):
            raise UnsupportedTower(
                f"valuation at {tower.layers[layer_index].names[0]} with the algebraic layer "
                f"{layer} above it"
            )


def _leaves(val, j):
    if j == 0:
        yield val
        return
    yield from _leaves(val[0], j - 1)
    yield from _leaves(val[1], j - 1)


def _valuation(e: Element, name: str, laurent_only: bool) -> int:
    if e.is_zero():
        raise ZeroElement("valuation of zero")
    tower = e.tower
    i = ValuationSpec(name).check(tower, laurent_only)
    _alg_depth_below(tower, i)
    idx = tower.info.trans_index[name]
    return min(_leaf_order(x, idx) for x in _leaves(e.val, tower.info.depth) if x.numer)


def valuation(e: Element, v: ValuationSpec) -> int:
    return _valuation(e, v.variable, laurent_only=True)


def place_valuation(e: Element, name: str) -> int:
    """Order of ``e`` at ``name = 0`` for a rat or laurent variable."""
    return _valuation(e, name, laurent_only=False)


def _leaf_residue(fe, idx: int, m: int, src_K, dst):
    """Image of fe * t^(-m) at t = 0 in the residue field ``dst``."""
    if not fe.numer or _leaf_order(fe, idx) > m:
        return dst.K.zero
    gen = fe.numer.ring.gens[idx]
    n1, n2 = poly_order(fe.numer, idx), poly_order(fe.denom, idx)
    num = fe.numer.exquo(gen ** n1).subs(gen, 0)
    den = fe.denom.exquo(gen ** n2).subs(gen, 0)
    out = src_K(num) / src_K(den)
    return _canon(dst, out.set_field(dst.K))


def _residue(e: Element, name: str, laurent_only: bool) -> Element:
    m = _valuation(e, name, laurent_only)
    tower = e.tower
    res_tower = tower.without(name)
    src, dst = tower.info, res_tower.info
    idx = src.trans_index[name]

    def walk(x, j):
        if j == 0:
            return _leaf_residue(x, idx, m, src.K, dst)
        return (walk(x[0], j - 1), walk(x[1], j - 1))

    return Element(res_tower, walk(e.val, src.depth))


def residue_unit(e: Element, v: ValuationSpec) -> Element:
    """Residue of e * t^(-v(e)), an element of the tower without layer t."""
    return _residue(e, v.variable, laurent_only=True)


def place_residue(e: Element, name: str) -> Element:
    return _residue(e, name, laurent_only=False)


def monomial_split(e: Element, v: ValuationSpec | str) -> tuple[int, Element]:
    """Return (m, u) with e == t^m * u exactly and u free of t.

    Raises NonMonomialEntry when e is not of that shape (for example t + t^2);
    the square class is still defined in that case, see ``squares``.
    """
    name = v.variable if isinstance(v, ValuationSpec) else v
    m = place_valuation(e, name)
    u = place_residue(e, name)
    lifted = u.coerce(e.tower) * e.tower.gen(name) ** m
    if lifted != e:
        raise NonMonomialEntry(f"{e} is not a monomial in {name}")
    return m, u


def is_monomial(e: Element, name: str) -> bool:
    try:
        monomial_split(e, name)
    except NonMonomialEntry:
        return False
    return True


__all__ = [
    "ValuationSpec",
    "valuation",
    "residue_unit",
    "place_valuation",
    "place_residue",
    "monomial_split",
    "is_monomial",
    "poly_order",
]
