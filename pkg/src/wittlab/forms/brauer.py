"""Quaternion symbol classes in the 2-torsion of the Brauer group.

Clifford invariant convention (Lam, Ch. V.3, Hasse-Witt based). For a
diagonal form q = <a_1, ..., a_n> with determinant d, let
s(q) = sum_{i<j} (a_i, a_j). Then the Clifford invariant c(q) is

    n = 1, 2 mod 8:  s(q)
    n = 3, 4 mod 8:  s(q) + (-1, -d)
    n = 5, 6 mod 8:  s(q) + (-1, -1)
    n = 7, 8 mod 8:  s(q) + (-1, d)

With this normalization c(<<a, b>>) = (a, b) and c of a hyperbolic plane is 0.

Triviality is decided over Q (local Hilbert symbols), finite fields (every
symbol is split; certified by a zero of the norm form), Laurent towers (by
the tame decomposition at each layer) and, partially, over rational function
fields (formal normal form over a factor basis plus residues at places that
are linear in one variable).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint

from ..errors import FieldMismatch, UnsupportedTower
from ..fields.squares import is_square
from ..fields.tower import Element, Tower
from ..fields.valuation import place_residue, place_valuation
from .kinds import field_kind, finite_elements
from .quadratic import QuadraticForm, determinant
from .rational import hilbert_symbol, relevant_places
from .verdict import Obligation, Verdict


@dataclass(frozen=True)
class BrauerTwoTorsionClass:
    """Sum of quaternion symbols (x, y), optionally modulo a subgroup."""

    field: Tower
    symbols: tuple[tuple[Element, Element], ...] = ()
    modulo: tuple[tuple[Element, Element], ...] = ()

    def __post_init__(self):
        syms = tuple((self.field.element(x), self.field.element(y)) for x, y in self.symbols)
        mods = tuple((self.field.element(x), self.field.element(y)) for x, y in self.modulo)
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "modulo", mods)

    def __add__(self, other: "BrauerTwoTorsionClass") -> "BrauerTwoTorsionClass":
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return BrauerTwoTorsionClass(self.field, self.symbols + other.symbols, self.modulo)

    # every class is 2-torsion, so subtraction is addition
    __sub__ = __add__

    def quotient(self, *symbols) -> "BrauerTwoTorsionClass":
        return BrauerTwoTorsionClass(self.field, self.symbols, self.modulo + tuple(symbols))

    def simplified(self) -> "BrauerTwoTorsionClass":
        """Drop symbols that are visibly split (a slot 1, a constant square
        slot, or (x, -x)) and cancel repeated symbols."""
        keep = []
        for x, y in _drop_trivial(self.symbols):
            try:
                if any(not e.symbols() and is_square(e) for e in (x, y)):
                    continue
            except UnsupportedTower:
                pass
            keep.append((x, y))
        return BrauerTwoTorsionClass(self.field, tuple(keep), self.modulo)

    def is_trivial(self) -> Verdict:
        """Proved if the class is 0 (modulo the given subgroup)."""
        if not self.modulo:
            return decide_trivial(self.field, self.symbols)
        if len(self.modulo) != 1:
            return Verdict.reduced(
                [Obligation("triviality modulo a subgroup with several generators")]
            )
        plain = decide_trivial(self.field, self.symbols)
        shifted = decide_trivial(self.field, self.symbols + self.modulo)
        if plain.is_proved or shifted.is_proved:
            which = "class" if plain.is_proved else "class + generator"
            return Verdict.proved(
                method="modulo", trivial=which, plain=plain.to_json(), shifted=shifted.to_json()
            )
        if plain.is_refuted and shifted.is_refuted:
            return Verdict.refuted(method="modulo", plain=plain.to_json(), shifted=shifted.to_json())
        return Verdict.reduced(
            list(plain.obligations) + list(shifted.obligations),
            method="modulo",
            plain=plain.to_json(),
            shifted=shifted.to_json(),
        )

    def __str__(self) -> str:
        body = " + ".join(f"({x}, {y})" for x, y in self.symbols) or "0"
        if self.modulo:
            body += " mod <" + ", ".join(f"({x}, {y})" for x, y in self.modulo) + ">"
        return body


def symbol(x: Element, y: Element) -> BrauerTwoTorsionClass:
    return BrauerTwoTorsionClass(x.tower, ((x, y),))


def hasse_witt(f: QuadraticForm) -> BrauerTwoTorsionClass:
    e = f.entries
    pairs = tuple((e[i], e[j]) for i in range(len(e)) for j in range(i + 1, len(e)))
    return BrauerTwoTorsionClass(f.field, pairs)


def clifford_invariant(f: QuadraticForm) -> BrauerTwoTorsionClass:
    tower = f.field
    s = hasse_witt(f)
    n = f.dim % 8
    d = determinant(f)
    m1 = tower.const(-1)
    if n in (1, 2):
        extra = ()
    elif n in (3, 4):
        extra = ((m1, -d),)
    elif n in (5, 6):
        extra = ((m1, m1),)
    else:
        extra = ((m1, d),)
    return BrauerTwoTorsionClass(tower, s.symbols + extra)


# ----------------------------------------------------------------------------
# decision procedures


def decide_trivial(tower: Tower, symbols) -> Verdict:
    kind = field_kind(tower)
    symbols = tuple(symbols)
    if not symbols:
        return Verdict.proved(method="empty")
    if kind == "Q":
        return _trivial_over_Q(symbols)
    if kind in ("fp", "fp2"):
        return _trivial_over_finite(tower, symbols)
    if kind == "laurent":
        return _trivial_over_laurent(tower, symbols)
    if kind == "function":
        try:
            return _trivial_over_function_field(tower, symbols)
        except UnsupportedTower as exc:
            return Verdict.reduced(
                [Obligation(f"{' + '.join(f'({x}, {y})' for x, y in symbols)} = 0 in Br({tower})")],
                method="unsupported",
                reason=str(exc),
            )
    return Verdict.reduced(
        [Obligation(f"{' + '.join(f'({x}, {y})' for x, y in symbols)} = 0 in Br({tower})")],
        method="unsupported",
    )


def _trivial_over_Q(symbols) -> Verdict:
    pairs = [(x.to_fraction(), y.to_fraction()) for x, y in symbols]
    values = [v for pr in pairs for v in pr]
    invariants = {}
    for p in relevant_places(values):
        inv = 1
        for x, y in pairs:
            inv *= hilbert_symbol(x, y, p)
        invariants["inf" if p == 0 else str(p)] = inv
    bad = [p for p, v in invariants.items() if v == -1]
    if bad:
        return Verdict.refuted(method="local_invariants", ramified_at=bad, invariants=invariants)
    return Verdict.proved(method="local_invariants", invariants=invariants)


def norm_form_zero(x: Element, y: Element):
    """A nonzero (u, v, w) with u^2 - x v^2 - y w^2 = 0 over a finite tower."""
    elems = finite_elements(x.tower)
    squares = {}
    for u in elems:
        squares.setdefault(u * u, u)
    for v, w in product(elems, repeat=2):
        target = x * v * v + y * w * w
        if target in squares and (v or w or squares[target]):
            u = squares[target]
            if u or v or w:
                return (u, v, w)
    return None


def _trivial_over_finite(tower: Tower, symbols) -> Verdict:
    witnesses = []
    for x, y in symbols:
        vec = norm_form_zero(x, y)
        if vec is None:  # impossible by Chevalley-Warning
            raise AssertionError(f"norm form of ({x}, {y}) anisotropic over {tower}")
        witnesses.append({"symbol": [str(x), str(y)], "norm_form_zero": [str(c) for c in vec]})
    return Verdict.proved(method="norm_form_isotropy", witnesses=witnesses)


def _trivial_over_laurent(tower: Tower, symbols) -> Verdict:
    t = tower.laurent_vars[-1]
    res = tower.without(t)
    # the tame symbol is a product of many repeated residues: track the
    # parity of each distinct factor instead of expanding the product
    odd: dict[str, Element] = {}

    def toggle(e: Element):
        key = str(e)
        if key in odd:
            del odd[key]
        else:
            odd[key] = e

    beta0 = []
    for x, y in symbols:
        m, n = place_valuation(x, t) % 2, place_valuation(y, t) % 2
        u, w = place_residue(x, t), place_residue(y, t)
        beta0.append((u, w))
        if m:
            toggle(w)
        if n:
            toggle(u)
        if m and n:
            toggle(res.const(-1))
    delta = res.one()
    for key in sorted(odd):
        delta = delta * odd[key]
    if not is_square(delta):
        return Verdict.refuted(method="tame_symbol", layer=t, ramification=str(delta))
    inner = decide_trivial(res, _drop_trivial(beta0))
    cert = {"method": "tame_symbol", "layer": t, "ramification": "1", "residue_class": inner.to_json()}
    if inner.is_proved:
        return Verdict.proved(**cert)
    if inner.is_refuted:
        return Verdict.refuted(**cert)
    return Verdict.reduced(inner.obligations, **cert)


def _drop_trivial(symbols):
    """Drop visibly split symbols and cancel repeated ones (2-torsion)."""
    kept: dict[tuple[str, str], tuple[Element, Element]] = {}
    for x, y in symbols:
        if x.is_one() or y.is_one() or (x + y).is_zero():
            continue
        key = tuple(sorted((str(x), str(y))))
        if key in kept:
            del kept[key]
        else:
            kept[key] = (x, y)
    return list(kept.values())


# ----------------------------------------------------------------------------
# rational function fields: formal normal form over a factor basis


def _factor_element(e: Element) -> dict:
    """Map basis key -> (basis element, exponent mod 2) for e != 0."""
    tower = e.tower
    leaf = e.leaf()
    out: dict = {}

    def add(key, elem, k):
        if k % 2 == 0:
            return
        if key in out:
            del out[key]
        else:
            out[key] = elem

    const = Fraction(1)
    for poly, sign in ((leaf.numer, 1), (leaf.denom, -1)):
        if tower.p:
            c, facs = _fp_factor_list(poly)
        else:
            c, facs = poly.factor_list()
            c = Fraction(int(c.numerator), int(c.denominator))
        for f, k in facs:
            if not tower.p:
                _, fi = f.clear_denoms()
                _, prim = fi.primitive()
                if prim.LC < 0:
                    prim = -prim
                lcf = f.LC
                r = Fraction(int(lcf.numerator), int(lcf.denominator)) / Fraction(int(prim.LC))
                c *= r ** k
                from sympy import QQ

                f = poly.ring.from_dict({m: QQ(int(v)) for m, v in prim.terms()})
            fe = tower.info.K(f)
            elem = Element(tower, _embed_leaf(tower, fe))
            add(str(elem), elem, k)
        if tower.p:
            # constants are squares or the fixed non-residue class
            if c and not _fp_is_square(int(c), tower.p):
                add("nonres", tower.const(_fp_nonres(tower.p)), 1)
        else:
            const = const * c if sign == 1 else const / c
    if not tower.p:
        n = const.numerator * const.denominator
        if n < 0:
            add("-1", tower.const(-1), 1)
        for prime, k in factorint(abs(n)).items():
            add(str(prime), tower.const(prime), k)
    return out


def _embed_leaf(tower, fe):
    from ..fields.tower import _canon, _embed

    info = tower.info
    return _embed(_canon(info, fe), 0, info.depth, info)


def _fp_is_square(c: int, p: int) -> bool:
    from ..fields.squares import legendre

    return legendre(c, p) == 1


def _fp_nonres(p: int) -> int:
    from ..fields.squares import smallest_nonresidue

    return smallest_nonresidue(p)


def _fp_factor_list(poly):
    from ..fields.squares import _sqf_list

    # square-free decomposition suffices for the mod 2 exponent bookkeeping
    # only when factors are irreducible; use sympy's univariate factorization
    from sympy.polys.rings import ring as sympy_ring

    used = [i for i in range(poly.ring.ngens) if any(m[i] for m in poly.monoms())]
    if not used:
        return (poly.LC if poly else 0), []
    if len(used) > 1:
        return _sqf_list(poly, poly.ring.domain.mod)
    i = used[0]
    R1, _ = sympy_ring(str(poly.ring.symbols[i]), poly.ring.domain)
    uni = R1.from_dict({(m[i],): c for m, c in poly.terms()})
    c, facs = uni.factor_list()
    back = []
    for f, k in facs:
        terms = {}
        for (e,), coef in f.terms():
            m = [0] * poly.ring.ngens
            m[i] = e
            terms[tuple(m)] = coef
        back.append((poly.ring.from_dict(terms), k))
    return c, back


def _is_constant(e: Element) -> bool:
    return not e.symbols()


def _trivial_over_function_field(tower: Tower, symbols) -> Verdict:
    # bilinear expansion: unordered basis pairs with coefficients mod 2
    pairs: dict = {}
    elems: dict = {}
    m1 = tower.const(-1)
    elems["-1"] = m1

    def toggle(k1, k2):
        key = tuple(sorted((k1, k2)))
        if key in pairs:
            del pairs[key]
        else:
            pairs[key] = True

    for x, y in symbols:
        fx, fy = _factor_element(x), _factor_element(y)
        elems.update(fx)
        elems.update(fy)
        for k1 in fx:
            for k2 in fy:
                if k1 == k2 and k1 != "-1":
                    toggle(k1, "-1")  # (g, g) = (g, -1)
                else:
                    toggle(k1, k2)
    const_pairs = [(elems[a], elems[b]) for a, b in pairs if _is_constant(elems[a]) and _is_constant(elems[b])]
    var_pairs = [(a, b) for a, b in pairs if not (_is_constant(elems[a]) and _is_constant(elems[b]))]
    if tower.p:
        const_verdict = Verdict.proved(method="finite_constants")
    else:
        q = Tower(0)
        const_verdict = _trivial_over_Q(
            [(q.const(x.to_fraction()), q.const(y.to_fraction())) for x, y in const_pairs]
        ) if const_pairs else Verdict.proved(method="empty")
    normal_form = [f"({elems[a]}, {elems[b]})" for a, b in sorted(pairs)]
    if not var_pairs:
        if const_verdict.is_proved:
            return Verdict.proved(method="factor_basis", normal_form=normal_form)
        return Verdict.refuted(
            method="factor_basis_constants",
            normal_form=normal_form,
            constant_part=const_verdict.to_json(),
            citation="constant classes inject into Br of a rational function field",
        )
    # residues at basis elements that are linear in some variable
    keys = {k for pr in var_pairs for k in pr if not _is_constant(elems[k])}
    for key in sorted(keys):
        place = _linear_place(elems[key])
        if place is None:
            continue
        var, value = place
        # the basis is only square-free over F_p in several variables: skip a
        # place where another basis element also vanishes
        if any(
            k != key and not _is_constant(elems[k]) and _substitute(elems[k], var, value).is_zero()
            for k in elems
        ):
            continue
        delta = None
        for a, b in pairs:
            if key not in (a, b):
                continue
            other = b if a == key else a
            h = elems[other] if other != key else m1
            hv = _substitute(h, var, value)
            delta = hv if delta is None else delta * hv
        if delta is not None and not delta.is_zero() and not is_square(delta):
            return Verdict.refuted(
                method="residue_at_place",
                place=f"{elems[key]} = 0",
                residue=str(delta),
                normal_form=normal_form,
            )
    return Verdict.reduced(
        [Obligation(" + ".join(normal_form) + f" = 0 in Br({tower})")],
        method="factor_basis",
        normal_form=normal_form,
    )


def _linear_place(f: Element):
    """(var, value) such that f = 0 exactly when var = value, if f has degree 1 in var."""
    leaf = f.leaf()
    poly = leaf.numer
    tower = f.tower
    info = tower.info
    for idx, name in enumerate(info.trans):
        degs = [m[idx] for m in poly.monoms()]
        if max(degs) != 1:
            continue
        gen = poly.ring.gens[idx]
        coeff = poly.ring.zero
        rest = poly.ring.zero
        for m, c in poly.terms():
            if m[idx] == 1:
                mm = list(m)
                mm[idx] = 0
                coeff += poly.ring({tuple(mm): c})
            else:
                rest += poly.ring({m: c})
        del gen
        res = tower.without(name)
        alpha = Element(tower, _embed_leaf(tower, info.K(coeff)))
        beta = Element(tower, _embed_leaf(tower, info.K(rest)))
        try:
            value = (-beta / alpha).coerce(res)
        except Exception:
            continue
        return name, value
    return None


def _substitute(h: Element, var: str, value: Element) -> Element:
    """h with var replaced by value (value lives in the tower without var)."""
    res = value.tower
    leaf = h.leaf()
    info = h.tower.info
    idx = info.trans_index[var]

    def ev(poly):
        total = res.zero()
        for m, c in poly.terms():
            term = res.const(int(c)) if h.tower.p else res.const(
                Fraction(int(c.numerator), int(c.denominator))
            )
            for i, e in enumerate(m):
                if not e:
                    continue
                base = value if i == idx else res.gen(info.trans[i])
                term = term * base ** e
            total = total + term
        return total

    den = ev(leaf.denom)
    if den.is_zero():
        return res.zero()
    return ev(leaf.numer) / den


__all__ = [
    "BrauerTwoTorsionClass",
    "symbol",
    "hasse_witt",
    "clifford_invariant",
    "decide_trivial",
    "norm_form_zero",
]

