"""Square classes over supported towers.

Supported shapes, from the bottom up:

* a base made of ``Q`` or ``F(p)`` followed by ``rat`` layers, where a
  ``sqrt(x)`` of a bare rat variable x is allowed (x = s^2 makes k(sqrt x) a
  rational function field in s again); over F(p) at most one variable may
  occur in any element because sympy cannot factor multivariate polynomials
  over finite fields;
* ``F(p).sqrt(d)`` with d a constant, the field with p^2 elements;
* any number of ``laurent`` layers on top of such a base.

Over k((t)) the square classes are (classes of k) x {1, t}: an element
t^m u with u a unit is equivalent to t^(m mod 2) times its residue.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from sympy import GF, QQ, factorint
from sympy.ntheory import sqrt_mod
from sympy.polys.fields import field as sympy_field
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as sympy_ring

from ..errors import UnsupportedTower, ZeroElement
from .tower import Element, Tower


# ----------------------------------------------------------------------------
# shape analysis and flattening


@dataclass(frozen=True)
class _Shape:
    kind: str  # "flat" or "fp2"
    flat_names: tuple[str, ...]  # names of the flat field's generators
    sqrt_of: dict  # trans index of x -> sqrt gen name, for each sqrt(x)
    laurent: tuple[str, ...]
    Kf: object


def _shape_of(tower: Tower) -> _Shape:
    return _shape_cached(tower)


@functools.lru_cache(maxsize=None)
def _shape_cached(tower: Tower) -> _Shape:
    layers = tower.layers
    if (
        tower.p
        and len(layers) == 1
        and layers[0].kind == "sqrt"
    ):
        return _Shape("fp2", (), {}, (), None)
    info = tower.info
    seen_laurent = False
    sqrt_of = {}
    for layer in layers:
        if layer.kind == "laurent":
            seen_laurent = True
        elif seen_laurent:
            raise UnsupportedTower(f"square classes need Laurent layers on top: {tower}")
        elif layer.kind == "conic":
            raise UnsupportedTower(f"square classes over a conic function field: {tower}")
        elif layer.kind == "sqrt":
            arg = layer.args[0]
            if arg not in info.trans_index or info.trans_index[arg] in sqrt_of:
                raise UnsupportedTower(f"sqrt of a non-variable {arg!r} in {tower}")
            sqrt_of[info.trans_index[arg]] = layer.names[0]
    names = tuple(sqrt_of.get(i, n) for i, n in enumerate(info.trans))
    domain = QQ if tower.p == 0 else GF(tower.p, symmetric=False)
    Kf = sympy_field(",".join(names), domain, grlex)[0] if names else sympy_field("", domain, grlex)[0]
    return _Shape("flat", names, sqrt_of, tower.laurent_vars, Kf)


def _flat_poly(poly, shape: _Shape):
    R = shape.Kf.ring
    terms = {}
    for monom, c in poly.terms():
        m = tuple(2 * e if i in shape.sqrt_of else e for i, e in enumerate(monom))
        terms[m] = c
    return R.from_dict(terms) if terms else R.zero


def _flatten(e: Element):
    shape = _shape_of(e.tower)
    info = e.tower.info
    Kf = shape.Kf
    alg_flat = [Kf.gens[shape.flat_names.index(name)] for name, _ in info.alg]

    def walk(x, j):
        if j == 0:
            return Kf(_flat_poly(x.numer, shape)) / Kf(_flat_poly(x.denom, shape))
        return walk(x[0], j - 1) + walk(x[1], j - 1) * alg_flat[j - 1]

    return walk(e.val, info.depth)


def _unflatten_poly(poly, tower: Tower) -> Element:
    shape = _shape_of(tower)
    info = tower.info
    gens = []
    for i, name in enumerate(shape.flat_names):
        if i in shape.sqrt_of:
            gens.append((True, tower.gen(info.trans[i]), tower.gen(name)))
        else:
            gens.append((False, tower.gen(name), None))
    total = tower.zero()
    for monom, c in poly.terms(grlex):
        term = _const(tower, c)
        for (is_sqrt, base, root), e in zip(gens, monom):
            if not e:
                continue
            if is_sqrt:
                term = term * base ** (e // 2)
                if e % 2:
                    term = term * root
            else:
                term = term * base ** e
        total = total + term
    return total


def _unflatten(fe, tower: Tower) -> Element:
    return _unflatten_poly(fe.numer, tower) / _unflatten_poly(fe.denom, tower)


def _const(tower: Tower, c) -> Element:
    if tower.p:
        return tower.const(int(c))
    return tower.const(Fraction(int(c.numerator), int(c.denominator)))


# ----------------------------------------------------------------------------
# constants


def signed_squarefree(q: Fraction) -> int:
    """The squarefree integer in the square class of a nonzero rational."""
    if q == 0:
        raise ZeroElement("square class of zero")
    n = q.numerator * q.denominator
    out = -1 if n < 0 else 1
    for prime, e in factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return out


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


@functools.lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    return next(g for g in range(2, p) if legendre(g, p) == -1)


def _const_class(c, p: int) -> int:
    if p:
        return 1 if legendre(int(c), p) == 1 else smallest_nonresidue(p)
    return signed_squarefree(Fraction(int(c.numerator), int(c.denominator)))


def _const_sqrt(c, p: int):
    """Exact square root of a constant, or None."""
    if p:
        c = int(c) % p
        if c == 0:
            return 0
        roots = sqrt_mod(c, p, all_roots=True)
        return min(roots) if roots else None
    q = Fraction(int(c.numerator), int(c.denominator))
    if q < 0:
        return None
    from math import isqrt

    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


# ----------------------------------------------------------------------------
# polynomial square-free parts


def _sqf_list(poly, p: int):
    """(constant, [(factor, multiplicity)]) with normalized factors."""
    if p:
        used = [i for i in range(poly.ring.ngens) if any(m[i] for m in poly.monoms())]
        if len(used) > 1:
            raise UnsupportedTower(
                "square-free factorization of multivariate polynomials over F_p"
            )
        if not used:
            return poly.LC if poly else 0, []
        i = used[0]
        R1, _ = sympy_ring(str(poly.ring.symbols[i]), poly.ring.domain)
        uni = R1.from_dict({(m[i],): c for m, c in poly.terms()})
        c, facs = uni.sqf_list()
        back = []
        for f, k in facs:
            terms = {}
            for (e,), coef in f.terms():
                m = [0] * poly.ring.ngens
                m[i] = e
                terms[tuple(m)] = coef
            back.append((poly.ring.from_dict(terms), k))
        return c, back
    if poly.ring.ngens == 0 or poly.is_ground:
        return poly.LC if poly else QQ(0), []
    c, facs = poly.sqf_list()
    out = []
    const = Fraction(int(c.numerator), int(c.denominator))
    for f, k in facs:
        _, fi = f.clear_denoms()
        _, prim = fi.primitive()
        if prim.LC < 0:
            prim = -prim
        # f = r * prim with r rational
        lcf = f.LC
        r = Fraction(int(lcf.numerator), int(lcf.denominator)) / Fraction(int(prim.LC))

        const *= r ** k
        prim = poly.ring.from_dict({m: QQ(int(c)) for m, c in prim.terms()})
        out.append((prim, k))
    return QQ(const.numerator, const.denominator), out


def _squarefree_rep(fe, p: int):
    """Square-free polynomial in the square class of a flat unit fe."""
    R = fe.numer.ring
    P = fe.numer * fe.denom
    c, facs = _sqf_list(P, p)
    rep = R.ground_new(R.domain.convert(_const_class(c, p)))
    for f, k in facs:
        if k % 2:
            rep = rep * R(f)
    return rep


def _poly_sqrt(poly, p: int):
    if not poly:
        return poly
    c, facs = _sqf_list(poly, p)
    root_c = _const_sqrt(c, p)
    if root_c is None or any(k % 2 for _, k in facs):
        return None
    R = poly.ring
    if p:
        out = R.ground_new(R.domain.convert(root_c))
    else:
        out = R.ground_new(QQ(root_c.numerator, root_c.denominator))
    for f, k in facs:
        out = out * R(f) ** (k // 2)
    return out


def _frac_sqrt(fe, p: int):
    num = _poly_sqrt(fe.numer, p)
    if num is None:
        return None
    den = _poly_sqrt(fe.denom, p)
    if den is None:
        return None
    return fe.field(num) / fe.field(den)


# ----------------------------------------------------------------------------
# public API


@dataclass(frozen=True, eq=False)
class SquareClass:
    """Canonical square class: representative plus finite coordinates.

    ``base`` is the canonical text of the base-field representative and
    ``exps`` the parities of the Laurent variables (tower order).
    """

    rep: Element
    base: str
    exps: tuple[int, ...]

    @property
    def tower(self) -> Tower:
        return self.rep.tower

    @property
    def coords(self) -> tuple:
        return (self.base, self.exps)

    def is_trivial(self) -> bool:
        return self.base == "1" and not any(self.exps)

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        return self.tower == other.tower and self.coords == other.coords

    def __hash__(self):
        return hash((str(self.tower), self.coords))

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.rep * other.rep)

    def laurent_part(self) -> dict:
        return dict(zip(self.tower.laurent_vars, self.exps))

    def __str__(self) -> str:
        return str(self.rep)

    def __repr__(self) -> str:
        return f"SquareClass({self.rep}, coords={self.coords})"


def _fp2_class(e: Element) -> SquareClass:
    tower = e.tower
    p = tower.p
    lo, hi = e.parts()
    d = tower.info.alg[0][1]
    lo_i, hi_i = lo.to_int_mod_p(), hi.to_int_mod_p()
    d_i = int(d.numer.LC) % p if d.numer else 0
    norm = (lo_i * lo_i - d_i * hi_i * hi_i) % p
    if legendre(norm, p) == 1:
        return SquareClass(tower.one(), "1", ())
    s = tower.gen(tower.layers[0].names[0])
    for h in range(p):
        for lo_c in range(p):
            if legendre((lo_c * lo_c - d_i * h * h) % p, p) == -1:
                rep = tower.const(lo_c) + tower.const(h) * s
                return SquareClass(rep, str(rep), ())
    raise AssertionError("unreachable: the norm map onto F_p is surjective")


def _decompose(e: Element):
    """(flat base unit, parity tuple over Laurent vars, exponents)."""
    shape = _shape_of(e.tower)
    fe = _flatten(e)
    exps = []
    info_names = shape.flat_names
    for name in reversed(shape.laurent):
        idx = info_names.index(name)
        gen = fe.numer.ring.gens[idx]
        n1 = min(m[idx] for m in fe.numer.monoms())
        n2 = min(m[idx] for m in fe.denom.monoms())
        num = fe.numer.exquo(gen ** n1).subs(gen, 0)
        den = fe.denom.exquo(gen ** n2).subs(gen, 0)
        exps.append(n1 - n2)
        fe = fe.field(num) / fe.field(den)
    return fe, tuple(reversed(exps))


def square_class(e: Element) -> SquareClass:
    if e.is_zero():
        raise ZeroElement("square class of zero")
    tower = e.tower
    shape = _shape_of(tower)
    if shape.kind == "fp2":
        return _fp2_class(e)
    unit, exps = _decompose(e)
    rep_poly = _squarefree_rep(unit, tower.p)
    base = _unflatten_poly(rep_poly, tower)
    rep = base
    parities = tuple(x % 2 for x in exps)
    for name, par in zip(shape.laurent, parities):
        if par:
            rep = rep * tower.gen(name)
    return SquareClass(rep, str(base), parities)


def is_square(e: Element) -> bool:
    return square_class(e).is_trivial()


def sqrt_exact(e: Element) -> Element | None:
    """An exact square root of e inside the tower, or None."""
    if e.is_zero():
        return e
    tower = e.tower
    shape = _shape_of(tower)
    if shape.kind == "fp2":
        p = tower.p
        s = tower.gen(tower.layers[0].names[0])
        for h in range(p):
            for lo_c in range(p):
                cand = tower.const(lo_c) + tower.const(h) * s
                if cand * cand == e:
                    return cand
        return None
    fe = _flatten(e)
    root = _frac_sqrt(fe, tower.p)
    if root is None:
        return None
    return _unflatten(root, tower)


def split_square(e: Element) -> tuple[Element, Element | None]:
    """(rep, w) with e == rep * w^2 whenever w is not None."""
    cls = square_class(e)
    return cls.rep, sqrt_exact(e / cls.rep)


__all__ = [
    "SquareClass",
    "square_class",
    "is_square",
    "sqrt_exact",
    "split_square",
    "signed_squarefree",
    "legendre",
    "smallest_nonresidue",
]
