"""Field towers and their exact elements.

A tower starts at Q or F_p and stacks layers:

* ``rat(x)``      purely transcendental extension k(x)
* ``laurent(t)``  k((t)), modelled as k(t) with the t-adic valuation
* ``sqrt(d)``     k(sqrt d) for a non-square d of k, generator named ``s``
* ``conic(a,b)``  function field of the conic of (a,b): k(X)(Y) with
                  X^2 - a*Y^2 + a*b = 0, i.e. Y^2 = (X^2 + a*b)/a

All transcendental symbols (rat, laurent and the conic X) live in one sympy
rational function field. Algebraic generators are handled by nesting pairs:
at depth j a value is ``(lo, hi)`` meaning lo + hi*g_j with g_j^2 = d_j.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

from sympy import GF, QQ
from sympy.polys.fields import field as sympy_field
from sympy.polys.orderings import grlex

from ..errors import (
    DivisionByZero,
    FieldMismatch,
    ParseError,
    RelationViolation,
    UnknownSymbol,
)
from .expr import ExprParser, tokenize

KINDS = ("rat", "laurent", "sqrt", "conic")


@dataclass(frozen=True)
class Layer:
    kind: str
    names: tuple[str, ...]
    args: tuple[str, ...] = ()
    # parameter layers hold auxiliary unknowns (nu0, ubar); printing ignores it
    param: bool = dc_field(default=False, compare=False)

    def __str__(self) -> str:
        if self.kind in ("rat", "laurent"):
            return f".{self.kind}({self.names[0]})"
        return f".{self.kind}({', '.join(self.args)})"


@dataclass(frozen=True)
class Tower:
    """Immutable description of a field tower; p = 0 means Q."""

    p: int = 0
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.p == 2 or (self.p and not _is_prime(self.p)):
            raise ValueError(f"characteristic must be 0 or an odd prime, got {self.p}")

    # construction
    @staticmethod
    def Q() -> "Tower":
        return Tower(0)

    @staticmethod
    def F(p: int) -> "Tower":
        return Tower(p)

    def _push(self, layer: Layer) -> "Tower":
        taken = set(self.names)
        for n in layer.names:
            if n in taken:
                raise ValueError(f"symbol {n!r} already used in {self}")
        return Tower(self.p, self.layers + (layer,))

    def rat(self, name: str, param: bool = False) -> "Tower":
        return self._push(Layer("rat", (name,), param=param))

    def laurent(self, name: str) -> "Tower":
        return self._push(Layer("laurent", (name,)))

    def sqrt(self, d) -> "Tower":
        d = self.element(d)
        if d.is_zero():
            raise RelationViolation("sqrt of zero")
        from .squares import is_square

        try:
            square = is_square(d)
        except Exception:  # unsupported base: cannot verify, accept as declared
            square = False
        if square:
            raise RelationViolation(f"{d} is already a square in {self}")
        k = sum(1 for layer in self.layers if layer.kind == "sqrt")
        name = "s" if k == 0 else f"s{k + 1}"
        return self._push(Layer("sqrt", (name,), (str(d),)))

    def conic(self, a, b) -> "Tower":
        a, b = self.element(a), self.element(b)
        if a.is_zero() or b.is_zero():
            raise RelationViolation("conic slots must be nonzero")
        k = sum(1 for layer in self.layers if layer.kind == "conic")
        names = ("X", "Y") if k == 0 else (f"X{k + 1}", f"Y{k + 1}")
        return self._push(Layer("conic", names, (str(a), str(b))))

    # inspection
    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for layer in self.layers for n in layer.names)

    @property
    def char(self) -> int:
        return self.p

    @property
    def laurent_vars(self) -> tuple[str, ...]:
        return tuple(layer.names[0] for layer in self.layers if layer.kind == "laurent")

    @property
    def param_vars(self) -> tuple[str, ...]:
        return tuple(layer.names[0] for layer in self.layers if layer.param)

    def conic_layer(self) -> Layer | None:
        for layer in reversed(self.layers):
            if layer.kind == "conic":
                return layer
        return None

    def layer_of(self, name: str) -> int:
        for i, layer in enumerate(self.layers):
            if name in layer.names:
                return i
        raise UnknownSymbol(f"{name!r} is not a symbol of {self}")

    def prefix(self, n: int) -> "Tower":
        return Tower(self.p, self.layers[:n])

    def base(self) -> "Tower":
        """The tower below the final conic layer (or self if none)."""
        if self.layers and self.layers[-1].kind == "conic":
            return self.prefix(len(self.layers) - 1)
        return self

    def without(self, name: str) -> "Tower":
        """Remove the rat/laurent layer ``name`` (residue field of a place)."""
        i = self.layer_of(name)
        if self.layers[i].kind not in ("rat", "laurent"):
            raise ValueError(f"{name} is not a transcendental layer")
        rest = self.layers[:i] + self.layers[i + 1:]
        for layer in rest[i:]:
            for arg in layer.args:
                if name in {t.text for t in tokenize(arg) if t.kind == "name"}:
                    raise ValueError(f"layer {layer} depends on {name}")
        return Tower(self.p, rest)

    def insert_rat(self, index: int, name: str, param: bool = True) -> "Tower":
        if name in self.names:
            raise ValueError(f"symbol {name!r} already used")
        layer = Layer("rat", (name,), param=param)
        return Tower(self.p, self.layers[:index] + (layer,) + self.layers[index:])

    def is_prefix_of(self, other: "Tower") -> bool:
        return self.p == other.p and other.layers[: len(self.layers)] == self.layers

    def __str__(self) -> str:
        head = "Q" if self.p == 0 else f"F({self.p})"
        return head + "".join(str(layer) for layer in self.layers)

    def __repr__(self) -> str:
        return f"Tower({str(self)!r})"

    @staticmethod
    def parse(text: str) -> "Tower":
        return parse_tower(text)

    # elements
    @property
    def info(self) -> "_Info":
        return _info(self)

    def element(self, x) -> "Element":
        if isinstance(x, Element):
            return x.coerce(self)
        if isinstance(x, bool):
            raise TypeError("bool is not a field element")
        if isinstance(x, (int, Fraction)):
            return self.const(x)
        if isinstance(x, str):
            return parse_element(x, self)
        raise TypeError(f"cannot build an element from {type(x).__name__}")

    __call__ = element

    def const(self, c) -> "Element":
        info = self.info
        if isinstance(c, Fraction):
            if self.p and c.denominator % self.p == 0:
                raise DivisionByZero(f"{c} has denominator divisible by {self.p}")
            leaf = info.K(c.numerator) / info.K(c.denominator)
        else:
            leaf = info.K(int(c))
        return Element(self, _embed(_canon(info, leaf), 0, info.depth, info))

    def zero(self) -> "Element":
        return self.const(0)

    def one(self) -> "Element":
        return self.const(1)

    def gen(self, name: str) -> "Element":
        info = self.info
        if name in info.trans_index:
            leaf = info.K.gens[info.trans_index[name]]
            return Element(self, _embed(leaf, 0, info.depth, info))
        if name in info.alg_index:
            j = info.alg_index[name]  # generator g_j lives at depth j (1-based)
            val = (_zero(j - 1, info), _one(j - 1, info))
            return Element(self, _embed(val, j, info.depth, info))
        raise UnknownSymbol(f"{name!r} is not a symbol of {self}")


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % q for q in range(2, int(n ** 0.5) + 1))


# ----------------------------------------------------------------------------
# compiled structure


@dataclass
class _Info:
    tower: Tower
    K: object  # sympy FracField
    trans: tuple[str, ...]
    trans_index: dict
    alg: list  # [(name, d_val at depth j-1)]
    alg_index: dict
    depth: int


@functools.lru_cache(maxsize=None)
def _info(tower: Tower) -> _Info:
    trans = []
    for layer in tower.layers:
        if layer.kind in ("rat", "laurent"):
            trans.append(layer.names[0])
        elif layer.kind == "conic":
            trans.append(layer.names[0])
    domain = QQ if tower.p == 0 else GF(tower.p, symmetric=False)
    K = sympy_field(",".join(trans), domain, grlex)[0] if trans else sympy_field("", domain, grlex)[0]
    info = _Info(tower, K, tuple(trans), {n: i for i, n in enumerate(trans)}, [], {}, 0)
    for i, layer in enumerate(tower.layers):
        if layer.kind in ("rat", "laurent"):
            continue
        below = tower.prefix(i)
        j = info.depth  # depth of the field below this generator
        if layer.kind == "sqrt":
            d = parse_element(layer.args[0], below)
        else:
            a = parse_element(layer.args[0], below)
            b = parse_element(layer.args[1], below)
            x = tower.prefix(i + 1)  # placeholder, X lives in K
            X = _embed(K.gens[info.trans_index[layer.names[0]]], 0, j, info)
            a_v = _lift_val(a.val, below.info, info, j)
            b_v = _lift_val(b.val, below.info, info, j)
            num = _add(_mul(X, X, j, info), _mul(a_v, b_v, j, info), j, info)
            dval = _mul(num, _inv(a_v, j, info), j, info)
            del x
            info.alg.append((layer.names[1], dval))
            info.alg_index[layer.names[1]] = len(info.alg)
            info.depth += 1
            continue
        info.alg.append((layer.names[0], _lift_val(d.val, below.info, info, j)))
        info.alg_index[layer.names[0]] = len(info.alg)
        info.depth += 1
    return info


def _lift_val(val, src: _Info, dst: _Info, depth: int):
    """Move a nested value from a prefix tower's field into ``dst``."""
    if depth == 0:
        return _canon(dst, val.set_field(dst.K)) if src.K is not dst.K else val
    lo, hi = val
    return (_lift_val(lo, src, dst, depth - 1), _lift_val(hi, src, dst, depth - 1))


# ----------------------------------------------------------------------------
# nested arithmetic; depth-0 values are sympy FracElements


def _canon(info: _Info, fe):
    den = fe.denom
    lc = den.LC
    if lc != 1:
        fe = info.K.raw_new(fe.numer.quo_ground(lc), den.quo_ground(lc))
    return fe


def _zero(j, info):
    if j == 0:
        return info.K.zero
    z = _zero(j - 1, info)
    return (z, z)


def _one(j, info):
    if j == 0:
        return info.K.one
    return (_one(j - 1, info), _zero(j - 1, info))


def _embed(val, j, L, info):
    while j < L:
        val = (val, _zero(j, info))
        j += 1
    return val


def _is_zero(x, j) -> bool:
    if j == 0:
        return not x.numer
    return _is_zero(x[0], j - 1) and _is_zero(x[1], j - 1)


def _add(x, y, j, info):
    if j == 0:
        return _canon(info, x + y)
    return (_add(x[0], y[0], j - 1, info), _add(x[1], y[1], j - 1, info))


def _neg(x, j):
    if j == 0:
        return -x
    return (_neg(x[0], j - 1), _neg(x[1], j - 1))


def _mul(x, y, j, info):
    if j == 0:
        return _canon(info, x * y)
    a, b = x
    c, e = y
    d = info.alg[j - 1][1]
    k = j - 1
    lo = _add(_mul(a, c, k, info), _mul(_mul(b, e, k, info), d, k, info), k, info)
    hi = _add(_mul(a, e, k, info), _mul(b, c, k, info), k, info)
    return (lo, hi)


def _inv(x, j, info):
    if j == 0:
        if not x.numer:
            raise DivisionByZero("division by zero")
        return _canon(info, 1 / x)
    a, b = x
    d = info.alg[j - 1][1]
    k = j - 1
    norm = _add(_mul(a, a, k, info), _neg(_mul(_mul(b, b, k, info), d, k, info), k), k, info)
    if _is_zero(norm, k):
        raise DivisionByZero("division by zero")
    n_inv = _inv(norm, k, info)
    return (_mul(a, n_inv, k, info), _neg(_mul(b, n_inv, k, info), k))


def _key(x, j):
    if j == 0:
        return (tuple(sorted(x.numer.items())), tuple(sorted(x.denom.items())))
    return (_key(x[0], j - 1), _key(x[1], j - 1))


# ----------------------------------------------------------------------------
# printing


def _poly_str(poly, names, p: int, scale: int = 1) -> str:
    terms = poly.terms(grlex)
    if not terms:
        return "0"
    parts = []
    for monom, c in terms:
        if p:
            c = int(c) % p
        else:
            c = Fraction(int(c.numerator), int(c.denominator)) * scale
            assert c.denominator == 1
            c = int(c)
        mon = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(monom) if e
        )
        neg = c < 0
        c = abs(c)
        if not mon:
            body = str(c)
        elif c == 1:
            body = mon
        else:
            body = f"{c}*{mon}"
        parts.append((neg, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _is_atomic(s: str) -> bool:
    """True if ``s`` can be used as a factor without parentheses."""
    return all(ch not in s for ch in " /+") and not s.startswith("-")


def _leaf_str(fe, info: _Info) -> str:
    names = info.trans
    p = info.tower.p
    num, den = fe.numer, fe.denom
    scale = 1
    if not p:
        scale = 1
        for _, c in list(num.terms()) + list(den.terms()):
            scale = lcm(scale, int(c.denominator))
    if den == den.ring.one and scale == 1:
        return _poly_str(num, names, p)
    ns = _poly_str(num, names, p, scale)
    ds = _poly_str(den, names, p, scale)
    if ds == "1":
        return ns
    if len(num.terms()) > 1:
        ns = f"({ns})"
    if not _is_atomic(ds) or "*" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


def _val_str(x, j, info: _Info) -> str:
    if j == 0:
        return _leaf_str(x, info)
    lo, hi = x
    name = info.alg[j - 1][0]
    k = j - 1
    if _is_zero(hi, k):
        return _val_str(lo, k, info)
    hs = _val_str(hi, k, info)
    if hs == "1":
        hpart = name
    elif hs == "-1":
        hpart = "-" + name
    elif _is_atomic(hs):
        hpart = f"{hs}*{name}"
    elif hs.startswith("-") and _is_atomic(hs[1:]):
        hpart = f"{hs}*{name}"
    else:
        hpart = f"({hs})*{name}"
    if _is_zero(lo, k):
        return hpart
    ls = _val_str(lo, k, info)
    if hpart.startswith("-"):
        return f"{ls} - {hpart[1:]}"
    return f"{ls} + {hpart}"


# ----------------------------------------------------------------------------
# elements


class Element:
    """An exact element of a tower field, always stored in canonical form."""

    __slots__ = ("tower", "val", "_hash")

    def __init__(self, tower: Tower, val):
        self.tower = tower
        self.val = val
        self._hash = None

    @property
    def info(self) -> _Info:
        return self.tower.info

    def _other(self, y) -> "Element":
        if isinstance(y, Element):
            if y.tower != self.tower:
                if y.tower.is_prefix_of(self.tower):
                    return y.coerce(self.tower)
                if self.tower.is_prefix_of(y.tower):
                    raise _Promote(y.tower)
                raise FieldMismatch(f"{self.tower} vs {y.tower}")
            return y
        if isinstance(y, (int, Fraction)) and not isinstance(y, bool):
            return self.tower.const(y)
        return NotImplemented

    def _binop(self, y, fn, reverse=False):
        try:
            o = self._other(y)
        except _Promote as pr:
            me = self.coerce(pr.tower)
            return me._binop(y, fn, reverse)
        if o is NotImplemented:
            return NotImplemented
        a, b = (o, self) if reverse else (self, o)
        info = self.info
        return Element(self.tower, fn(a.val, b.val, info.depth, info))

    def __add__(self, y):
        return self._binop(y, _add)

    def __radd__(self, y):
        return self._binop(y, _add, True)

    def __sub__(self, y):
        return self._binop(y, lambda a, b, j, i: _add(a, _neg(b, j), j, i))

    def __rsub__(self, y):
        return self._binop(y, lambda a, b, j, i: _add(a, _neg(b, j), j, i), True)

    def __mul__(self, y):
        return self._binop(y, _mul)

    def __rmul__(self, y):
        return self._binop(y, _mul, True)

    def __truediv__(self, y):
        return self._binop(y, lambda a, b, j, i: _mul(a, _inv(b, j, i), j, i))

    def __rtruediv__(self, y):
        return self._binop(y, lambda a, b, j, i: _mul(a, _inv(b, j, i), j, i), True)

    def __neg__(self):
        return Element(self.tower, _neg(self.val, self.info.depth))

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.tower.one()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Element":
        info = self.info
        return Element(self.tower, _inv(self.val, info.depth, info))

    def is_zero(self) -> bool:
        return _is_zero(self.val, self.info.depth)

    def is_one(self) -> bool:
        return self == self.tower.one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, y):
        if isinstance(y, (int, Fraction)) and not isinstance(y, bool):
            y = self.tower.const(y)
        if not isinstance(y, Element):
            return NotImplemented
        if y.tower != self.tower:
            if y.tower.is_prefix_of(self.tower):
                y = y.coerce(self.tower)
            elif self.tower.is_prefix_of(y.tower):
                return self.coerce(y.tower) == y
            else:
                return False
        return _key(self.val, self.info.depth) == _key(y.val, self.info.depth)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.tower), _key(self.val, self.info.depth)))
        return self._hash

    def __str__(self) -> str:
        return _val_str(self.val, self.info.depth, self.info)

    def __repr__(self) -> str:
        return f"Element({str(self)!r} in {self.tower})"

    # structure access
    def leaf(self):
        """The sympy FracElement when no algebraic generator is involved."""
        val = self.val
        for j in range(self.info.depth, 0, -1):
            if not _is_zero(val[1], j - 1):
                return None
            val = val[0]
        return val

    def parts(self) -> tuple["Element", "Element"]:
        """(lo, hi) with self = lo + hi*g for the topmost algebraic generator g."""
        info = self.info
        if info.depth == 0:
            return self, self.tower.zero()
        lo, hi = self.val
        j = info.depth
        return (
            Element(self.tower, _embed(lo, j - 1, j, info)),
            Element(self.tower, _embed(hi, j - 1, j, info)),
        )

    def symbols(self) -> set[str]:
        info = self.info
        out = set()

        def walk(x, j):
            if j == 0:
                for monom in list(x.numer.monoms()) + list(x.denom.monoms()):
                    for i, e in enumerate(monom):
                        if e:
                            out.add(info.trans[i])
                return
            walk(x[0], j - 1)
            if not _is_zero(x[1], j - 1):
                out.add(info.alg[j - 1][0])
                walk(x[1], j - 1)

        walk(self.val, info.depth)
        return out

    def coerce(self, tower: Tower) -> "Element":
        if tower == self.tower:
            return self
        if self.tower.is_prefix_of(tower):
            src, dst = self.info, tower.info
            j = src.depth
            val = _lift_val(self.val, src, dst, j)
            return Element(tower, _embed(val, j, dst.depth, dst))
        return _coerce_via_text(str(self), tower)

    def to_fraction(self) -> Fraction:
        """The element as a rational number (prime field Q only)."""
        leaf = self.leaf()
        if leaf is None or self.symbols():
            raise ValueError(f"{self} is not a constant")
        c = leaf.numer.LC if leaf.numer else 0
        if self.tower.p:
            return Fraction(int(c) % self.tower.p)
        c = Fraction(int(c.numerator), int(c.denominator)) if c else Fraction(0)
        return c

    def to_int_mod_p(self) -> int:
        leaf = self.leaf()
        if leaf is None or self.symbols():
            raise ValueError(f"{self} is not a constant")
        return int(leaf.numer.LC) % self.tower.p if leaf.numer else 0


class _Promote(Exception):
    def __init__(self, tower):
        self.tower = tower


@functools.lru_cache(maxsize=65536)
def _coerce_via_text(text: str, tower: Tower) -> Element:
    return parse_element(text, tower)


# ----------------------------------------------------------------------------
# parsing


def _resolver(tower: Tower):
    def resolve(name, tok=None):
        try:
            return tower.gen(name)
        except UnknownSymbol:
            raise UnknownSymbol(f"unknown symbol {name!r} for field {tower}") from None

    return resolve


def parse_element(text: str, tower: Tower) -> Element:
    parser = ExprParser(text, _resolver(tower), tower.const)
    value = parser.parse_sum()
    parser.finish()
    return value


def normalize(expr, tower: Tower | str) -> Element:
    """Parse or coerce ``expr`` into the canonical element of ``tower``."""
    if isinstance(tower, str):
        tower = parse_tower(tower)
    return tower.element(expr)


def parse_tower(text: str) -> Tower:
    tokens = tokenize(text)
    i = 0

    def tok():
        return tokens[i]

    def fail(msg):
        raise ParseError(msg, text, tokens[i].pos)

    if tok().kind == "name" and tok().text == "Q":
        tower = Tower(0)
        i += 1
    elif tok().kind == "name" and tok().text == "F":
        i += 1
        if tokens[i].text != "(":
            fail("expected '('")
        i += 1
        if tokens[i].kind != "num":
            fail("expected a prime")
        p = int(tokens[i].text)
        i += 1
        if tokens[i].text != ")":
            fail("expected ')'")
        i += 1
        try:
            tower = Tower(p)
        except ValueError as exc:
            raise ParseError(str(exc), text, tokens[i - 2].pos) from None
    else:
        fail("tower must start with Q or F(p)")
    while tok().kind != "end":
        if tok().text != ".":
            fail("expected '.'")
        i += 1
        if tok().kind != "name" or tok().text not in KINDS:
            fail(f"expected one of {', '.join(KINDS)}")
        kind = tok().text
        i += 1
        if tok().text != "(":
            fail("expected '('")
        # find the matching parenthesis and split arguments at depth 0
        start = tok().pos + 1
        depth = 0
        args = []
        arg_start = start
        while True:
            t = tok()
            if t.kind == "end":
                fail("unbalanced parenthesis")
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    args.append(text[arg_start:t.pos].strip())
                    i += 1
                    break
            elif t.text == "," and depth == 1:
                args.append(text[arg_start:t.pos].strip())
                arg_start = t.pos + 1
            i += 1
        args = [a for a in args if a] if args != [""] else []
        want = {"rat": 1, "laurent": 1, "sqrt": 1, "conic": 2}[kind]
        if len(args) != want:
            raise ParseError(f"{kind} takes {want} argument(s)", text, start)
        try:
            if kind == "rat":
                tower = tower.rat(args[0])
            elif kind == "laurent":
                tower = tower.laurent(args[0])
            elif kind == "sqrt":
                tower = tower.sqrt(args[0])
            else:
                tower = tower.conic(args[0], args[1])
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), text, start) from None
    return tower
