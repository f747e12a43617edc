"""Diagonal quadratic forms and their constructors.

A form may carry ``blocks``: a decomposition into scaled Pfister forms
<s>*pf(slots). Blocks are bookkeeping only (they are what the roundness
arguments act on); the entries are always the full diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..errors import FieldMismatch, ZeroElement, ZeroScalar, ZeroSlot
from ..fields.squares import SquareClass, square_class
from ..fields.tower import Element, Tower, _is_atomic


def pfister_entries(slots) -> list[Element]:
    """Entries of <1,-a1> x ... x <1,-an>, first slot varying fastest."""
    out = None
    for a in slots:
        pair = [a.tower.one(), -a]
        out = pair if out is None else [x * y for y in pair for x in out]
    return out


@dataclass(frozen=True)
class Block:
    scale: Element
    slots: tuple[Element, ...]

    def entries(self) -> list[Element]:
        if not self.slots:
            return [self.scale]
        return [self.scale * e for e in pfister_entries(self.slots)]

    def coerce(self, tower: Tower) -> "Block":
        return Block(self.scale.coerce(tower), tuple(s.coerce(tower) for s in self.slots))

    def __str__(self) -> str:
        if not self.slots:
            return f"<{self.scale}>"
        body = f"pf({', '.join(str(s) for s in self.slots)})"
        if self.scale.is_one():
            return body
        s = str(self.scale)
        if not _is_atomic(s) and not (s.startswith("-") and _is_atomic(s[1:])):
            s = f"({s})"
        return f"{s}*{body}"


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    field: Tower
    entries: tuple[Element, ...]
    blocks: tuple[Block, ...] | None = None

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a quadratic form needs at least one entry")
        entries = tuple(self.field.element(e) for e in self.entries)
        for e in entries:
            if e.is_zero():
                raise ZeroElement("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", entries)
        if self.blocks is not None:
            blocks = tuple(b.coerce(self.field) for b in self.blocks)
            expanded = [e for b in blocks for e in b.entries()]
            if len(expanded) != len(entries) or any(x != y for x, y in zip(expanded, entries)):
                raise ValueError("blocks do not match the diagonal entries")
            object.__setattr__(self, "blocks", blocks)

    @staticmethod
    def from_blocks(tower: Tower, blocks) -> "QuadraticForm":
        blocks = tuple(b.coerce(tower) for b in blocks)
        return QuadraticForm(tower, tuple(e for b in blocks for e in b.entries()), blocks)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.entries)

    def value(self, vector) -> Element:
        if len(vector) != self.dim:
            raise ValueError("vector length does not match the dimension")
        total = self.field.zero()
        for e, x in zip(self.entries, vector):
            x = self.field.element(x)
            total = total + e * x * x
        return total

    def coerce(self, tower: Tower) -> "QuadraticForm":
        """Scalar extension (or identification) to another tower."""
        if tower == self.field:
            return self
        blocks = None if self.blocks is None else tuple(b.coerce(tower) for b in self.blocks)
        return QuadraticForm(tower, tuple(e.coerce(tower) for e in self.entries), blocks)

    def single_block(self) -> Block | None:
        if self.blocks is not None and len(self.blocks) == 1:
            return self.blocks[0]
        return None

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return (
            self.field == other.field
            and self.entries == other.entries
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.field, self.entries))

    def __str__(self) -> str:
        if self.blocks is None:
            return "<" + ", ".join(str(e) for e in self.entries) + ">"
        parts = []
        pending = []
        for b in self.blocks:
            if not b.slots:
                pending.append(str(b.scale))
                continue
            if pending:
                parts.append("<" + ", ".join(pending) + ">")
                pending = []
            parts.append(str(b))
        if pending:
            parts.append("<" + ", ".join(pending) + ">")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"QuadraticForm({self} over {self.field})"


def diag(tower: Tower, *entries) -> QuadraticForm:
    entries = tuple(tower.element(e) for e in entries)
    return QuadraticForm(tower, entries, tuple(Block(e, ()) for e in entries))


def plain(tower: Tower, entries) -> QuadraticForm:
    """A form without block metadata."""
    return QuadraticForm(tower, tuple(tower.element(e) for e in entries))


def pfister(*slots, tower: Tower | None = None) -> QuadraticForm:
    if tower is None:
        if not slots or not isinstance(slots[0], Element):
            raise ValueError("pass Elements or a tower")
        tower = slots[0].tower
    slots = tuple(tower.element(s) for s in slots)
    for s in slots:
        if s.is_zero():
            raise ZeroSlot("Pfister slots must be nonzero")
    return QuadraticForm.from_blocks(tower, (Block(tower.one(), slots),))


def hyperbolic(tower: Tower, planes: int = 1) -> QuadraticForm:
    return diag(tower, *([1, -1] * planes))


def _same_field(f: QuadraticForm, g: QuadraticForm) -> None:
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} vs {g.field}")


def orth_sum(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    _same_field(f, g)
    blocks = None
    if f.blocks is not None and g.blocks is not None:
        blocks = f.blocks + g.blocks
    return QuadraticForm(f.field, f.entries + g.entries, blocks)


def scale(s, f: QuadraticForm) -> QuadraticForm:
    s = f.field.element(s)
    if s.is_zero():
        raise ZeroScalar("scaling by zero")
    blocks = None
    if f.blocks is not None:
        blocks = tuple(Block(s * b.scale, b.slots) for b in f.blocks)
    return QuadraticForm(f.field, tuple(s * e for e in f.entries), blocks)


def tensor(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    _same_field(f, g)
    entries = tuple(x * y for y in g.entries for x in f.entries)
    if f.blocks is None or g.blocks is None:
        return QuadraticForm(f.field, entries)
    # (<s1> pf(A)) x (<s2> pf(B)) = <s1 s2> pf(A, B); order kept g-major
    blocks = tuple(
        Block(b1.scale * b2.scale, b1.slots + b2.slots) for b2 in g.blocks for b1 in f.blocks
    )
    expanded = [e for b in blocks for e in b.entries()]
    if sorted(map(str, expanded)) == sorted(map(str, entries)):
        return QuadraticForm.from_blocks(f.field, blocks)
    return QuadraticForm(f.field, entries)


def negate(f: QuadraticForm) -> QuadraticForm:
    return scale(-1, f)


def determinant(f: QuadraticForm) -> Element:
    out = f.field.one()
    for e in f.entries:
        out = out * e
    return out


def signed_determinant(f: QuadraticForm) -> Element:
    n = f.dim
    d = determinant(f)
    return -d if (n * (n - 1) // 2) % 2 else d


def discriminant(f: QuadraticForm) -> SquareClass:
    """Square class of (-1)^(n(n-1)/2) * det."""
    return square_class(signed_determinant(f))


def all_vectors(values, n: int):
    return product(values, repeat=n)
