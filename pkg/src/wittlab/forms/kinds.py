"""Classification of towers by which decision procedures apply."""
from __future__ import annotations

import functools

from ..errors import UnsupportedTower
from ..fields.squares import _shape_of
from ..fields.tower import Tower


@functools.lru_cache(maxsize=None)
def field_kind(tower: Tower) -> str:
    """One of "Q", "fp", "fp2", "laurent", "function", "algebraic", "other".

    "function" means Q or F_p followed by rat layers only; "algebraic" covers
    rat towers with sqrt(x) layers (square classes still computable);
    "laurent" means Laurent layers on top of a square-class supported base.
    """
    if not tower.layers:
        return "Q" if tower.p == 0 else "fp"
    try:
        shape = _shape_of(tower)
    except UnsupportedTower:
        return "other"
    if shape.kind == "fp2":
        return "fp2"
    if tower.layers[-1].kind == "laurent":
        return "laurent"
    if all(layer.kind == "rat" for layer in tower.layers):
        return "function"
    return "algebraic"


def square_classes_supported(tower: Tower) -> bool:
    return field_kind(tower) != "other"


def is_finite(tower: Tower) -> bool:
    return field_kind(tower) in ("fp", "fp2")


def finite_elements(tower: Tower):
    """All elements of a finite tower (F_p or F_p^2)."""
    p = tower.p
    if field_kind(tower) == "fp":
        return [tower.const(i) for i in range(p)]
    s = tower.gen(tower.layers[0].names[0])
    return [tower.const(i) + tower.const(j) * s for j in range(p) for i in range(p)]
