"""Quadratic-form constructors, invariants and oracles."""
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from wittlab.errors import FieldMismatch, NonMonomialEntry, NotLaurentLayer, ZeroElement, ZeroScalar, ZeroSlot
from wittlab.fields.tower import Tower
from wittlab.fields.valuation import ValuationSpec
from wittlab.forms import (
    clifford_invariant,
    conic_kernel_membership,
    diag,
    discriminant,
    hyperbolic,
    is_isometric,
    is_isotropic,
    orth_sum,
    pfister,
    represents,
    scale,
    similarity_factor_check,
    springer_residues,
    symbol,
    tensor,
    witt_decompose,
    witt_equal,
)
from wittlab.forms.oracles import similar_pfister_rewrite
from wittlab.forms.quadratic import plain

Q = Tower.Q()
F3, F5, F7 = Tower.F(3), Tower.F(5), Tower.F(7)


def squares_mod(p):
    return {x * x % p for x in range(1, p)}


# ---------------------------------------------------------------- constructors


def test_orth_sum_and_dimension(ex1_tower):
    k = ex1_tower
    a, b, t = k.gen("a"), k.gen("b"), k.gen("t")
    assert orth_sum(diag(k, 1), diag(k, -a)).entries == diag(k, 1, -a).entries
    phi = orth_sum(pfister(b + 1), scale(t, pfister(b + 4)))
    assert phi.entries == diag(k, 1, -b - 1, t, -t * (b + 4)).entries
    assert str(phi) == "pf(b + 1) + t*pf(b + 4)"


def test_orth_sum_field_mismatch():
    with pytest.raises(FieldMismatch):
        orth_sum(diag(Q, 1), diag(F5, 1))


def test_scale_examples(generic_tower):
    k = generic_tower
    c, t, b = k.gen("c"), k.gen("t"), k.gen("b")
    f = scale(t, pfister(b + c**2))
    assert scale(c, f).entries == scale(c * t, pfister(b + c**2)).entries
    assert scale(1, f) == f
    g = diag(k, 1, -k.gen("a"))
    assert is_isometric(scale(4, g), g).is_proved
    with pytest.raises(ZeroScalar):
        scale(0, g)


def test_pfister_expansion():
    k = Tower.Q().rat("a").rat("b")
    a, b = k.gen("a"), k.gen("b")
    assert pfister(a).entries == (k.one(), -a)
    # <1,-a> x <1,-b> expanded by hand
    assert pfister(a, b).entries == (k.one(), -a, -b, a * b)
    assert tensor(diag(k, 1), pfister(a, b)).entries == pfister(a, b).entries
    with pytest.raises(ZeroSlot):
        pfister(k.zero())
    with pytest.raises(ZeroElement):
        diag(k, 0, 1)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_dimension_additive_and_multiplicative(xs, ys):
    f, g = diag(F5, *xs), diag(F5, *ys)
    assert orth_sum(f, g).dim == f.dim + g.dim
    assert tensor(f, g).dim == f.dim * g.dim


# ---------------------------------------------------------------- invariants


def test_discriminant_examples():
    k = Tower.Q().rat("a")
    assert discriminant(diag(k, 1, -k.gen("a"))) == discriminant(diag(k, k.gen("a")))
    assert discriminant(hyperbolic(Q)).is_trivial()
    # odd dimension: <1, -2, 2> has signed determinant (-1)^3 * (-4) = 4
    assert discriminant(diag(Q, 1, -2, 2)).is_trivial()
    assert not discriminant(diag(Q, 1, 2, 2)).is_trivial()


def test_clifford_of_hyperbolic_plane():
    assert clifford_invariant(diag(Q, 1, -1)).is_trivial().is_proved


@pytest.mark.parametrize("a,b", [(2, 3), (-1, -1), (3, 5), (2, 7), (-1, 3)])
def test_clifford_of_pfister_is_the_symbol(a, b):
    c = clifford_invariant(pfister(Q(a), Q(b)))
    assert (c + symbol(Q(a), Q(b))).is_trivial().is_proved


def test_clifford_nontrivial_examples():
    # (2, 3): 2 is a nonsquare mod 3, so the symbol is ramified at 3
    assert 2 not in squares_mod(3)
    assert clifford_invariant(pfister(Q(2), Q(3))).is_trivial().is_refuted
    # (2, 7): x^2 - 2y^2 - 7z^2 has the zero (3, 1, 1)
    assert 9 - 2 - 7 == 0
    assert clifford_invariant(pfister(Q(2), Q(7))).is_trivial().is_proved


def test_symbols_over_rational_function_fields():
    k = Q.rat("b")
    b = k.gen("b")
    # residue of (b, -1) at b = 0 is -1, not a square in Q
    assert symbol(b, k.element(-1)).is_trivial().is_refuted
    assert symbol(b, -b).is_trivial().is_proved
    k2 = F5.rat("b").rat("c")
    b, c = k2.gen("b"), k2.gen("c")
    assert symbol(b, k2.element(2)).is_trivial().is_refuted
    # multivariate factorization over F_p is out of reach: Reduced, not an error
    assert symbol(b * c + 1, b).is_trivial().is_reduced


@st.composite
def fp_forms(draw, p, min_dim=1, max_dim=5):
    n = draw(st.integers(min_dim, max_dim))
    return [draw(st.integers(1, p - 1)) for _ in range(n)]


def _isometry_chain(entries, p, moves):
    """Random isometries over F_p: permutations, square rescalings and
    replacing <x, y> by <x', x'xy> with x' represented by <x, y>."""
    entries = list(entries)
    for kind, i, j, r, s in moves:
        n = len(entries)
        i, j = i % n, j % n
        if kind == 0:
            entries[i], entries[j] = entries[j], entries[i]
        elif kind == 1:
            entries[i] = entries[i] * r * r % p
        elif i != j:
            x, y = entries[i], entries[j]
            v = (x * r * r + y * s * s) % p
            if v:
                entries[i], entries[j] = v, v * x * y % p
    return entries


moves = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 9), st.integers(0, 9), st.integers(1, 6), st.integers(0, 6)),
    max_size=6,
)


@given(fp_forms(7), moves)
def test_invariants_stable_under_isometry(entries, mv):
    f = diag(F7, *entries)
    g = diag(F7, *_isometry_chain(entries, 7, mv))
    assert discriminant(f) == discriminant(g)
    assert is_isometric(f, g).is_proved
    assert (clifford_invariant(f) + clifford_invariant(g)).is_trivial().is_proved


@given(st.integers(-12, 12).filter(bool), st.integers(-12, 12).filter(bool), st.lists(st.tuples(st.integers(0, 2), st.integers(0, 3), st.integers(0, 3), st.integers(1, 4), st.integers(0, 4)), max_size=4))
def test_clifford_stable_under_isometry_over_Q(a, b, mv):
    entries = [1, -a, -b, a * b]
    moved = []
    for e in _rational_chain(entries, mv):
        moved.append(e)
    f, g = diag(Q, *entries), diag(Q, *moved)
    assert is_isometric(f, g).is_proved
    assert (clifford_invariant(f) + clifford_invariant(g)).is_trivial().is_proved


def _rational_chain(entries, mv):
    entries = [Fraction(e) for e in entries]
    for kind, i, j, r, s in mv:
        n = len(entries)
        i, j = i % n, j % n
        if kind == 0:
            entries[i], entries[j] = entries[j], entries[i]
        elif kind == 1:
            entries[i] *= r * r
        elif i != j:
            x, y = entries[i], entries[j]
            v = x * r * r + y * s * s
            if v:
                entries[i], entries[j] = v, v * x * y
    return entries


# ---------------------------------------------------------------- isotropy


def test_isotropic_examples():
    v = is_isotropic(diag(Q, 1, 1, -2))
    assert v.is_proved
    vec = [Fraction(x) for x in v.certificate["vector"]]
    assert vec[0] ** 2 + vec[1] ** 2 - 2 * vec[2] ** 2 == 0
    v = is_isotropic(diag(Q, 1, 1, 1, 1))
    assert v.is_refuted and v.certificate["place"] == "inf"
    # -1 is not a square mod 3: enumerate all 9 pairs by hand
    assert not any((x * x + y * y) % 3 == 0 for x, y in product(range(3), repeat=2) if (x, y) != (0, 0))
    v = is_isotropic(diag(F3, 1, 1))
    assert v.is_refuted and "9 pairs" in v.certificate["searched"]


def test_isotropic_laurent_springer(ex1_tower):
    k = ex1_tower
    a, b = k.gen("a"), k.gen("b")
    assert is_isotropic(pfister(a, b)).is_refuted
    assert is_isotropic(diag(k, 1, -k.gen("t") ** 2)).is_proved


@given(st.integers(1, 4), st.integers(1, 4))
def test_norm_form_law_over_F5(x, y):
    # pf(x, y) is hyperbolic iff <1, -x, -y> is isotropic (always, over F_p)
    hyp = witt_decompose(pfister(F5(x), F5(y))).is_zero
    iso = is_isotropic(diag(F5, 1, -x, -y)).is_proved
    assert hyp == iso


@pytest.mark.parametrize("x,y", [(1, 1), (-1, -1), (2, 3), (2, 7), (-1, 2), (3, -3), (5, 7)])
def test_norm_form_law_over_Q(x, y):
    hyp = witt_decompose(pfister(Q(x), Q(y))).is_zero
    iso = is_isotropic(diag(Q, 1, -x, -y)).is_proved
    assert hyp == iso


# ---------------------------------------------------------------- Witt decomposition


def test_witt_decompose_examples():
    w = witt_decompose(diag(Q, 1, -1, 1, 1))
    assert w.witt_index == 1
    assert is_isometric(w.anisotropic_kernel, diag(Q, 1, 1)).is_proved
    w = witt_decompose(hyperbolic(Q))
    assert w.witt_index == 1 and w.anisotropic_kernel is None
    # <1, -2, -3> over F5: 1 - 2*1 - 3*0 ... search mod 5 by hand
    iso = any((x * x - 2 * y * y - 3 * z * z) % 5 == 0 for x, y, z in product(range(5), repeat=3) if (x, y, z) != (0, 0, 0))
    w = witt_decompose(pfister(F5(2), F5(3)))
    assert iso and w.witt_index == 2 and w.is_zero


# ---------------------------------------------------------------- isometry


def test_isometry_examples():
    assert is_isometric(diag(Q, 1, 1), diag(Q, 2, 2)).is_proved
    f = diag(Q, 3, -5, 7)
    assert is_isometric(f, f).is_proved
    assert is_isometric(diag(Q, 1, 1), diag(Q, 1, -1)).is_refuted
    with pytest.raises(FieldMismatch):
        is_isometric(diag(Q, 1), diag(F5, 1))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_pfister_roundness_small(p):
    F = Tower.F(p)
    pi = pfister(F(2), F(3))
    values = {(x * x - 2 * y * y - 3 * z * z + 6 * w * w) % p for x, y, z, w in product(range(p), repeat=4)}
    for lam in sorted(values - {0})[:3]:
        assert is_isometric(scale(lam, pi), pi).is_proved


# ---------------------------------------------------------------- representation


def _conic(k):
    return k.conic(k.gen("a"), k.gen("b"))


def test_represents_conic_identities(generic_tower):
    C = _conic(generic_tower)
    a, b, c, X, Y = (C.gen(n) for n in "abcXY")
    v = represents(pfister(a, b + 1), -2 * a * Y)
    assert v.is_proved
    vec = [C.element(x) for x in v.certificate["vector"]]
    assert pfister(a, b + 1).value(vec) == -2 * a * Y
    v = represents(pfister(a, b + c**2), -2 * a * Y * c)
    assert v.is_proved
    assert pfister(a, b + c**2).value([C.element(x) for x in v.certificate["vector"]]) == -2 * a * Y * c
    assert represents(diag(Q, 1), 1).is_proved
    with pytest.raises(ZeroElement):
        represents(diag(Q, 1), 0)


def test_similarity_factor_examples(generic_tower):
    C = _conic(generic_tower)
    a, b, c, Y = (C.gen(n) for n in "abcY")
    assert similarity_factor_check(pfister(a, b + 1), -2 * a * Y).is_proved
    f = diag(Q, 3, 5)
    assert similarity_factor_check(f, 1).is_proved
    cpi = scale(c, pfister(a, b + c**2))
    # -2aYc is a value of pi, hence a similarity factor of <c>pi
    assert similarity_factor_check(cpi, -2 * a * Y * c).is_proved
    # outside the direct procedure over a conic function field: never refuted
    assert not is_isometric(scale(-2 * a * Y, cpi), cpi).is_refuted
    with pytest.raises(ZeroScalar):
        similarity_factor_check(f, 0)


def test_similar_pfister_rewrite():
    pi = pfister(F5(2), F5(3))
    f = scale(F5(4), pi)
    assert similar_pfister_rewrite(f, pi, similar=True).is_proved


# ---------------------------------------------------------------- residues


def test_springer_residues_basic():
    k = Tower.F(5).laurent("t")
    t = k.gen("t")
    pair = springer_residues(diag(k, 2), ValuationSpec("t"))
    assert pair.first.entries == (Tower.F(5).element(2),) and pair.second.dim == 0
    # residues are Witt classes: <2, 3> is hyperbolic over F5, <2, 4> is not
    pair = springer_residues(diag(k, 1, 2 * t, 3 * t**3), ValuationSpec("t"))
    assert pair.first.entries == (Tower.F(5).element(1),) and pair.second.dim == 0
    pair = springer_residues(diag(k, 1, 2 * t, 4 * t**3), ValuationSpec("t"))
    assert pair.second.dim == 2
    with pytest.raises(NotLaurentLayer):
        springer_residues(diag(k, 1), ValuationSpec("s"))


def test_springer_non_monomial():
    k = Tower.F(5).rat("b").laurent("t")
    f = diag(k, k.element("1 + t"))
    with pytest.raises(NonMonomialEntry):
        springer_residues(f, ValuationSpec("t"), normalize=False)


def test_springer_of_generic_sum_shape(ex1_tower):
    k = ex1_tower
    b, t = k.gen("b"), k.gen("t")
    phi1, phi2 = pfister(b + 1), pfister(b + 4)
    pair = springer_residues(orth_sum(phi1, scale(t, phi2)), ValuationSpec("t"))
    res = k.without("t")
    assert witt_equal(pair.first.anisotropic_kernel, phi1.coerce(res)).is_proved
    assert witt_equal(pair.second.anisotropic_kernel, phi2.coerce(res)).is_proved


def test_conic_kernel_examples(ex1_tower):
    k = ex1_tower
    a, b = k.gen("a"), k.gen("b")
    assert conic_kernel_membership(pfister(a, b), a, b).is_proved
    assert conic_kernel_membership(pfister(a), a, b).is_refuted
    padded = orth_sum(pfister(a, b), hyperbolic(k))
    assert conic_kernel_membership(padded, a, b).is_proved
    assert conic_kernel_membership(orth_sum(pfister(a), hyperbolic(k)), a, b).is_refuted
