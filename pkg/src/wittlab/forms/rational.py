"""Hilbert symbols and the Hasse-Minkowski isotropy oracle over Q.

Places are encoded as integers: 0 is the real place, a prime p is Q_p.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from sympy import factorint
from sympy.abc import x as _x, y as _y, z as _z
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from ..fields.squares import legendre, signed_squarefree

REAL = 0


def _split(q: Fraction, p: int) -> tuple[int, int]:
    """q = p^k * u with u a p-adic unit; returns (k, u) with u an integer."""
    n = q.numerator * q.denominator  # same square class as q
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def hilbert_symbol(a, b, p: int) -> int:
    """(a, b)_p in {1, -1} for nonzero rationals a, b."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == REAL:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2
        omega = lambda w: ((w * w - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    sign = -1 if e else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


def relevant_places(values) -> list[int]:
    primes = {2}
    for q in values:
        q = Fraction(q)
        for n in (q.numerator, q.denominator):
            primes.update(factorint(abs(n)).keys())
    primes.discard(1)
    return [REAL] + sorted(primes)


def is_local_square(q: Fraction, p: int) -> bool:
    q = Fraction(q)
    if p == REAL:
        return q > 0
    k, u = _split(q, p)
    if k % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def hasse_invariant(entries, p: int) -> int:
    out = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            out *= hilbert_symbol(entries[i], entries[j], p)
    return out


def locally_isotropic(entries, p: int) -> bool:
    entries = [Fraction(e) for e in entries]
    n = len(entries)
    if n <= 1:
        return False
    if p == REAL:
        return any(e > 0 for e in entries) and any(e < 0 for e in entries)
    if n == 2:
        return is_local_square(-entries[0] * entries[1], p)
    if n == 3:
        a, b, c = entries
        return hilbert_symbol(-a * b, -a * c, p) == 1
    if n == 4:
        d = entries[0] * entries[1] * entries[2] * entries[3]
        if not is_local_square(d, p):
            return True
        return hasse_invariant(entries, p) == hilbert_symbol(-1, -1, p)
    return True


def local_obstruction(entries) -> int | None:
    """A place where the form is anisotropic, or None if isotropic everywhere."""
    for p in relevant_places(entries):
        if not locally_isotropic(entries, p):
            return p
    return None


# ----------------------------------------------------------------------------
# witnesses


def _int_model(entries):
    """Squarefree integers s_i and rationals w_i with e_i = s_i * w_i^2."""
    out = []
    for e in entries:
        e = Fraction(e)
        s = signed_squarefree(e)
        ratio = e / s
        num, den = ratio.numerator, ratio.denominator
        rn, rd = isqrt(num), isqrt(den)
        assert rn * rn == num and rd * rd == den
        out.append((s, Fraction(rn, rd)))
    return out


def _coprime_ternary(s):
    """Make squarefree coefficients pairwise coprime.

    Returns (coeffs, mult) such that a solution X of the new equation gives
    the solution mult[i] * X[i] of sum s_i x_i^2 = 0.
    """
    s = list(s)
    mult = [Fraction(1)] * 3
    changed = True
    while changed:
        changed = False
        for i, j in ((0, 1), (0, 2), (1, 2)):
            g = gcd(s[i], s[j])
            if abs(g) > 1:
                g = abs(g)
                k = 3 - i - j
                # <s_i, s_j, s_k> ~ <s_i/g, s_j/g, g*s_k>; x_k = g * X_k
                s[i] //= g
                s[j] //= g
                prod_ = s[k] * g
                s[k] = signed_squarefree(Fraction(prod_))
                q = isqrt(prod_ // s[k])  # g*s_k = s_k' * q^2
                mult[k] *= Fraction(g, q)
                changed = True
    return s, mult


def _ternary_witness(entries):
    model = _int_model(entries)
    s0 = [m[0] for m in model]
    s, mult = _coprime_ternary(s0)
    vec = None
    sol = diop_ternary_quadratic_normal(s[0] * _x**2 + s[1] * _y**2 + s[2] * _z**2)
    if sol[0] is not None:
        vec = [Fraction(int(v)) for v in sol]
        if sum(c * v * v for c, v in zip(s, vec)) != 0:
            vec = None
    if vec is None:
        small = _small_search(s, 12)
        if small is None:
            return None
        vec = small
    # undo the coprime reduction, then the square rescaling of the entries
    raw = [m * v for m, v in zip(mult, vec)]
    out = [r / w for r, (_, w) in zip(raw, model)]
    if sum(Fraction(e) * v * v for e, v in zip(entries, out)) != 0:
        return _small_search([Fraction(e) for e in entries], 12)
    return out


def _small_search(entries, bound: int):
    n = len(entries)
    for vec in product(range(-bound, bound + 1), repeat=n):
        if any(vec) and sum(e * v * v for e, v in zip(entries, vec)) == 0:
            return [Fraction(v) for v in vec]
    return None


def _binary_witness(entries):
    a, b = entries
    q = -a * b
    num, den = q.numerator, q.denominator
    if num <= 0:
        return None
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    r = Fraction(rn, rd)  # a*x^2 + b*y^2 = 0 with x = r/a, y = 1
    return [r / a, Fraction(1)]


def isotropic_vector(entries) -> list[Fraction] | None:
    """An isotropic vector over Q if one exists (decided by Hasse-Minkowski)."""
    entries = [Fraction(e) for e in entries]
    n = len(entries)
    if local_obstruction(entries) is not None:
        return None
    if n == 2:
        return _binary_witness(entries)
    if n == 3:
        return _ternary_witness(entries)
    # try isotropic sub-forms first, they give cheap witnesses
    for i, j in ((i, j) for i in range(n) for j in range(i + 1, n)):
        sub = _binary_witness([entries[i], entries[j]])
        if sub:
            out = [Fraction(0)] * n
            out[i], out[j] = sub
            return out
    # reduce the dimension: m = e_{n-2} u^2 + e_{n-1} v^2 with the shorter
    # form <e_0, ..., e_{n-3}, m> isotropic with nonzero last coordinate
    head, a, b = entries[:-2], entries[-2], entries[-1]
    for size in range(1, 60):
        for u in range(0, size + 1):
            for v in (size - u, -(size - u)) if size - u else (0,):
                if gcd(u, abs(v)) != 1:
                    continue
                m = a * u * u + b * v * v
                if m == 0:
                    continue
                shorter = head + [m]
                if local_obstruction(shorter) is not None:
                    continue
                w = isotropic_vector(shorter)
                if w is None:
                    continue
                z = w[-1]
                return w[:-1] + [z * u, z * v]
    raise RuntimeError(f"no witness found for isotropic form {entries}")
