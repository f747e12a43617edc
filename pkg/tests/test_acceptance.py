"""The eight acceptance criteria, each at its stated tolerance.

Each test records one line in RESULTS; conftest prints them as a
pass/fail summary at the end of the run. Run directly with
``python3 tests/test_acceptance.py``.
"""
import json
import random
import subprocess
import sys
import time
from itertools import product

import numpy as np
import pytest

from wittlab.fields.tower import Tower
from wittlab.fields.valuation import ValuationSpec
from wittlab.forms import (
    clifford_invariant,
    diag,
    is_isometric,
    is_isotropic,
    orth_sum,
    pfister,
    represents,
    scale,
    springer_residues,
    symbol,
    tensor,
    witt_equal,
)
from wittlab.scenarios.examples import CITE_LBC, CITE_QB, run_example1, run_example2

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n, ok, line):
    RESULTS[n] = (bool(ok), line)
    assert ok, line


def run_cli(*args):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "wittlab.cli", *args], capture_output=True, text=True, timeout=120
    )
    return proc, time.perf_counter() - start


# ---------------------------------------------------------------- 1


def test_1_conic_identities():
    k = Tower.Q().rat("b").rat("c").laurent("a")
    C = k.conic(k.gen("a"), k.gen("b"))
    a, b, c, X, Y = (C.gen(n) for n in "abcXY")
    times, zero = [], True
    identities = [
        lambda: X**2 - a * (Y + 1) ** 2 + a * (b + 1) - (-2 * a * Y),
        lambda: X**2 - a * (Y + c) ** 2 + a * (b + c**2) - (-2 * a * Y * c),
    ]
    for build in identities:
        start = time.perf_counter()
        zero &= build().is_zero()
        times.append(time.perf_counter() - start)
    # summed identity of Example 2 with c' = 1 - (b+1)c/(b+c^2)
    start = time.perf_counter()
    P = (b + 1) * (b + c**2)
    cp = 1 - (b + 1) * c / (b + c**2)
    v = (X, Y + 1, X / (b + c**2), (Y + c) / (b + c**2))
    zero &= (pfister(a, P).value(v) - (-2 * a * Y * cp)).is_zero()
    times.append(time.perf_counter() - start)
    ok = zero and max(times) < 1.0
    record(1, ok, f"conic identities exact zero: {zero}, slowest {max(times):.3f}s (< 1 s each)")


# ---------------------------------------------------------------- 2

GOLDEN_EX1 = (
    "b + 1 ≡ b + 4 mod k0(√b)^×2",
    "nu0 ∈ D_k0(√b)(⟨⟨b + 1⟩⟩)",
    "2*nu0 ∈ D_k0(√b)(⟨⟨b + 4⟩⟩)",
)


def test_2_example1_pipeline(tmp_path):
    out = tmp_path / "ex1.json"
    proc, secs = run_cli("scenario", "example1", "--k0", "Qb", "--json", str(out))
    report = json.loads(out.read_text())
    steps = {s["op"]: s["verdict"] for s in report["steps"]}
    gen = steps["iso_generic"]
    statements = {o["statement"] for s in report["steps"] for o in s["verdict"]["obligations"]}
    # every obligation emitted on the base side is one of the golden ones
    base_statements = {o["statement"] for o in steps["iso_base"]["obligations"]}
    ok = (
        proc.returncode == 0
        and secs < 10
        and gen["status"] == "Proved"
        and gen["certificate"]["lam"] == "-2*a*Y"
        and set(GOLDEN_EX1) == base_statements
        and set(GOLDEN_EX1) <= statements
        and report["final"]["status"] == f"Refuted modulo {CITE_QB}"
    )
    record(2, ok, f"example1 [Qb] in {secs:.2f}s (< 10 s), λ = {gen['certificate'].get('lam')}, "
                  f"{len(base_statements)} golden obligations, final: {report['final']['status']}")


# ---------------------------------------------------------------- 3


def test_3_example2_pipeline():
    start = time.perf_counter()
    r = run_example2()
    secs = time.perf_counter() - start
    base = r.step("iso_base").verdict
    cosets = [c["coset"] for c in base.certificate["cases"]]
    statements = {o.statement for o in r.obligations()}
    wanted = {"b + 1 ∈ k0(√b)^×2", "c^2 + b ∈ k0(√b)^×2"}
    # nothing is left open: each obligation is decided or assumed under the citation
    settled = all(
        o.status == "discharged" or (o.status == "assumed" and o.citation == CITE_LBC)
        for o in base.obligations
    )
    ok = (
        secs < 20
        and cosets == ["nu0", "t*nu0", "u*nu0", "t*u*nu0"]
        and wanted <= statements
        and settled
        and r.step("e1").verdict.is_proved
        and r.step("e2").verdict.is_proved
    )
    record(3, ok, f"example2 in {secs:.2f}s (< 20 s), cosets {cosets}, "
                  f"square obligations {sorted(wanted & statements)}, e1/e2 trivial")


# ---------------------------------------------------------------- 4


def test_4_springer_roundtrip():
    rng = random.Random(4)
    k = Tower.F(5).laurent("t")
    t = k.gen("t")
    v = ValuationSpec("t")
    failures = 0
    start = time.perf_counter()
    for _ in range(200):
        n = rng.randint(1, 6)
        f = diag(k, *[rng.randint(1, 4) * t ** rng.randint(-3, 3) for _ in range(n)])
        pair = springer_residues(f, v)
        parts = [w.anisotropic_kernel.coerce(k) for w in (pair.first,) if not w.is_zero]
        if not pair.second.is_zero:
            parts.append(scale(t, pair.second.anisotropic_kernel.coerce(k)))
        rebuilt = parts[0] if parts else diag(k, 1, -1)
        for p in parts[1:]:
            rebuilt = orth_sum(rebuilt, p)
        if not witt_equal(rebuilt, f).is_proved:
            failures += 1
    secs = time.perf_counter() - start
    record(4, failures == 0 and secs < 5, f"Springer roundtrip: 200 forms, {failures} failures, {secs:.2f}s (< 5 s)")


# ---------------------------------------------------------------- 5


def test_5_pfister_roundness():
    checked = failures = 0
    for p in (5, 7, 11):
        F = Tower.F(p)
        for x, y in product(range(1, p), repeat=2):
            pi = pfister(F.element(x), F.element(y))
            for lam in range(1, p):
                if not represents(pi, lam).is_proved:
                    continue
                checked += 1
                if not is_isometric(scale(F.element(lam), pi), pi).is_proved:
                    failures += 1
    record(5, failures == 0 and checked > 0, f"Pfister roundness over F5, F7, F11: {checked} pairs, {failures} failures")


# ---------------------------------------------------------------- 6

BOUND = 50


def _pair_values(c1, c2):
    """a1 x1^2 + a2 x2^2 over 0 <= xi <= BOUND: (all values, values at nonzero pairs)."""
    sq = np.arange(BOUND + 1, dtype=np.int64) ** 2
    grid = c1 * sq[:, None] + c2 * sq[None, :]
    nonzero = grid.copy().ravel()[1:]  # drop (0, 0)
    return grid.ravel(), nonzero


def bounded_search(coeffs) -> bool:
    """True if some nonzero integer vector with |xi| <= BOUND is isotropic."""
    c = list(coeffs) + [0] * (4 - len(coeffs))
    s_all, s_nz = _pair_values(c[0], c[1])
    t_all, t_nz = _pair_values(c[2], c[3])
    if len(coeffs) == 3:
        # fourth coordinate is absent: only x4 = 0 is allowed
        sq = np.arange(BOUND + 1, dtype=np.int64) ** 2
        t_all = c[2] * sq
        t_nz = t_all[1:]
    return bool(np.isin(-s_nz, t_all).any() or np.isin(-s_all, t_nz).any())


def test_6_Q_isotropy_cross_check():
    rng = random.Random(6)
    Q = Tower.Q()
    proved = refuted = failures = 0
    for _ in range(100):
        n = rng.randint(3, 4)
        coeffs = [rng.choice([x for x in range(-20, 21) if x]) for _ in range(n)]
        v = is_isotropic(diag(Q, *coeffs))
        if v.is_proved:
            proved += 1
            vec = [Q.element(x) for x in v.certificate["vector"]]
            value = sum((Q.element(c) * x * x for c, x in zip(coeffs, vec)), Q.zero())
            if not value.is_zero() or all(x.is_zero() for x in vec):
                failures += 1
        elif v.is_refuted:
            refuted += 1
            named = v.certificate.get("method") in ("real_definite", "local_obstruction") and "place" in v.certificate
            if not named or bounded_search(coeffs):
                failures += 1
        else:
            failures += 1
    record(6, failures == 0, f"Q isotropy: {proved} Proved witnesses vanish, {refuted} Refuted certified "
                             f"(search |xi| <= {BOUND}), {failures} failures")


def test_bounded_search_finds_known_vectors():
    assert bounded_search([1, 1, -2])
    assert bounded_search([3, -3, 5])
    assert not bounded_search([1, 1, 1])
    assert not bounded_search([1, 1, 1, 1])


# ---------------------------------------------------------------- 7


def _odd_trivial_disc(rng, F, p):
    m = rng.choice([1, 3, 5])
    entries = [rng.randint(1, p - 1) for _ in range(m - 1)]
    prod = 1
    for e in entries:
        prod = prod * e
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    # signed discriminant sign * prod * last with last = sign * prod is a square
    entries.append(sign * prod)
    return diag(F, *entries)


def _scaling_law_holds(F, a, lam, phi):
    psi = tensor(pfister(a), phi)
    diff = clifford_invariant(scale(lam, psi)) + clifford_invariant(psi) + symbol(lam, a)
    return diff.is_trivial().is_proved


def test_7_clifford_scaling_law():
    rng = random.Random(7)
    holds = 0
    for _ in range(100):
        p = rng.choice([5, 7, 11, 13])
        F = Tower.F(p)
        a, lam = F.element(rng.randint(1, p - 1)), F.element(rng.randint(1, p - 1))
        holds += _scaling_law_holds(F, a, lam, _odd_trivial_disc(rng, F, p))
    # Br(F_p) = 0 makes the finite-field check vacuous; repeat over Q,
    # where the symbol (lam, a) is often nontrivial
    Q = Tower.Q()
    holds_q = nontrivial = 0
    for _ in range(100):
        a = Q.element(rng.choice([x for x in range(-15, 16) if x]))
        lam = Q.element(rng.choice([x for x in range(-15, 16) if x]))
        m = rng.choice([1, 3])
        entries = [rng.choice([x for x in range(-9, 10) if x]) for _ in range(m - 1)]
        prod = 1
        for e in entries:
            prod *= e
        entries.append((-1 if m == 3 else 1) * prod)
        holds_q += _scaling_law_holds(Q, a, lam, diag(Q, *entries))
        nontrivial += symbol(lam, a).is_trivial().is_refuted
    ok = holds == 100 and holds_q == 100 and nontrivial > 0
    record(7, ok, f"Clifford scaling law: {holds}/100 over F_p, {holds_q}/100 over Q "
                  f"({nontrivial} with (λ, a) nontrivial)")


# ---------------------------------------------------------------- 8


def test_8_control_run():
    r = run_example1(control=True)
    v = r.step("iso_base").verdict
    ok = v.is_proved and v.certificate.get("nu") == "1"
    record(8, ok, f"control run (φ′ = φ): iso_base {v.status}, ν = {v.certificate.get('nu')}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
