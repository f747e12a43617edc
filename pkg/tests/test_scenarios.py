"""Parser, case enumeration, the replayed examples and the CLI."""
import json

import pytest
from hypothesis import given, settings, strategies as st

from wittlab.cli import main
from wittlab.errors import ParseError, ZeroElement
from wittlab.fields.tower import Tower, parse_tower
from wittlab.forms import diag, orth_sum, pfister, scale
from wittlab.hermitian import GenericSum, SkewHermitianForm
from wittlab.scenarios import WittRelation, enumerate_cases, parse, parse_form, parse_involution, to_text
from wittlab.scenarios.cases import UNKNOWN, parameter_tower
from wittlab.scenarios.examples import CITE_LBC, CITE_QB, run_example1, run_example2

EX1 = "Q.rat(b).laurent(a).laurent(t)"
F = parse_tower(EX1)


# ---------------------------------------------------------------- parser


@pytest.mark.parametrize(
    "text, expected",
    [
        ("<<b+1>> + t*<<b+4>>", "pf(b + 1) + t*pf(b + 4)"),
        ("pf(a, b)", "pf(a, b)"),
        ("-t*<1>", "<-t>"),
        ("(b+1)^2/(b+1)", "b + 1"),
        ("herm(quat(a, b), <i*1, i*t>)", "herm(quat(a, b), <i*1, i*t>)"),
    ],
)
def test_parse_examples(text, expected):
    assert to_text(parse(text, F)) == expected


def test_parse_example1_form():
    G = parse_tower("Q.rat(b).rat(c).laurent(a).laurent(t)")
    a, b, c, t = (G.gen(n) for n in "abct")
    f = parse("pf(a,b+1) + t*pf(a,b+c^2)", G)
    assert f == orth_sum(pfister(a, b + 1), scale(t, pfister(a, b + c**2)))
    assert to_text(parse("<1>", G)) == "<1>"
    with pytest.raises(SyntaxError):
        parse("pf()", G)


def test_parse_tensor_distributes():
    f = parse("<1, -b> x <<a>>", F)
    assert f == orth_sum(pfister(F.gen("a")), scale(-F.gen("b"), pfister(F.gen("a"))))


def test_parse_involution_and_generic_sum():
    s = parse_involution("inv(quat(a,b), rho=a, phi=<<b+1>> + t*<<b+4>>)", F)
    assert s.degree == 8 and s.rho_disc == F.gen("a")
    g = parse("gsum(herm(quat(a,b),<i*1>), herm(quat(a,b),<i*b>), u)", F)
    assert isinstance(g, GenericSum)
    assert str(g.presentation().phi) == "<1, b*u>"


@pytest.mark.parametrize("bad", ["<<b", "pf()", "<1> +", "inv(quat(a,b), rho=a)", "<1, z>"])
def test_parse_rejects(bad):
    with pytest.raises(Exception) as info:
        parse(bad, F)
    assert info.type is not AssertionError


def test_parse_rejects_zero_entry():
    with pytest.raises(ZeroElement):
        parse_form("<1, 0>", F)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_form("<<b", F)
    assert info.value.pos == 3 and info.value.text == "<<b"


coeffs = st.sampled_from(["1", "-1", "2", "b", "b + 1", "-b", "b^2 + 4", "a", "t", "a*t", "(b + 1)/b"])
slots = st.lists(st.sampled_from(["a", "b", "b + 1", "-1", "t", "b^2 + 4"]), min_size=0, max_size=2)


@st.composite
def form_texts(draw):
    parts = []
    for _ in range(draw(st.integers(1, 3))):
        c = draw(coeffs)
        s = draw(slots)
        if s:
            parts.append(f"({c})*pf({', '.join(s)})")
        else:
            entries = [draw(coeffs) for _ in range(draw(st.integers(1, 3)))]
            parts.append("<" + ", ".join(entries) + ">")
    return " + ".join(parts)


@settings(max_examples=100)
@given(form_texts())
def test_printing_roundtrips(text):
    f = parse(text, F)
    printed = to_text(f)
    again = parse(printed, F)
    assert again == f
    assert to_text(again) == printed


@settings(max_examples=30)
@given(st.lists(coeffs, min_size=1, max_size=3))
def test_herm_printing_roundtrips(cs):
    h = parse(f"herm(quat(a, b), <{', '.join('i*(' + c + ')' for c in cs)}>)", F)
    assert isinstance(h, SkewHermitianForm)
    assert parse(to_text(h), F) == h


# ---------------------------------------------------------------- cases


def test_enumerate_cases_without_unknown_is_single_case():
    k = Tower.Q().rat("b").laurent("a")
    rel = WittRelation(pfister(k.gen("b") + 1, k.gen("a")), None, (k.gen("a"), k.gen("b")))
    cases = enumerate_cases(rel)
    assert len(cases) == 1 and cases[0].coset == "-" and cases[0].nu is None


def test_enumerate_cases_four_cosets_with_absorption():
    k = Tower.Q().rat("b").laurent("a").laurent("t").laurent("u")
    a, b = k.gen("a"), k.gen("b")
    f = orth_sum(pfister(a, b + 1), scale(k.gen("t"), pfister(a, b + 4)))
    rel = WittRelation(f, f, (a, b), absorb="a")
    cases = enumerate_cases(rel)
    assert [c.coset for c in cases] == ["nu0", "t*nu0", "u*nu0", "t*u*nu0"]
    assert all(len(c.covers) == 2 for c in cases)


def test_enumerate_cases_without_absorption_doubles():
    k = Tower.Q().rat("b").laurent("a").laurent("t")
    a, b = k.gen("a"), k.gen("b")
    rel = WittRelation(diag(k, 1, -1), diag(k, 1, -1), (a, b))
    assert len(enumerate_cases(rel)) == 4


def test_parameter_tower_inserts_unknown_below_laurent():
    pt, i = parameter_tower(F)
    assert i == 1
    assert str(pt).startswith("Q.rat(b).rat(" + UNKNOWN)
    assert UNKNOWN in pt.param_vars


# ---------------------------------------------------------------- examples


@pytest.fixture(scope="module")
def report1():
    return run_example1("Qb")


@pytest.fixture(scope="module")
def report2():
    return run_example2()


def test_example1_steps(report1):
    assert [s.op for s in report1.steps] == ["conic_identity_1", "conic_identity_c", "iso_generic", "iso_base"]
    for op in ("conic_identity_1", "conic_identity_c", "iso_generic"):
        assert report1.step(op).verdict.is_proved
    assert report1.step("iso_generic").verdict.certificate["lam"] == "-2*a*Y"
    assert report1.step("iso_base").verdict.is_refuted


def test_example1_obligations(report1):
    statements = {o.statement for o in report1.obligations()}
    assert "b + 1 ≡ b + 4 mod k0(√b)^×2" in statements
    assert "nu0 ∈ D_k0(√b)(⟨⟨b + 1⟩⟩)" in statements
    assert "2*nu0 ∈ D_k0(√b)(⟨⟨b + 4⟩⟩)" in statements
    assumed = [o for o in report1.obligations() if o.status == "assumed"]
    assert assumed and all(o.citation == CITE_QB and o.holds is None for o in assumed)
    assert report1.final["status"] == f"Refuted modulo {CITE_QB}"


def test_example1_control():
    r = run_example1(control=True)
    v = r.step("iso_base").verdict
    assert v.is_proved and v.certificate["nu"] == "1"
    assert r.exit_code == 0 and r.final["status"] == "Proved"


def test_example1_over_lbc():
    r = run_example1("lbc")
    assert r.step("iso_generic").verdict.is_proved
    assert r.final["status"] == f"Refuted modulo {CITE_LBC}"


def test_example2_steps(report2):
    assert [s.op for s in report2.steps] == [
        "c_prime_nonzero", "summed_identity", "iso_generic", "iso_base", "e1", "e2",
    ]
    for op in ("c_prime_nonzero", "summed_identity", "iso_generic", "e1", "e2"):
        assert report2.step(op).verdict.is_proved, op
    cases = report2.step("iso_base").verdict.certificate["cases"]
    assert [c["case"]["coset"] if "case" in c else c["coset"] for c in cases] == [
        "nu0", "t*nu0", "u*nu0", "t*u*nu0",
    ]


def test_example2_obligations(report2):
    statements = {o.statement for o in report2.obligations()}
    assert "b + 1 ∈ k0(√b)^×2" in statements
    assert "c^2 + b ∈ k0(√b)^×2" in statements
    assert report2.final["status"] == f"Refuted modulo {CITE_LBC}"


def test_reports_are_deterministic(report1):
    again = run_example1("Qb")
    assert again.dumps() == report1.dumps()
    payload = json.loads(report1.dumps())
    assert set(payload) == {"scenario", "field", "inputs", "assumptions", "steps", "final"}
    assert set(payload["final"]) == {"generic", "claim", "status"}
    assert "seconds" not in report1.dumps()


# ---------------------------------------------------------------- cli


def test_cli_eval(capsys, tmp_path):
    out = tmp_path / "e.json"
    assert main(["eval", "--field", EX1, "(b^2-1)/(b-1)", "--json", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "b + 1"
    assert json.loads(out.read_text())["value"] == "b + 1"


def test_cli_check_proved_and_refuted(capsys):
    assert main(["check", "--op", "is_isotropic", "--field", "Q", "--args", "<1, -1>"]) == 0
    assert '"Proved"' in capsys.readouterr().out
    assert main(["check", "--op", "is_isotropic", "--field", "Q", "--args", "<1, 1, 1>"]) == 0
    assert '"Refuted"' in capsys.readouterr().out


def test_cli_check_negative_argument(capsys):
    assert main(["check", "--op", "represents", "--field", "Q", "--args", "<1, 1>", "-1"]) == 0
    assert '"Refuted"' in capsys.readouterr().out


def test_cli_errors_exit_one(capsys):
    assert main(["eval", "--field", "Q.rat(b)", "z + 1"]) == 1
    assert main(["check", "--op", "is_isotropic", "--field", "Q", "--args", "<1", ]) == 1
    assert main(["check", "--op", "is_isotropic", "--field", "Q", "--args"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_scenario_json(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["scenario", "example1", "--control", "--json", str(out1)]) == 0
    assert main(["scenario", "example1", "--control", "--json", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["final"]["status"] == "Proved"


def test_cli_reduced_exit_code(capsys):
    field = "Q.rat(b).rat(c).laurent(a).laurent(t).conic(a, b)"
    args = ["-2*a*Y*c*pf(a, c^2 + b)", "c*pf(a, c^2 + b)"]
    assert main(["check", "--op", "is_isometric", "--field", field, "--args", *args]) == 2
    assert '"Reduced"' in capsys.readouterr().out


def test_cli_unsupported_tower_exits_one(capsys):
    # iso_base over a non-Laurent tower is unsupported: error, not a claim
    assert main(["check", "--op", "iso_base", "--field", "Q.rat(b)", "--args",
                 "inv(quat(2, b), rho=2, phi=<1>)", "inv(quat(2, b), rho=2, phi=<3>)"]) == 1
