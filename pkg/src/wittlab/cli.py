"""Command line interface.

    wittlab eval --field <tower> <expr>
    wittlab check --op <name> --field <tower> --args <arg> [<arg> ...]   (--args last)
    wittlab scenario example1 [--k0 Qb|lbc] [--control]
    wittlab scenario example2 [--k0 lbc|Qb]

Every command accepts --json <path>. Exit codes: 0 when every claim is
decided, 2 when Reduced obligations remain, 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import WittlabError
from .fields.tower import parse_tower
from .fields.valuation import ValuationSpec
from .forms.brauer import clifford_invariant
from .forms.oracles import (
    is_isometric,
    is_isotropic,
    represents,
    similarity_factor_check,
    witt_decompose,
    witt_equal,
)
from .forms.quadratic import discriminant
from .forms.residues import conic_kernel_membership, springer_residues
from .forms.verdict import Verdict, jsonable
from .hermitian.criteria import iso_base, iso_generic
from .hermitian.generic import generic_sum_residues
from .hermitian.involutions import e1_invariant, e2_invariant, morita_transfer
from .hermitian.quaternion import QuaternionAlgebra, is_split
from .scenarios.examples import run_example1, run_example2
from .scenarios.parser import parse, parse_form, parse_generic_sum, parse_involution, to_text


def _element(F):
    return lambda s: F.element(s)


def _conic_element(F, sigma_text):
    def conv(s):
        sigma = parse_involution(sigma_text, F)
        return sigma.algebra.conic_field().element(s)

    return conv


def _op_table(F, args):
    form = lambda s: parse_form(s, F)  # noqa: E731
    inv = lambda s: parse_involution(s, F)  # noqa: E731
    el = _element(F)
    return {
        "is_isotropic": ((form,), is_isotropic),
        "is_isometric": ((form, form), is_isometric),
        "witt_equal": ((form, form), witt_equal),
        "represents": ((form, el), represents),
        "similarity_factor_check": ((form, el), similarity_factor_check),
        "witt_decompose": ((form,), lambda f: witt_decompose(f, strict=False)),
        "discriminant": ((form,), discriminant),
        "clifford_invariant": ((form,), clifford_invariant),
        "is_split": ((el, el), lambda a, b: is_split(QuaternionAlgebra(F, a, b))),
        "conic_kernel_membership": ((form, el, el), conic_kernel_membership),
        "springer_residues": ((form, ValuationSpec), springer_residues),
        "morita_transfer": ((inv,), morita_transfer),
        "e1_invariant": ((inv,), e1_invariant),
        "e2_invariant": ((inv,), e2_invariant),
        "iso_generic": (
            (inv, inv, _conic_element(F, args[0] if args else "")),
            iso_generic,
        ),
        "iso_base": ((inv, inv), iso_base),
        "generic_sum_residues": ((lambda s: parse_generic_sum(s, F), int), generic_sum_residues),
    }


OPS = tuple(sorted(_op_table(None, []).keys()))


def _result_json(value) -> dict:
    if isinstance(value, Verdict):
        return value.to_json()
    if hasattr(value, "to_json"):
        return {"value": value.to_json(), "text": str(value)}
    return {"value": jsonable(value), "text": str(value)}


def _result_text(value) -> str:
    if isinstance(value, Verdict) or hasattr(value, "to_json"):
        return json.dumps(value.to_json(), indent=2, ensure_ascii=False)
    return to_text(value)


def _write_json(path, payload) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, ensure_ascii=False)
            fh.write("\n")


def cmd_eval(ns) -> int:
    F = parse_tower(ns.field)
    value = parse(ns.expr, F)
    text = to_text(value)
    print(text)
    _write_json(ns.json, {"field": str(F), "input": ns.expr, "kind": type(value).__name__, "value": text})
    return 0


def _split_json(args, path):
    if "--json" in args:
        i = args.index("--json")
        if i + 1 >= len(args):
            raise WittlabError("--json needs a path")
        return args[:i] + args[i + 2 :], args[i + 1]
    return args, path


def cmd_check(ns) -> int:
    ns.args, ns.json = _split_json(list(ns.args), ns.json)
    F = parse_tower(ns.field)
    table = _op_table(F, ns.args)
    if ns.op not in table:
        raise WittlabError(f"unknown op {ns.op!r}; choose from {', '.join(OPS)}")
    convs, fn = table[ns.op]
    if len(ns.args) != len(convs):
        raise WittlabError(f"{ns.op} takes {len(convs)} arguments, got {len(ns.args)}")
    value = fn(*(c(a) for c, a in zip(convs, ns.args)))
    print(_result_text(value))
    _write_json(ns.json, {"op": ns.op, "field": str(F), "args": ns.args, "result": _result_json(value)})
    if isinstance(value, Verdict) and value.is_reduced:
        return 2
    return 0


def cmd_scenario(ns) -> int:
    if ns.name == "example1":
        report = run_example1(k0=ns.k0 or "Qb", control=ns.control)
    else:
        if ns.control:
            raise WittlabError("--control applies to example1 only")
        report = run_example2(k0=ns.k0 or "lbc")
    print(report.summary())
    if ns.json:
        with open(ns.json, "w", encoding="utf-8") as fh:
            fh.write(report.dumps())
            fh.write("\n")
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wittlab", description="Quadratic forms, quaternions and involutions over field towers.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="parse and print an expression in canonical form")
    e.add_argument("--field", required=True, help="tower, e.g. 'Q.rat(b).laurent(a)'")
    e.add_argument("expr")
    e.add_argument("--json", metavar="PATH")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="run one decision procedure")
    c.add_argument("--op", required=True, choices=OPS)
    c.add_argument("--field", required=True)
    # everything after --args is taken verbatim, so values may start with '-'
    c.add_argument("--args", nargs=argparse.REMAINDER, default=[])
    c.add_argument("--json", metavar="PATH")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("scenario", help="replay a worked example")
    s.add_argument("name", choices=("example1", "example2"))
    s.add_argument("--k0", choices=("Qb", "lbc"))
    s.add_argument("--control", action="store_true", help="example1 with phi' = phi")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (WittlabError, SyntaxError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
