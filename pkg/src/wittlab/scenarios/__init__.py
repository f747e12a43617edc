"""Parsing, case enumeration and the replayed examples."""
from importlib import import_module

from .cases import Case, WittRelation, enumerate_cases

# examples and parser import the hermitian layer, which itself needs cases;
# load them on first access to keep the import graph acyclic
_LAZY = {
    "Report": "examples", "Scenario": "examples", "run_example1": "examples", "run_example2": "examples",
    "parse": "parser", "parse_form": "parser", "parse_involution": "parser", "to_text": "parser",
}


def __getattr__(name):
    if name in _LAZY:
        return getattr(import_module(f".{_LAZY[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["Case", "WittRelation", "enumerate_cases", *_LAZY]
