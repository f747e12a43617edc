"""Replay every scenario variant and print a one-line status for each.

    python3 scripts/run_examples.py                 # summaries only
    python3 scripts/run_examples.py --out reports   # also write JSON reports
    python3 scripts/run_examples.py --verbose       # full step listing
"""
import argparse
import sys
from pathlib import Path

from wittlab.scenarios.examples import run_example1, run_example2

VARIANTS = {
    "example1-Qb": lambda: run_example1("Qb"),
    "example1-lbc": lambda: run_example1("lbc"),
    "example1-control": lambda: run_example1(control=True),
    "example2-lbc": lambda: run_example2("lbc"),
    "example2-Qb": lambda: run_example2("Qb"),
}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--out", type=Path, help="directory for <variant>.json reports")
    p.add_argument("--verbose", action="store_true", help="print every step and obligation")
    p.add_argument("variants", nargs="*", help=f"subset of {', '.join(VARIANTS)} (default: all)")
    ns = p.parse_args(argv)
    unknown = [v for v in ns.variants if v not in VARIANTS]
    if unknown:
        p.error(f"unknown variant(s): {', '.join(unknown)}")
    names = ns.variants or list(VARIANTS)
    if ns.out:
        ns.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in names:
        report = VARIANTS[name]()
        print(f"{name:18s} {report.seconds:6.2f}s  exit={report.exit_code}  {report.status}")
        if ns.verbose:
            print(report.summary())
        if ns.out:
            (ns.out / f"{name}.json").write_text(report.dumps() + "\n", encoding="utf-8")
        worst = max(worst, report.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
