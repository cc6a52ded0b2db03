#!/usr/bin/env python3
"""Compiled formula length versus input length for a machine.

Usage: python scripts/size_growth.py data/machines/first1.json --inputs 4,8,16,32,64
"""

import argparse
import pathlib
import sys

from rpcalc.machines import load_machine
from rpcalc.syntax import length
from rpcalc.tableau import compile_with_info


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("machine")
    parser.add_argument("--inputs", default="4,8,16,32")
    args = parser.parse_args()

    machine = load_machine(pathlib.Path(args.machine).read_text())
    print(f"{'n':>6} {'length':>10} {'ratio':>7} {'vars':>6} {'arity':>6}")
    previous = None
    for n in (int(s) for s in args.inputs.split(",") if s):
        x = "1" + "0" * (n - 1) if n else ""
        formula, info = compile_with_info(machine, x, max(1, n))
        size = length(formula)
        ratio = f"{size / previous:.3f}" if previous else "-"
        print(f"{n:>6} {size:>10} {ratio:>7} {len(info.universal_vars):>6} {info.params.arity:>6}")
        previous = size
    return 0


if __name__ == "__main__":
    sys.exit(main())
