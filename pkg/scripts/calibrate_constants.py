#!/usr/bin/env python3
"""Measure the calibrated constants over randomized suites.

Prints the observed maxima behind the published values in
rpcalc.constants: the proof-line factor d, the line-length factor e,
the per-scheme counted sizes, and the decoder gate factor.

Usage: python scripts/calibrate_constants.py [--seed N] [--sequents N]
"""

import argparse
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

from genlib import generate_valid_sequents, random_flat_formula  # noqa: E402

from rpcalc.circuits import decoder_circuit  # noqa: E402
from rpcalc.constants import C_ALPHA, D_LINES, E_LINE_FACTOR, K_E  # noqa: E402
from rpcalc.formulas import cost_sequent  # noqa: E402
from rpcalc.proofs import check_pk, counted_size, derive_scheme  # noqa: E402
from rpcalc.prover import prove  # noqa: E402
from rpcalc.syntax import sequent_length  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--sequents", type=int, default=150)
    args = parser.parse_args()

    suite = generate_valid_sequents(seed=args.seed, count=args.sequents, max_cost=10)
    worst_d = 0.0
    worst_e = 0.0
    for s in suite:
        r = prove(s)
        assert r.valid and check_pk(r.proof) == []
        c = cost_sequent(s)
        worst_d = max(worst_d, r.stats.counted_sequents / (1 << c))
        worst_e = max(worst_e, r.stats.max_line / sequent_length(s))
    print(f"proof lines / 2^cost : observed max {worst_d:.3f}  published d = {D_LINES}")
    print(f"line length / |S|    : observed max {worst_e:.3f}  published e = {E_LINE_FACTOR}")

    rng = random.Random(args.seed)
    for which in ("E1", "E2", "E3", "E4"):
        sizes = {
            counted_size(derive_scheme(which, random_flat_formula(rng, depth=d)))
            for d in (0, 1, 2, 3, 4)
        }
        assert sizes == {K_E[which]}
        print(f"scheme {which} counted size : {sizes.pop()}  published {K_E[which]}")

    worst_alpha = max(decoder_circuit(n).gate_count / n for n in range(1, 1025))
    print(f"decoder gates / n    : observed max {worst_alpha:.3f}  published c_alpha = {C_ALPHA}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
