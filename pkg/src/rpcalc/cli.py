"""Command-line interface.

Exit codes are uniform across subcommands: 0 success or positive result,
1 negative result (unsatisfiable, invalid, failed check), 2 usage or
parse error, 3 budget exceeded.  Outputs carry no timestamps; identical
invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, families, gprover, machines, proofs, prover, semantics, syntax, tableau
from .constants import C_ALPHA, D_LINES, E_LINE_FACTOR, K_E
from .formulas import Not, Sequent, is_quantifier_free

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")


def _parse_entries(path: str):
    text = _read(path)
    entries = syntax.iter_entries(text)
    if not entries:
        raise CliError(f"{path}: no formula or sequent found")
    out = []
    for lineno, line in entries:
        try:
            out.append(syntax.parse_entry(line))
        except syntax.ParseError as exc:
            raise CliError(f"{path}:{lineno}: {exc}")
    return out


def _single_formula(path: str):
    entries = _parse_entries(path)
    if len(entries) != 1 or isinstance(entries[0], Sequent):
        raise CliError(f"{path}: expected exactly one formula")
    return entries[0]


def _single_sequent(path: str) -> Sequent:
    entries = _parse_entries(path)
    if len(entries) != 1 or not isinstance(entries[0], Sequent):
        raise CliError(f"{path}: expected exactly one sequent")
    return entries[0]


def _load_structure(path: str) -> semantics.Structure:
    try:
        data = json.loads(_read(path))
        return semantics.Structure.from_json(data)
    except (json.JSONDecodeError, ValueError) as exc:
        raise CliError(f"{path}: bad structure file: {exc}")


def _load_machine(path: str) -> machines.MachineSpec:
    try:
        return machines.load_machine(_read(path))
    except machines.MachineError as exc:
        raise CliError(f"{path}: {exc}")


def cmd_parse(args) -> int:
    for entry in _parse_entries(args.file):
        print(syntax.format_entry(entry))
    return EXIT_OK


def cmd_eval(args) -> int:
    formula = _single_formula(args.file)
    structure = _load_structure(args.structure)
    try:
        print(semantics.eval_formula(formula, structure))
    except semantics.UnassignedAtomError as exc:
        raise CliError(str(exc))
    return EXIT_OK


def cmd_sat(args) -> int:
    formula = _single_formula(args.file)
    if not is_quantifier_free(formula):
        raise CliError("sat expects a quantifier-free formula (use sat-pi1)")
    witness = semantics.sat_pc(formula)
    if witness is None:
        print("UNSAT")
        return EXIT_NEGATIVE
    print("SAT")
    print(witness.dumps())
    return EXIT_OK


def cmd_valid(args) -> int:
    entries = _parse_entries(args.file)
    if len(entries) != 1:
        raise CliError(f"{args.file}: expected exactly one formula or sequent")
    entry = entries[0]
    if isinstance(entry, Sequent):
        formula = semantics.validity_formula(entry)
    else:
        formula = entry
    if not is_quantifier_free(formula):
        raise CliError("valid expects quantifier-free input")
    witness = semantics.sat_pc(Not(formula))
    if witness is None:
        print("VALID")
        return EXIT_OK
    print("INVALID")
    print(witness.dumps())
    return EXIT_NEGATIVE


def cmd_sat_pi1(args) -> int:
    formula = _single_formula(args.file)
    limits = semantics.SolverLimits(
        max_universal_vars=args.max_universal,
        max_oracle_strings=args.max_strings,
        max_structures=args.max_structures,
    )
    try:
        result = semantics.sat_pi1(formula, limits)
    except semantics.UnsupportedShapeError as exc:
        raise CliError(str(exc))
    if result.status == semantics.BUDGET_EXCEEDED:
        print(f"BUDGET_EXCEEDED {result.reason}")
        return EXIT_BUDGET
    if result.status == semantics.UNSAT:
        print("UNSAT")
        return EXIT_NEGATIVE
    print("SAT")
    print(result.witness.dumps())
    return EXIT_OK


def _emit_proof(proof, stats, out_path, stats_path) -> None:
    payload = proofs.dump_proof(proof)
    if out_path:
        _write(out_path, payload + "\n")
    else:
        print(payload)
    stats_payload = json.dumps(stats.to_json(), indent=2, sort_keys=True)
    if stats_path:
        _write(stats_path, stats_payload + "\n")
    else:
        print(stats_payload)


def cmd_prove(args) -> int:
    sequent = _single_sequent(args.file)
    try:
        result = prover.prove(sequent)
    except ValueError as exc:
        raise CliError(str(exc))
    if not result.valid:
        print("INVALID")
        print(result.counterexample.dumps())
        return EXIT_NEGATIVE
    _emit_proof(result.proof, result.stats, args.out, args.stats)
    return EXIT_OK


def cmd_gprove(args) -> int:
    sequent = _single_sequent(args.file)
    result = gprover.gprove(sequent)
    if result.status == gprover.UNKNOWN:
        raise CliError(result.reason)
    if result.status == gprover.NOT_VALID:
        print("INVALID")
        print(result.counterexample.dumps())
        return EXIT_NEGATIVE
    _emit_proof(result.proof, result.stats, args.out, args.stats)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        proof = proofs.load_proof(_read(args.file))
    except proofs.ProofFormatError as exc:
        raise CliError(f"{args.file}: {exc}")
    errors = proofs.check_g(proof) if args.quantified else proofs.check_pk(proof)
    if errors:
        for err in errors:
            print(str(err))
        return EXIT_NEGATIVE
    print("OK")
    return EXIT_OK


def cmd_compile_tm(args) -> int:
    machine = _load_machine(args.machine)
    try:
        formula, info = tableau.compile_with_info(machine, args.input, args.time_exp)
    except (tableau.EncodingError, machines.MachineError) as exc:
        raise CliError(str(exc))
    text = syntax.format_formula(formula) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    summary = {
        "input": args.input,
        "time_exp": info.params.t,
        "cell_bits": info.params.m,
        "offset_bits": info.params.w_bits,
        "oracle_arity": info.params.arity,
        "universal_vars": len(info.universal_vars),
        "length": syntax.length(formula),
    }
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    machine = _load_machine(args.machine)
    try:
        run = machines.simulate(machine, args.input, args.max_steps)
    except machines.MachineError as exc:
        raise CliError(str(exc))
    if run is None:
        print("none")
        return EXIT_NEGATIVE
    for i, config in enumerate(run.configs):
        choice = run.choices[i] if i < len(run.choices) else "-"
        print(f"{i}\t{config.state}\t{config.head}\t{''.join(config.tape)}\t{choice}")
    return EXIT_OK


def cmd_family(args) -> int:
    if args.name not in families.FAMILIES:
        raise CliError(f"unknown family {args.name!r} (available: {', '.join(sorted(families.FAMILIES))})")
    try:
        formula = families.FAMILIES[args.name](args.n)
    except ValueError as exc:
        raise CliError(str(exc))
    text = syntax.format_formula(formula) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_bench_size(args) -> int:
    machine = _load_machine(args.machine)
    try:
        lengths = [int(s) for s in args.inputs.split(",") if s]
    except ValueError:
        raise CliError(f"bad --inputs list {args.inputs!r}")
    if not lengths:
        raise CliError("--inputs must list at least one length")
    print("n\tlength\tratio")
    previous = None
    for n in lengths:
        x = "1" + "0" * (n - 1) if n else ""
        formula = tableau.compile_machine(machine, x, n if n else 1)
        size = syntax.length(formula)
        ratio = f"{size / previous:.3f}" if previous else "-"
        print(f"{n}\t{size}\t{ratio}")
        previous = size
    return EXIT_OK


def _version_text() -> str:
    lines = [f"rpcalc {__version__}"]
    lines.append(f"prover line bound d = {D_LINES} (counted lines <= d * 2^cost)")
    lines.append(f"prover line length factor e = {E_LINE_FACTOR}")
    for name in sorted(K_E):
        lines.append(f"scheme {name} counted size = {K_E[name]}")
    lines.append(f"decoder gate factor c_alpha = {C_ALPHA}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpcalc",
        description="Oracle-relativized propositional calculus toolkit",
    )
    parser.add_argument("--version", action="version", version=_version_text())
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="reserved for parallel evaluation; the current implementation is sequential",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo the canonical form of formulas/sequents")
    p.add_argument("file")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a formula in a structure")
    p.add_argument("file")
    p.add_argument("--structure", required=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sat", help="satisfiability of a quantifier-free formula")
    p.add_argument("file")
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("valid", help="validity of a quantifier-free formula or sequent")
    p.add_argument("file")
    p.set_defaults(fn=cmd_valid)

    p = sub.add_parser("sat-pi1", help="expansion solver for universally quantified formulas")
    p.add_argument("file")
    p.add_argument("--max-universal", type=int, default=22)
    p.add_argument("--max-strings", type=int, default=4096)
    p.add_argument("--max-structures", type=int, default=1 << 20)
    p.set_defaults(fn=cmd_sat_pi1)

    p = sub.add_parser("prove", help="prove a valid quantifier-free sequent")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--stats")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("gprove", help="prove a valid quantified sequent")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--stats")
    p.set_defaults(fn=cmd_gprove)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("file")
    p.add_argument("--quantified", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("compile-tm", help="compile machine acceptance to a formula")
    p.add_argument("machine")
    p.add_argument("--input", required=True)
    p.add_argument("--time-exp", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compile_tm)

    p = sub.add_parser("simulate", help="breadth-first search for an accepting run")
    p.add_argument("machine")
    p.add_argument("--input", required=True)
    p.add_argument("--max-steps", type=int, required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("family", help="emit a benchmark formula family member")
    p.add_argument("name")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("bench-size", help="table of compiled formula length vs input length")
    p.add_argument("machine")
    p.add_argument("--inputs", required=True)
    p.set_defaults(fn=cmd_bench_size)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
