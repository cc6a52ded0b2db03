import pytest

from genlib import (
    first_symbol_one_machine,
    guess_branch_machine,
    immediate_accept_machine,
    reject_all_machine,
)
from rpcalc.formulas import RApp, walk
from rpcalc.machines import normalize_machine, simulate
from rpcalc.semantics import (
    SAT,
    UNSAT,
    SolverLimits,
    Structure,
    holds_universally,
    pull_universals,
    sat_pi1,
)
from rpcalc.syntax import length
from rpcalc.tableau import (
    EncodingError,
    EncodingParams,
    build_E,
    build_I,
    build_S,
    compile_machine,
    compile_with_info,
    default_params,
    index_string,
    verify_witness,
    witness_structure,
)
from rpcalc import classify

LIMITS = SolverLimits(max_universal_vars=64, max_oracle_strings=1 << 16, max_structures=1 << 22)


@pytest.fixture(scope="module")
def first1():
    return first_symbol_one_machine()


@pytest.fixture(scope="module")
def norm_first1(first1):
    return normalize_machine(first1)


@pytest.fixture(scope="module")
def compiled_10(first1):
    return compile_with_info(first1, "10", 2)


def test_params_invariants(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    assert enc.m >= enc.t + 1
    assert (1 << enc.m) >= enc.n + 2
    assert enc.k == 2
    assert enc.w >= 6
    with pytest.raises(EncodingError):
        EncodingParams(n=2, t=2, m=2, w_bits=3, k=2)
    with pytest.raises(EncodingError):
        EncodingParams(n=2, t=2, m=3, w_bits=3, k=1)


def test_classification_and_arity(compiled_10):
    formula, info = compiled_10
    assert classify(formula) == "pi1"
    arities = {len(g.args) for g in walk(formula) if isinstance(g, RApp)}
    assert arities == {info.params.arity}


def test_no_stray_universal_variables(compiled_10):
    formula, info = compiled_10
    uvars, _ = pull_universals(formula)
    assert len(uvars) == len(info.universal_vars)
    grouped = set()
    for key, names in info.var_groups.items():
        assert key.startswith(("start_", "step_"))
        grouped |= set(names)
    # every universal variable is a cell-index bit, a time bit, or a
    # circuit gate/output variable of one of the named groups
    flat = [v for g in sorted(info.var_groups) for v in info.var_groups[g]]
    assert sorted(flat) == sorted(grouped)
    assert len(grouped) == len(info.universal_vars)


def test_witness_satisfies_start_exhaustively(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    run = simulate(norm_first1, "10", 16)
    witness = witness_structure(norm_first1, "10", run, enc)
    s = build_S(norm_first1, "10", enc)
    report = verify_witness(s, witness, exhaustive_limit=22)
    assert report.mode == "exhaustive"
    assert report.ok


def test_start_length_linear(norm_first1):
    sizes = []
    for n in (4, 8, 16, 32):
        enc = default_params(norm_first1, n, n)
        sizes.append(length(build_S(norm_first1, "1" + "0" * (n - 1), enc)))
    for a, b in zip(sizes, sizes[1:]):
        assert b <= 2.2 * a, sizes


def test_marker_bit_at_origin(norm_first1):
    # cell 0, offset 0, time 0 carries the low bit of the marker's
    # symbol code, which is 1 in the canonical symbol ordering
    enc = default_params(norm_first1, 2, 2)
    run = simulate(norm_first1, "10", 16)
    witness = witness_structure(norm_first1, "10", run, enc)
    assert index_string(enc, 0, 0, 0) in witness.oracle


def test_start_rejects_flipped_input_bit(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    run = simulate(norm_first1, "10", 16)
    witness = witness_structure(norm_first1, "10", run, enc)
    # cell 1 holds input symbol '1'; its low symbol bit lives at offset 0
    key = index_string(enc, 1, 0, 0)
    assert key in witness.oracle
    mutated = Structure({}, witness.oracle - {key})
    report = verify_witness(build_S(norm_first1, "10", enc), mutated, exhaustive_limit=22)
    assert report.violations > 0


def test_witness_satisfies_step_and_mutation_breaks_it(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    run = simulate(norm_first1, "10", 16)
    witness = witness_structure(norm_first1, "10", run, enc)
    step = build_I(norm_first1, enc)
    assert holds_universally(step, witness, LIMITS)
    # the machine is in state q1 over cell 1 at time 1: drop that head flag
    layout_has_offset = 2  # s_bits = 2 for the four-symbol alphabet
    key = index_string(enc, 1, layout_has_offset, 1)
    assert key in witness.oracle
    mutated = Structure({}, witness.oracle - {key})
    assert not holds_universally(step, mutated, LIMITS)


def test_step_atoms_share_one_arity(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    step = build_I(norm_first1, enc)
    arities = {len(g.args) for g in walk(step) if isinstance(g, RApp)}
    assert arities == {enc.arity}


def test_end_constant_size_and_requires_normalization(first1, norm_first1):
    from rpcalc.formulas import Const

    enc = default_params(norm_first1, 2, 2)
    end = build_E(norm_first1, enc)
    assert classify(end) == "quantifier_free"
    # all oracle arguments are constants: the formula names one fixed cell
    assert all(
        isinstance(a, Const) for g in walk(end) if isinstance(g, RApp) for a in g.args
    )
    with pytest.raises(EncodingError):
        build_E(first1, enc)
    # length scales only with the index width: bounded by C_E * (m + t)
    for n in (2, 8, 16):
        enc_n = default_params(norm_first1, n, n)
        assert length(build_E(norm_first1, enc_n)) <= 40 * (enc_n.m + enc_n.t)


def test_end_accept_vs_reject(norm_first1):
    enc = default_params(norm_first1, 2, 2)
    end = build_E(norm_first1, enc)
    accept_run = simulate(norm_first1, "10", 16)
    good = witness_structure(norm_first1, "10", accept_run, enc)
    report = verify_witness(end, good, exhaustive_limit=22)
    assert report.ok
    # a rejecting computation never parks the final state at cell 0
    from rpcalc.machines import Run, initial_config

    stuck = initial_config(norm_first1, "00")
    bad = witness_structure(norm_first1, "00", Run((stuck,), ()), enc)
    report = verify_witness(end, bad, exhaustive_limit=22)
    assert not report.ok


def test_witness_satisfies_full_matrix(compiled_10, norm_first1):
    formula, info = compiled_10
    run = simulate(norm_first1, "10", 16)
    witness = witness_structure(norm_first1, "10", run, info.params)
    report = verify_witness(formula, witness, exhaustive_limit=22, samples=120_000, seed=3)
    assert report.mode == "sampled"
    assert report.ok


def test_sat_pi1_cross_validation(first1):
    assert sat_pi1(compile_machine(first1, "00", 1), LIMITS).status == UNSAT
    result = sat_pi1(compile_machine(first1, "10", 2), LIMITS)
    assert result.status == SAT


def test_reject_machine_unsat():
    assert sat_pi1(compile_machine(reject_all_machine(), "1", 1), LIMITS).status == UNSAT


def test_immediate_accept_empty_input():
    machine = immediate_accept_machine()
    norm = normalize_machine(machine)
    formula, info = compile_with_info(machine, "", 1)
    run = simulate(norm, "", 4)
    witness = witness_structure(norm, "", run, info.params)
    assert holds_universally(formula, witness, LIMITS)
    assert sat_pi1(formula, LIMITS).status == SAT


def test_nondeterministic_machine_end_to_end():
    machine = guess_branch_machine()
    norm = normalize_machine(machine)
    assert norm.branching == 2
    formula, info = compile_with_info(machine, "1", 2)
    run = simulate(norm, "1", 8)
    witness = witness_structure(norm, "1", run, info.params)
    report = verify_witness(formula, witness, exhaustive_limit=22, samples=120_000, seed=4)
    assert report.ok
    # input '0' forces the solver to abandon the first guess and take
    # the second branch
    assert sat_pi1(compile_machine(machine, "0", 2), LIMITS).status == SAT


def test_three_way_branching():
    # two choice bits can encode a fourth, out-of-range value; such cells
    # match no transition and never appear in satisfying tableaus
    from rpcalc.machines import MachineSpec, Transition

    m3 = MachineSpec(
        states=("q0", "qa", "qb", "qc", "qacc"),
        tape_alphabet=("_", ">", "0", "1"),
        start_state="q0",
        accept_states=frozenset({"qacc"}),
        transitions=(
            Transition("q0", ">", "qa", ">", "R"),
            Transition("q0", ">", "qb", ">", "R"),
            Transition("q0", ">", "qc", ">", "R"),
            Transition("qb", "1", "qacc", "1", "L"),
        ),
    )
    norm = normalize_machine(m3)
    assert norm.branching == 3
    run = simulate(norm, "1", 8)
    assert run.choices[0] == 1  # only the middle branch accepts
    formula, info = compile_with_info(m3, "1", 2)
    witness = witness_structure(norm, "1", run, info.params)
    assert holds_universally(formula, witness, LIMITS)
    assert sat_pi1(formula, LIMITS).status == SAT
    assert sat_pi1(compile_machine(m3, "0", 2), LIMITS).status == UNSAT


def test_linearity(first1):
    sizes = []
    for n in (4, 8, 16, 32):
        x = "1" + "0" * (n - 1)
        sizes.append(length(compile_machine(first1, x, n)))
    for a, b in zip(sizes, sizes[1:]):
        assert b <= 2.2 * a


def test_witness_run_too_long(norm_first1):
    enc = default_params(norm_first1, 2, 1)
    run = simulate(norm_first1, "10", 16)
    with pytest.raises(EncodingError):
        witness_structure(norm_first1, "10", run, enc)
