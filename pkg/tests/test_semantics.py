import json
import random

import pytest

from genlib import naive_sat_flat, random_flat_formula
from rpcalc.formulas import Atom, Const, Not, RApp
from rpcalc.semantics import (
    EMPTY_STRUCTURE,
    Structure,
    UnassignedAtomError,
    eval_batch,
    eval_formula,
    eval_recording,
    exhaustive_assignments,
    sat_pc,
    sequent_valid,
    valid_pc,
    valid_q_bruteforce,
)
from rpcalc.syntax import parse_formula, parse_sequent


def test_eval_validity_example_instance():
    f = parse_formula("(R(p) & R(~p)) => (R(q) | R(~q))")
    assert eval_formula(f, Structure({"p": 1, "q": 0}, frozenset())) == 1


def test_eval_constants_and_nullary_r():
    assert eval_formula(Const(1), EMPTY_STRUCTURE) == 1
    assert eval_formula(RApp(()), Structure({}, frozenset({""}))) == 1
    assert eval_formula(RApp(()), EMPTY_STRUCTURE) == 0


def test_eval_unassigned_atom():
    with pytest.raises(UnassignedAtomError) as err:
        eval_formula(Atom("p"), EMPTY_STRUCTURE)
    assert err.value.name == "p"


def test_eval_quantifiers_range_over_bits():
    assert eval_formula(parse_formula("all x. x | ~x"), EMPTY_STRUCTURE) == 1
    assert eval_formula(parse_formula("ex x. x"), EMPTY_STRUCTURE) == 1
    assert eval_formula(parse_formula("all x. x"), EMPTY_STRUCTURE) == 0
    # bound variable shadows the structure assignment
    assert eval_formula(parse_formula("all p. (p | ~p)"), Structure({"p": 1}, frozenset())) == 1


def test_eval_nested_r():
    # R(R(p)) with p=1: the inner application queries "1" and the outer
    # queries whatever bit that produced.
    f = RApp((RApp((Atom("p"),)),))
    assert eval_formula(f, Structure({"p": 1}, frozenset({"1"}))) == 1
    assert eval_formula(f, Structure({"p": 1}, frozenset())) == 0
    assert eval_formula(f, Structure({"p": 1}, frozenset({"0"}))) == 1


def test_structure_json_roundtrip():
    s = Structure({"p": 1, "q": 0}, frozenset({"010", "", "1"}))
    data = json.loads(s.dumps())
    assert data == {"atoms": {"p": 1, "q": 0}, "oracle": ["", "010", "1"]}
    assert Structure.from_json(data) == s


def test_structure_validation():
    with pytest.raises(ValueError):
        Structure({"p": 2}, frozenset())
    with pytest.raises(ValueError):
        Structure({}, frozenset({"01x"}))


def test_sat_example_with_exact_witness():
    w = sat_pc(parse_formula("R(p) & ~R(1)"))
    assert w == Structure({"p": 0}, frozenset({"0"}))


def test_sat_trivia():
    assert sat_pc(Const(0)) is None
    assert sat_pc(parse_formula("~((R(p) & R(~p)) => (R(q) | R(~q)))")) is None


def test_shared_query_strings_are_consistent():
    # Both occurrences evaluate the same string, hence one unknown.
    assert sat_pc(parse_formula("R(p & q) & ~R(q & p)")) is None
    assert sat_pc(parse_formula("R(p) & ~R(~p)")) is not None


def test_valid_pc_examples():
    assert valid_pc(parse_formula("(R(p) & R(~p)) => (R(q) | R(~q))"))
    assert not valid_pc(parse_formula("R(p)"))
    assert sequent_valid(parse_sequent("R(1) |- R(1)"))
    assert not sequent_valid(parse_sequent("|-"))


def test_witnesses_always_check():
    rng = random.Random(21)
    for _ in range(150):
        f = random_flat_formula(rng)
        w = sat_pc(f)
        if w is not None:
            assert eval_formula(f, w) == 1


def test_sat_matches_naive_enumeration():
    rng = random.Random(22)
    disagreements = 0
    for _ in range(150):
        f = random_flat_formula(rng)
        fast = sat_pc(f)
        slow = naive_sat_flat(f)
        if (fast is None) != (slow is None):
            disagreements += 1
    assert disagreements == 0


def test_sat_nested_r_against_full_enumeration():
    # Nested oracles: compare against enumerating all subsets of every
    # string of the occurring arities (1 and 2).
    import itertools

    from rpcalc.formulas import And, free_atoms

    rng = random.Random(23)
    space = [
        s for m in (1, 2) for s in ("".join(b) for b in itertools.product("01", repeat=m))
    ]
    for _ in range(30):
        inner = random_flat_formula(rng, max_r=0, depth=1)
        f = RApp((inner, Const(rng.randint(0, 1))))
        if rng.random() < 0.5:
            f = Not(f)
        formula = RApp((f,))  # arity-1 query fed by an arity-2 query
        if rng.random() < 0.5:
            formula = And(formula, f)
        atoms = sorted(free_atoms(formula))
        slow_sat = False
        for bits in itertools.product((0, 1), repeat=len(atoms)):
            env = dict(zip(atoms, bits))
            for mask in range(1 << len(space)):
                oracle = frozenset(s for j, s in enumerate(space) if mask >> j & 1)
                if eval_formula(formula, Structure(env, oracle)) == 1:
                    slow_sat = True
                    break
            if slow_sat:
                break
        fast = sat_pc(formula)
        assert (fast is not None) == slow_sat
        if fast is not None:
            assert eval_formula(formula, fast) == 1


def test_eval_depends_only_on_queried_strings():
    rng = random.Random(24)
    for _ in range(100):
        f = random_flat_formula(rng)
        atoms = {name: rng.randint(0, 1) for name in sorted({a.name for a in _atoms(f)})}
        oracle = frozenset(
            "".join(rng.choice("01") for _ in range(rng.randint(0, 3))) for _ in range(3)
        )
        base = Structure(atoms, oracle)
        value, queried = eval_recording(f, base)
        for _ in range(5):
            extra = "".join(rng.choice("01") for _ in range(rng.randint(0, 4)))
            if extra in queried:
                continue
            fuzzed = Structure(atoms, oracle | {extra})
            assert eval_formula(f, fuzzed) == value


def _atoms(f):
    from rpcalc.formulas import Atom as A, walk

    return [g for g in walk(f) if isinstance(g, A)]


def test_brute_force_validity():
    assert valid_q_bruteforce(parse_formula("ex x. (R(x) | ~R(x))")) == 1
    assert valid_q_bruteforce(parse_formula("all x. R(x)")) == 0
    with pytest.raises(ValueError):
        valid_q_bruteforce(parse_formula("all x. R(x) & R(x, x)"))
    with pytest.raises(ValueError):
        valid_q_bruteforce(parse_formula("R(p)"))
    # no oracle applications at all: plain evaluation
    assert valid_q_bruteforce(parse_formula("all x. x | ~x")) == 1


def test_eval_batch_agrees_with_eval():
    rng = random.Random(25)
    for _ in range(40):
        f = random_flat_formula(rng, depth=3)
        names = sorted({a.name for a in _atoms(f)})
        oracle = Structure(
            {},
            frozenset(
                "".join(rng.choice("01") for _ in range(rng.randint(0, 3))) for _ in range(4)
            ),
        )
        if not names:
            names = ["p"]
        for env in exhaustive_assignments(names, chunk=64):
            got = eval_batch(f, env, oracle)
            for row in range(len(got)):
                point = {n: int(env[n][row]) for n in names}
                assert int(got[row]) == eval_formula(f, Structure(point, oracle.oracle))
