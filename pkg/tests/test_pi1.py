import random

import pytest

from genlib import brute_sat_q
from rpcalc.formulas import And, Atom, Const, Not, Or, RApp, foralls, free_atoms, fold_assign
from rpcalc.semantics import (
    BUDGET_EXCEEDED,
    SAT,
    UNSAT,
    SolverLimits,
    Structure,
    UnsupportedShapeError,
    eval_formula,
    pull_universals,
    sat_pc,
    sat_pi1,
    valid_q_bruteforce,
)
from rpcalc.syntax import parse_formula


def test_examples():
    r = sat_pi1(parse_formula("all s. ~R(s)"))
    assert r.status == SAT
    assert r.witness == Structure({}, frozenset())

    assert sat_pi1(parse_formula("(all s. ~R(s)) & R(1)")).status == UNSAT


def test_budget_exceeded_universals():
    f = foralls([f"v{i}" for i in range(30)], Atom("v0"))
    r = sat_pi1(f, SolverLimits(max_universal_vars=8))
    assert r.status == BUDGET_EXCEEDED
    assert "universal" in r.reason


def test_budget_exceeded_structures():
    f = foralls([f"v{i}" for i in range(10)], Or(RApp(tuple(Atom(f"v{i}") for i in range(10))), Atom("v0")))
    r = sat_pi1(f, SolverLimits(max_universal_vars=16, max_structures=64))
    assert r.status == BUDGET_EXCEEDED


def test_unsupported_shape():
    with pytest.raises(UnsupportedShapeError):
        sat_pi1(parse_formula("ex x. R(x)"))
    with pytest.raises(UnsupportedShapeError):
        sat_pi1(parse_formula("~(all x. R(x))"))


def test_free_atoms_are_existential():
    r = sat_pi1(parse_formula("p & (all s. (R(s) => p))"))
    assert r.status == SAT
    assert r.witness.atoms == {"p": 1}


def test_pull_universals_through_connectives():
    uvars, matrix = pull_universals(parse_formula("(all x. R(x)) & (all x. ~R(x, x))"))
    assert len(uvars) == 2
    assert len(set(uvars)) == 2


def test_quantifier_free_input():
    r = sat_pi1(parse_formula("R(p) & ~R(1)"))
    assert r.status == SAT
    assert eval_formula(parse_formula("R(p) & ~R(1)"), r.witness) == 1


def _random_pi1(rng: random.Random, arity: int):
    names = ["x0", "x1", "x2"][: rng.randint(1, 3)]

    def matrix(d):
        if d == 0 or rng.random() < 0.35:
            if rng.random() < 0.6:
                args = tuple(
                    Atom(rng.choice(names)) if rng.random() < 0.7 else Const(rng.randint(0, 1))
                    for _ in range(arity)
                )
                return RApp(args)
            return Atom(rng.choice(names)) if rng.random() < 0.7 else Const(rng.randint(0, 1))
        roll = rng.random()
        if roll < 0.34:
            return Not(matrix(d - 1))
        if roll < 0.67:
            return And(matrix(d - 1), matrix(d - 1))
        return Or(matrix(d - 1), matrix(d - 1))

    return foralls(names, matrix(3))


def test_agreement_with_brute_force_suite():
    rng = random.Random(31)
    checked = 0
    for _ in range(100):
        arity = rng.randint(1, 3)
        f = _random_pi1(rng, arity)
        if free_atoms(f):
            continue
        fast = sat_pi1(f, SolverLimits(max_universal_vars=8, max_oracle_strings=512))
        slow = brute_sat_q(f, max_arity=3)
        assert fast.status in (SAT, UNSAT)
        assert (fast.status == SAT) == (slow is not None), f
        checked += 1
        if fast.status == SAT:
            # valid formulas must also come out satisfiable
            if valid_q_bruteforce(f, 3) == 1:
                assert slow is not None
    assert checked >= 80


def test_validity_cross_check_via_negated_expansion():
    # For closed pi1 f with matrix M over universals x:
    # f invalid  iff  OR over assignments of ~M[x] is satisfiable.
    rng = random.Random(32)
    from rpcalc.formulas import or_all
    import itertools

    for _ in range(40):
        f = _random_pi1(rng, rng.randint(1, 2))
        if free_atoms(f):
            continue
        uvars, matrix = pull_universals(f)
        disjuncts = []
        for bits in itertools.product((0, 1), repeat=len(uvars)):
            disjuncts.append(Not(fold_assign(matrix, dict(zip(uvars, bits)))))
        negated_expansion = or_all(disjuncts)
        assert (valid_q_bruteforce(f, 3) == 1) == (sat_pc(negated_expansion) is None)


def test_sat_witness_verifies_exhaustively():
    rng = random.Random(33)
    for _ in range(40):
        f = _random_pi1(rng, rng.randint(1, 2))
        r = sat_pi1(f, SolverLimits(max_universal_vars=8))
        if r.status == SAT:
            # evaluate the original formula directly (exponential but tiny)
            assert eval_formula(f, r.witness) == 1
