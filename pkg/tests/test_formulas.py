import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genlib import random_ast, random_flat_formula
from rpcalc.formulas import (
    Atom,
    CaptureError,
    Const,
    Forall,
    QuantifiedCostError,
    RApp,
    Sequent,
    classify,
    cost,
    cost_sequent,
    free_atoms,
    is_quantifier_free,
    substitute,
)
from rpcalc.syntax import length, parse_formula, parse_sequent


def test_cost_worked_example():
    assert cost(parse_formula("R(p & q, p & q, p, 0, 1, 1)")) == 5


def test_cost_trivia():
    assert cost(Const(1)) == 0
    assert cost(parse_formula("~p | R(0,1)")) == 2


def test_cost_rejects_quantifiers():
    with pytest.raises(QuantifiedCostError):
        cost(parse_formula("all x. x"))
    with pytest.raises(QuantifiedCostError):
        cost(RApp((parse_formula("ex y. y"),)))


def test_cost_sequent_examples():
    assert cost_sequent(parse_sequent("p |- p")) == 0
    assert cost_sequent(parse_sequent("R(p) |- R(p)")) == 2
    assert cost_sequent(parse_sequent("|- R(0,1)")) == 0


def test_cost_all_constant_arguments():
    assert cost(RApp((Const(0), Const(1), Const(1)))) == 0


def test_cost_permutation_invariant():
    rng = random.Random(5)
    for _ in range(50):
        args = [random_flat_formula(rng, max_r=0, depth=2) for _ in range(4)]
        shuffled = args[:]
        rng.shuffle(shuffled)
        assert cost(RApp(tuple(args))) == cost(RApp(tuple(shuffled)))


def test_cost_at_most_length():
    rng = random.Random(6)
    for _ in range(300):
        f = random_flat_formula(rng)
        assert cost(f) <= length(f)


def test_substitute_simple():
    f = parse_formula("ex y. x & y")
    assert substitute(f, "x", Const(1)) == parse_formula("ex y. 1 & y")


def test_substitute_bound_occurrence_untouched():
    f = parse_formula("all x. x")
    assert substitute(f, "x", Const(0)) is f


def test_substitute_reaches_r_arguments():
    f = parse_formula("R(x, 0)")
    assert substitute(f, "x", parse_formula("p | q")) == parse_formula("R(p | q, 0)")


def test_substitute_capture_detected():
    f = parse_formula("ex y. x & y")
    with pytest.raises(CaptureError) as err:
        substitute(f, "x", Atom("y"))
    assert err.value.binder == "y"


def test_substitute_identity():
    rng = random.Random(7)
    for _ in range(200):
        f = random_ast(rng, depth=3)
        for name in sorted(free_atoms(f)):
            assert substitute(f, name, Atom(name)) == f


def test_classify_examples():
    assert classify(parse_formula("all x. all y. R(x, y)")) == "pi1"
    assert classify(parse_formula("p & q")) == "quantifier_free"
    assert classify(parse_formula("ex p. all s. ~R(p, s)")) == "sigma2"


def test_classify_more_shapes():
    assert classify(parse_formula("ex x. ex y. x & y")) == "sigma1"
    assert classify(parse_formula("~(ex x. R(x))")) == "pi1"
    assert classify(parse_formula("(all x. R(x)) & (all y. ~R(y))")) == "pi1"
    assert classify(parse_formula("all x. ex y. R(x, y)")) == "other"
    assert classify(parse_formula("R(all x. x)")) == "other"


def test_quantifier_free_looks_into_r_arguments():
    assert is_quantifier_free(parse_formula("R(p, q & r)"))
    assert not is_quantifier_free(RApp((Forall("x", Atom("x")),)))


@given(st.integers(min_value=0, max_value=10_000))
def test_random_asts_hash_and_compare(seed):
    rng = random.Random(seed)
    f = random_ast(rng, depth=3)
    g = random_ast(random.Random(seed), depth=3)
    assert f == g
    assert hash(f) == hash(g)


def test_sequent_is_ordered_pair_of_tuples():
    s = Sequent([Atom("p"), Atom("p")], [Atom("q")])
    assert s.antecedent == (Atom("p"), Atom("p"))
    assert s != Sequent([Atom("p")], [Atom("q")])


def test_atom_name_validation():
    with pytest.raises(ValueError):
        Atom("R")
    with pytest.raises(ValueError):
        Atom("Pascal")
    with pytest.raises(ValueError):
        Const(2)
