import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genlib import random_ast
from rpcalc.formulas import And, Atom, Not, Or, RApp
from rpcalc.syntax import (
    ParseError,
    format_formula,
    format_sequent,
    iter_entries,
    length,
    parse_entry,
    parse_formula,
    parse_sequent,
)


def test_implication_desugars():
    f = parse_formula("(R(p) & R(~p)) => (R(q) | R(~q))")
    rp = RApp((Atom("p"),))
    rnp = RApp((Not(Atom("p")),))
    rq = RApp((Atom("q"),))
    rnq = RApp((Not(Atom("q")),))
    assert f == Or(Not(And(rp, rnp)), Or(rq, rnq))


def test_iff_desugars():
    assert parse_formula("p <=> q") == parse_formula("(p => q) & (q => p)")


def test_precedence():
    assert parse_formula("~p & q | r") == Or(And(Not(Atom("p")), Atom("q")), Atom("r"))
    assert parse_formula("p | q | r") == Or(Or(Atom("p"), Atom("q")), Atom("r"))
    assert parse_formula("p => q => r") == parse_formula("p => (q => r)")


def test_quantifier_scope_extends_right():
    assert parse_formula("ex x. x | ~x") == parse_formula("ex x. (x | ~x)")
    assert parse_formula("(ex x. x) | ~p") == Or(
        parse_formula("ex x. x"), Not(Atom("p"))
    )


def test_nullary_r():
    assert parse_formula("R()") == RApp(())
    assert length(parse_formula("R()")) == 3


def test_lengths():
    assert length(parse_formula("1")) == 1
    assert length(parse_formula("R(0,1)")) == 6
    assert length(parse_formula("~p")) == 2


def test_reserved_r():
    with pytest.raises(ParseError):
        parse_formula("R & p")
    with pytest.raises(ParseError):
        parse_formula("R")


def test_error_positions():
    with pytest.raises(ParseError) as err:
        parse_formula("p &\n& q")
    assert err.value.line == 2
    assert err.value.col == 1
    with pytest.raises(ParseError):
        parse_formula("Pp")


def test_sequent_parsing():
    s = parse_sequent("p, q |- r")
    assert len(s.antecedent) == 2 and len(s.succedent) == 1
    assert parse_sequent("|-") .antecedent == ()
    assert format_sequent(parse_sequent("p|-")) == "p |-"
    assert format_sequent(parse_sequent("|- p, q")) == "|- p, q"


def test_entry_dispatch():
    assert parse_entry("p & q") == parse_formula("p & q")
    assert parse_entry("p |- q") == parse_sequent("p |- q")


def test_batch_lines_skip_comments():
    text = "# header\n\np |- p\n  # another\nq |- q\n"
    entries = iter_entries(text)
    assert [line for _, line in entries] == ["p |- p", "q |- q"]
    assert [n for n, _ in entries] == [3, 5]


def test_roundtrip_seeded_harness():
    rng = random.Random(11)
    seen = set()
    for _ in range(1000):
        f = random_ast(rng, depth=4)
        seen.add(type(f).__name__)
        text = format_formula(f)
        assert parse_formula(text) == f, text
        assert parse_formula(format_formula(parse_formula(text))) == f


@given(st.integers(min_value=0, max_value=100_000))
def test_roundtrip_property(seed):
    f = random_ast(random.Random(seed), depth=4)
    assert parse_formula(format_formula(f)) == f


def test_print_then_parse_idempotent_on_sugared_text():
    texts = [
        "p => q",
        "p <=> q | r",
        "all x. x => R(x)",
        "~(p => q) & R()",
    ]
    for text in texts:
        normalized = format_formula(parse_formula(text))
        assert format_formula(parse_formula(normalized)) == normalized


def test_sequent_roundtrip():
    rng = random.Random(13)
    for _ in range(200):
        from rpcalc.formulas import Sequent

        s = Sequent(
            tuple(random_ast(rng, 3) for _ in range(rng.randint(0, 3))),
            tuple(random_ast(rng, 3) for _ in range(rng.randint(0, 3))),
        )
        assert parse_sequent(format_sequent(s)) == s
