"""Prover and checker for the quantified calculus.

check_g is the propositional checker extended with the four quantifier
rules.  gprove works by double induction: while any cedent formula has a
quantifier at the top it is reduced (an existential on the right or a
universal on the left expands into both constant instances, rebuilt with
two instantiation rules and one contraction; the dual cases introduce a
fresh eigenvariable); formulas whose top is a connective are decomposed
with the backwards introduction rules; the quantifier-free core is
delegated to the propositional prover.  Expansion can square the work at
every quantifier block, so proof sizes may grow doubly exponentially;
the stats output makes that observable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from . import proofs, prover
from .formulas import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Not,
    Or,
    RApp,
    Sequent,
    all_names,
    is_quantifier_free,
    node_count,
    quantifier_depth,
    substitute,
    walk,
)
from .proofs import Proof, check_g  # re-exported: check_g lives with the rule logic
from .prover import ProverStats
from .semantics import Structure

__all__ = ["check_g", "gprove", "GProveResult"]

PROVED = "proved"
NOT_VALID = "not_valid"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class GProveResult:
    status: str
    proof: Optional[Proof] = None
    stats: Optional[ProverStats] = None
    counterexample: Optional[Structure] = None
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.status == PROVED


def _measure(s: Sequent) -> int:
    """Termination measure: every reduction strictly shrinks it.
    Quantifier steps trade one depth-d formula for at most two depth-(d-1)
    copies; connective steps keep depths and shrink sizes."""
    return sum((4 ** quantifier_depth(f)) * node_count(f) for f in s.formulas)


def _first_top_quantifier(s: Sequent) -> Optional[tuple[str, int]]:
    for side, cedent in (("succ", s.succedent), ("ante", s.antecedent)):
        for i, f in enumerate(cedent):
            if isinstance(f, (Forall, Exists)):
                return side, i
    return None


def _first_connective_with_quantifier(s: Sequent) -> Optional[tuple[str, int]]:
    for side, cedent in (("succ", s.succedent), ("ante", s.antecedent)):
        for i, f in enumerate(cedent):
            if isinstance(f, (Not, And, Or)):
                return side, i
    return None


class _FreshNames:
    """Deterministic eigenvariable supply: y0, y1, ... skipping every
    name present anywhere in the input."""

    def __init__(self, s: Sequent):
        taken = set()
        for f in s.formulas:
            taken |= all_names(f)
        self._taken = taken
        self._counter = itertools.count()

    def next(self) -> str:
        while True:
            name = f"y{next(self._counter)}"
            if name not in self._taken:
                self._taken.add(name)
                return name


def _gprove(s: Sequent, fresh: _FreshNames, depth: int, tracker: dict) -> Union[Proof, Structure, str]:
    tracker["depth"] = max(tracker["depth"], depth)
    if all(is_quantifier_free(f) for f in s.formulas):
        return prover._prove(s, depth, tracker)

    before = _measure(s)

    target = _first_top_quantifier(s)
    if target is not None:
        side, idx = target
        cedent = s.succedent if side == "succ" else s.antecedent
        q = cedent[idx]
        if side == "succ":
            delta = s.succedent[:idx] + s.succedent[idx + 1 :]
            if isinstance(q, Exists):
                # Gamma |- Delta, A(0), A(1), rebuilt with two ExR and one ContrR.
                a0 = substitute(q.body, q.var, Const(0))
                a1 = substitute(q.body, q.var, Const(1))
                prem = Sequent(s.antecedent, delta + (a0, a1))

                def rebuild(p: Proof) -> Proof:
                    p = proofs.ex_r(p, q.var, q.body, Const(1))
                    p = proofs.exch_r(p, len(delta))
                    p = proofs.ex_r(p, q.var, q.body, Const(0))
                    p = proofs.contr_r(p, len(delta))
                    return proofs.move_succedent(p, len(delta), idx)

            else:
                eigen = fresh.next()
                body_inst = substitute(q.body, q.var, Atom(eigen))
                prem = Sequent(s.antecedent, delta + (body_inst,))

                def rebuild(p: Proof) -> Proof:
                    p = proofs.all_r(p, q.var, q.body, eigen)
                    return proofs.move_succedent(p, len(delta), idx)

        else:
            gamma = s.antecedent[:idx] + s.antecedent[idx + 1 :]
            if isinstance(q, Forall):
                a0 = substitute(q.body, q.var, Const(0))
                a1 = substitute(q.body, q.var, Const(1))
                prem = Sequent((a0, a1) + gamma, s.succedent)

                def rebuild(p: Proof) -> Proof:
                    p = proofs.all_l(p, q.var, q.body, Const(0))
                    p = proofs.exch_l(p, 0)
                    p = proofs.all_l(p, q.var, q.body, Const(1))
                    p = proofs.contr_l(p, 0)
                    return proofs.move_antecedent(p, 0, idx)

            else:
                eigen = fresh.next()
                body_inst = substitute(q.body, q.var, Atom(eigen))
                prem = Sequent((body_inst,) + gamma, s.succedent)

                def rebuild(p: Proof) -> Proof:
                    p = proofs.ex_l(p, q.var, q.body, eigen)
                    return proofs.move_antecedent(p, 0, idx)

        assert _measure(prem) < before, "quantifier step must shrink the measure"
        sub = _gprove(prem, fresh, depth + 1, tracker)
        if not isinstance(sub, Proof):
            return sub
        return rebuild(sub)

    target = _first_connective_with_quantifier(s)
    if target is None:
        # Quantifiers survive only inside R arguments; no rule reaches them.
        return UNKNOWN
    side, idx = target
    prems, rebuild_many = prover.connective_step(s, side, idx)
    if __debug__:
        for prem in prems:
            assert _measure(prem) < before, "connective step must shrink the measure"
    subs = []
    for prem in prems:
        sub = _gprove(prem, fresh, depth + 1, tracker)
        if not isinstance(sub, Proof):
            return sub
        subs.append(sub)
    return rebuild_many(subs)


def _generalized_cost(s: Sequent) -> int:
    """Connectives, non-constant R arguments and quantifier nodes; agrees
    with the propositional cost on quantifier-free sequents."""
    total = 0
    for f in s.formulas:
        for g in walk(f):
            if isinstance(g, (Not, And, Or, Forall, Exists)):
                total += 1
            elif isinstance(g, RApp):
                total += sum(1 for a in g.args if not isinstance(a, Const))
    return total


def gprove(s: Sequent) -> GProveResult:
    """Prove a valid sequent of the quantified language, or report a
    falsifying structure of the quantifier-free core; on quantifier-free
    inputs the result is the propositional prover's proof, node for node."""
    fresh = _FreshNames(s)
    tracker = {"depth": 0, "r_steps": 0}
    outcome = _gprove(s, fresh, 0, tracker)
    if outcome == UNKNOWN:
        return GProveResult(
            UNKNOWN,
            reason="quantifiers inside R arguments cannot be reduced by the quantifier rules",
        )
    if isinstance(outcome, Structure):
        return GProveResult(NOT_VALID, counterexample=outcome)
    assert outcome.conclusion == s
    stats = ProverStats(
        counted_sequents=proofs.counted_size(outcome),
        max_line=proofs.max_line_length(outcome),
        cost_at_root=_generalized_cost(s),
        recursion_depth=tracker["depth"],
    )
    return GProveResult(PROVED, proof=outcome, stats=stats)
