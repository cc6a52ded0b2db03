"""Automatic prover for valid quantifier-free sequents.

The procedure recurses on sequent cost.  At cost 0 every formula is an
atom, a constant, or an R application with constant arguments, and a
valid sequent is an axiom up to weakening and exchange; otherwise the
first decomposable formula (succedent scanned left to right, then the
antecedent) is reduced: principal connectives by the matching
introduction rule applied backwards, and an R application with a
non-constant argument A by cutting the recursive premises against the
substitution schemes (E2/E4 on the right, E1/E3 on the left) and
finally cutting on A.  Each R step drops the cost by exactly one, so a
proof of a cost-c sequent has at most D_LINES * 2^c counted lines.

Invalid sequents surface at the base case, where a falsifying structure
can be read off directly; every reduction step is invertible, so the
same structure falsifies the original sequent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from . import proofs, syntax
from .constants import D_LINES, E_LINE_FACTOR
from .formulas import (
    And,
    Atom,
    Const,
    Formula,
    Not,
    Or,
    RApp,
    Sequent,
    cost_sequent,
    is_quantifier_free,
)
from .proofs import Proof
from .semantics import Structure, eval_formula, validity_formula


@dataclass(frozen=True)
class ProverStats:
    counted_sequents: int
    max_line: int
    cost_at_root: int
    recursion_depth: int

    def to_json(self) -> dict:
        return {
            "counted_sequents": self.counted_sequents,
            "cost": self.cost_at_root,
            "bound": D_LINES * (1 << self.cost_at_root),
            "max_line": self.max_line,
        }


@dataclass(frozen=True)
class ProveResult:
    proof: Optional[Proof]
    stats: Optional[ProverStats]
    counterexample: Optional[Structure]

    @property
    def valid(self) -> bool:
        return self.proof is not None


class NotDecomposableError(ValueError):
    pass


def _top_connective(f: Formula) -> bool:
    return isinstance(f, (Not, And, Or))


def _r_with_nonconst(f: Formula) -> Optional[int]:
    """Leftmost non-constant argument position of a top-level R, or None."""
    if isinstance(f, RApp):
        for i, a in enumerate(f.args):
            if not isinstance(a, Const):
                return i
    return None


def choose_target(s: Sequent) -> Optional[tuple[str, int]]:
    """Deterministic decomposition target: first principal connective
    (succedent first), else first R application with a non-constant
    argument.  None at cost 0."""
    for side, cedent in (("succ", s.succedent), ("ante", s.antecedent)):
        for i, f in enumerate(cedent):
            if _top_connective(f):
                return side, i
    for side, cedent in (("succ", s.succedent), ("ante", s.antecedent)):
        for i, f in enumerate(cedent):
            if _r_with_nonconst(f) is not None:
                return side, i
    return None


Rebuild = Callable[[list[Proof]], Proof]


def connective_step(s: Sequent, side: str, idx: int) -> tuple[list[Sequent], Rebuild]:
    """Backwards application of the introduction rule for the principal
    connective of the formula at (side, idx); the rebuild closure adds
    the exchanges that return the principal formula to its position."""
    if side == "succ":
        f = s.succedent[idx]
        last = len(s.succedent) - 1
        ctx = s.succedent[:idx] + s.succedent[idx + 1 :]
        if isinstance(f, Not):
            prem = Sequent((f.child,) + s.antecedent, ctx)
            rebuild_rule = lambda ps: proofs.not_r(ps[0])
            prems = [prem]
        elif isinstance(f, And):
            prems = [Sequent(s.antecedent, ctx + (f.left,)), Sequent(s.antecedent, ctx + (f.right,))]
            rebuild_rule = lambda ps: proofs.and_r(ps[0], ps[1])
        elif isinstance(f, Or):
            prems = [Sequent(s.antecedent, ctx + (f.left, f.right))]
            rebuild_rule = lambda ps: proofs.or_r(ps[0])
        else:
            raise NotDecomposableError(f"no principal connective at succedent {idx}")

        def rebuild(ps: list[Proof]) -> Proof:
            return proofs.move_succedent(rebuild_rule(ps), last, idx)

        return prems, rebuild

    f = s.antecedent[idx]
    ctx = s.antecedent[:idx] + s.antecedent[idx + 1 :]
    if isinstance(f, Not):
        prems = [Sequent(ctx, s.succedent + (f.child,))]
        rebuild_rule = lambda ps: proofs.not_l(ps[0])
    elif isinstance(f, And):
        prems = [Sequent((f.left, f.right) + ctx, s.succedent)]
        rebuild_rule = lambda ps: proofs.and_l(ps[0])
    elif isinstance(f, Or):
        prems = [Sequent((f.left,) + ctx, s.succedent), Sequent((f.right,) + ctx, s.succedent)]
        rebuild_rule = lambda ps: proofs.or_l(ps[0], ps[1])
    else:
        raise NotDecomposableError(f"no principal connective at antecedent {idx}")

    def rebuild(ps: list[Proof]) -> Proof:
        return proofs.move_antecedent(rebuild_rule(ps), 0, idx)

    return prems, rebuild


def oracle_step(s: Sequent, side: str, idx: int) -> tuple[list[Sequent], Rebuild]:
    """Reduction of an R application with a non-constant argument."""
    cedent = s.succedent if side == "succ" else s.antecedent
    f = cedent[idx]
    arg_idx = _r_with_nonconst(f)
    if arg_idx is None:
        raise NotDecomposableError(f"formula at {side} {idx} has no non-constant R argument")
    a = f.args[arg_idx]
    before, after = f.args[:arg_idx], f.args[arg_idx + 1 :]
    r_a = f
    r_one = RApp(before + (Const(1),) + after)
    r_zero = RApp(before + (Const(0),) + after)

    if side == "succ":
        delta = s.succedent[:idx] + s.succedent[idx + 1 :]
        gamma = s.antecedent
        prem1 = Sequent((a,) + gamma, delta + (r_one,))
        prem2 = Sequent(gamma, delta + (a, r_zero))

        def rebuild(ps: list[Proof]) -> Proof:
            rec1, rec2 = ps
            e2 = proofs.derive_scheme("E2", a, before, after)
            e4 = proofs.derive_scheme("E4", a, before, after)
            # Left: cut the 1-instance against E2.
            prem_a = proofs.weak_r(rec1, r_a, len(delta))
            prem_b = proofs.exch_l(e2, 0)  # R1, A |- RA
            prem_b = proofs.pad_antecedent(prem_b, (r_one, a) + gamma, [0, 1])
            prem_b = proofs.pad_succedent(prem_b, delta + (r_a,), [len(delta)])
            left = proofs.cut(prem_a, prem_b)  # A, Gamma |- Delta, RA
            # Right: cut the 0-instance against E4.
            prem_a = proofs.weak_r(rec2, r_a, len(delta) + 1)
            prem_b = proofs.pad_antecedent(e4, (r_zero,) + gamma, [0])
            prem_b = proofs.pad_succedent(prem_b, delta + (a, r_a), [len(delta), len(delta) + 1])
            right = proofs.cut(prem_a, prem_b)  # Gamma |- Delta, A, RA
            # Cut on A.
            final = proofs.cut(proofs.exch_r(right, len(delta)), left)
            return proofs.move_succedent(final, len(delta), idx)

        return [prem1, prem2], rebuild

    delta = s.succedent
    gamma = s.antecedent[:idx] + s.antecedent[idx + 1 :]
    prem1 = Sequent((a, r_one) + gamma, delta)
    prem2 = Sequent((r_zero,) + gamma, delta + (a,))

    def rebuild(ps: list[Proof]) -> Proof:
        rec1, rec2 = ps
        e1 = proofs.derive_scheme("E1", a, before, after)
        e3 = proofs.derive_scheme("E3", a, before, after)
        # Left: cut the 1-instance against E1.
        prem_a = proofs.pad_antecedent(e1, (a, r_a) + gamma, [0, 1])
        prem_a = proofs.pad_succedent(prem_a, delta + (r_one,), [len(delta)])
        prem_b = proofs.weak_l(proofs.exch_l(rec1, 0), r_a, 2)
        prem_b_target = (r_one, a, r_a) + gamma
        assert prem_b.conclusion.antecedent == prem_b_target
        left = proofs.cut(prem_a, prem_b)  # A, RA, Gamma |- Delta
        # Right: cut the 0-instance against E3.
        prem_a = proofs.pad_antecedent(e3, (r_a,) + gamma, [0])
        prem_a = proofs.pad_succedent(prem_a, delta + (a, r_zero), [len(delta), len(delta) + 1])
        prem_b = proofs.weak_l(rec2, r_a, 1)
        right = proofs.cut(prem_a, prem_b)  # RA, Gamma |- Delta, A
        final = proofs.cut(right, left)
        return proofs.move_antecedent(final, 0, idx)

    return [prem1, prem2], rebuild


def decompose(s: Sequent, side: str, idx: int) -> tuple[list[Sequent], Rebuild]:
    cedent = s.succedent if side == "succ" else s.antecedent
    if not (0 <= idx < len(cedent)):
        raise NotDecomposableError(f"no formula at {side} position {idx}")
    f = cedent[idx]
    if _top_connective(f):
        return connective_step(s, side, idx)
    if _r_with_nonconst(f) is not None:
        return oracle_step(s, side, idx)
    raise NotDecomposableError(f"formula at {side} {idx} is not decomposable")


def premise_costs(s: Sequent, side: str, idx: int) -> list[int]:
    """Costs of the premise sequents the prover would generate for the
    decomposition target at (side, idx)."""
    prems, _ = decompose(s, side, idx)
    return [cost_sequent(p) for p in prems]


def _base_counterexample(s: Sequent) -> Structure:
    atoms: dict[str, int] = {}
    oracle: set[str] = set()
    for f in s.antecedent:
        if isinstance(f, Atom):
            atoms[f.name] = 1
        elif isinstance(f, RApp):
            oracle.add("".join(str(a.bit) for a in f.args))
    for f in s.succedent:
        if isinstance(f, Atom):
            atoms[f.name] = 0
    return Structure(atoms, frozenset(oracle))


def _base_proof(s: Sequent) -> Union[Proof, Structure]:
    if Const(1) in s.succedent:
        idx = s.succedent.index(Const(1))
        p = proofs.pad_antecedent(proofs.ax_true(), s.antecedent, [])
        return proofs.pad_succedent(p, s.succedent, [idx])
    if Const(0) in s.antecedent:
        idx = s.antecedent.index(Const(0))
        p = proofs.pad_antecedent(proofs.ax_false(), s.antecedent, [idx])
        return proofs.pad_succedent(p, s.succedent, [])
    common = [f for f in s.antecedent if f in s.succedent]
    if common:
        f = common[0]
        p = proofs.ax_id(f)
        p = proofs.pad_antecedent(p, s.antecedent, [s.antecedent.index(f)])
        return proofs.pad_succedent(p, s.succedent, [s.succedent.index(f)])
    witness = _base_counterexample(s)
    assert eval_formula(validity_formula(s), witness) == 0
    return witness


def _prove(s: Sequent, depth: int, tracker: dict) -> Union[Proof, Structure]:
    tracker["depth"] = max(tracker["depth"], depth)
    c = cost_sequent(s)
    if c == 0:
        return _base_proof(s)
    target = choose_target(s)
    assert target is not None, "positive cost implies a decomposable formula"
    side, idx = target
    prems, rebuild = decompose(s, side, idx)
    cedent = s.succedent if side == "succ" else s.antecedent
    if isinstance(cedent[idx], RApp):
        drops = [c - cost_sequent(p) for p in prems]
        assert drops == [1, 1], f"oracle step must drop cost by exactly 1, got {drops}"
        tracker["r_steps"] += 1
    subproofs = []
    for prem in prems:
        sub = _prove(prem, depth + 1, tracker)
        if isinstance(sub, Structure):
            return sub
        subproofs.append(sub)
    return rebuild(subproofs)


def prove(s: Sequent) -> ProveResult:
    """Prove a valid quantifier-free sequent, or report a falsifying
    structure.  Deterministic: identical input yields an identical tree."""
    for f in s.formulas:
        if not is_quantifier_free(f):
            raise ValueError("prove expects a quantifier-free sequent")
    tracker = {"depth": 0, "r_steps": 0}
    outcome = _prove(s, 0, tracker)
    if isinstance(outcome, Structure):
        assert eval_formula(validity_formula(s), outcome) == 0
        return ProveResult(None, None, outcome)
    assert outcome.conclusion == s
    stats = ProverStats(
        counted_sequents=proofs.counted_size(outcome),
        max_line=proofs.max_line_length(outcome),
        cost_at_root=cost_sequent(s),
        recursion_depth=tracker["depth"],
    )
    if __debug__:
        assert stats.counted_sequents <= D_LINES * (1 << stats.cost_at_root)
        assert stats.max_line <= E_LINE_FACTOR * syntax.sequent_length(s)
    return ProveResult(outcome, stats, None)
