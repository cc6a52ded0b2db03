"""Structures, evaluation, and satisfiability/validity deciders.

A structure assigns bits to atoms and fixes a finite set of binary
strings as the oracle; strings not listed are out.  Satisfiability for
quantifier-free formulas searches certificates: an atom assignment plus
an in/out choice per distinct queried string (occurrences whose argument
vectors evaluate to the same string share one choice).  The pi1 solver
expands the universal prefix and decides the resulting ground constraints
by unit propagation with chronological backtracking.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .formulas import (
    And,
    Atom,
    Const,
    Exists,
    FALSE,
    Forall,
    Formula,
    Not,
    Or,
    RApp,
    Sequent,
    all_names,
    atom_names_fast,
    flatten_and,
    fold_assign,
    free_atoms,
    is_quantifier_free,
    or_all,
    walk,
)


class UnassignedAtomError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"atom {name!r} has no assigned value")
        self.name = name


@dataclass(frozen=True)
class Structure:
    """Truth assignment plus a finite explicit oracle set.

    Only strings listed in `oracle` are in the relation; everything else
    is out.  Mixed lengths and the empty string are allowed.
    """

    atoms: dict[str, int]
    oracle: frozenset[str]

    def __post_init__(self) -> None:
        atoms = dict(self.atoms)
        for name, bit in atoms.items():
            if bit not in (0, 1):
                raise ValueError(f"atom {name!r} must be 0 or 1, got {bit!r}")
        strings = frozenset(self.oracle)
        for s in strings:
            if any(ch not in "01" for ch in s):
                raise ValueError(f"oracle strings must be over {{0,1}}, got {s!r}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "oracle", strings)

    def to_json(self) -> dict:
        return {
            "atoms": {k: self.atoms[k] for k in sorted(self.atoms)},
            "oracle": sorted(self.oracle),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Structure":
        return cls(dict(data.get("atoms", {})), frozenset(data.get("oracle", ())))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


EMPTY_STRUCTURE = Structure({}, frozenset())


def _eval(f: Formula, env: dict[str, int], oracle_fn: Callable[[str], int]) -> int:
    if isinstance(f, Atom):
        bit = env.get(f.name)
        if bit is None:
            raise UnassignedAtomError(f.name)
        return bit
    if isinstance(f, Const):
        return f.bit
    if isinstance(f, Not):
        return 1 - _eval(f.child, env, oracle_fn)
    if isinstance(f, And):
        if _eval(f.left, env, oracle_fn) == 0:
            return 0
        return _eval(f.right, env, oracle_fn)
    if isinstance(f, Or):
        if _eval(f.left, env, oracle_fn) == 1:
            return 1
        return _eval(f.right, env, oracle_fn)
    if isinstance(f, RApp):
        s = "".join(str(_eval(a, env, oracle_fn)) for a in f.args)
        return oracle_fn(s)
    # Quantifiers range over {0,1}.
    missing = object()
    saved = env.get(f.var, missing)
    try:
        env[f.var] = 0
        v0 = _eval(f.body, env, oracle_fn)
        if isinstance(f, Forall) and v0 == 0:
            return 0
        if isinstance(f, Exists) and v0 == 1:
            return 1
        env[f.var] = 1
        return _eval(f.body, env, oracle_fn)
    finally:
        if saved is missing:
            del env[f.var]
        else:
            env[f.var] = saved


def eval_formula(f: Formula, structure: Structure) -> int:
    oracle = structure.oracle
    return _eval(f, dict(structure.atoms), lambda s: 1 if s in oracle else 0)


def eval_recording(f: Formula, structure: Structure) -> tuple[int, frozenset[str]]:
    """Evaluate and report the oracle strings actually queried."""
    queried: set[str] = set()
    oracle = structure.oracle

    def lookup(s: str) -> int:
        queried.add(s)
        return 1 if s in oracle else 0

    value = _eval(f, dict(structure.atoms), lookup)
    return value, frozenset(queried)


class _UnknownQuery(Exception):
    def __init__(self, string: str):
        self.string = string


def sat_pc(f: Formula) -> Optional[Structure]:
    """Certificate search for quantifier-free formulas.

    Returns a witness structure whose oracle lists exactly the strings
    chosen in, or None when unsatisfiable.  Deterministic: atoms are
    enumerated in sorted order with 0 before 1, and each newly queried
    string is tried out-of-oracle first.
    """
    if not is_quantifier_free(f):
        raise ValueError("sat_pc expects a quantifier-free formula")
    atoms = sorted(free_atoms(f))
    env: dict[str, int] = {}
    chosen: dict[str, int] = {}

    def lookup(s: str) -> int:
        if s in chosen:
            return chosen[s]
        raise _UnknownQuery(s)

    def search_oracle() -> bool:
        try:
            return _eval(f, env, lookup) == 1
        except _UnknownQuery as unknown:
            s = unknown.string
            for bit in (0, 1):
                chosen[s] = bit
                if search_oracle():
                    return True
                del chosen[s]
            return False

    def go(i: int) -> bool:
        if i == len(atoms):
            return search_oracle()
        for bit in (0, 1):
            env[atoms[i]] = bit
            if go(i + 1):
                return True
        del env[atoms[i]]
        return False

    if go(0):
        oracle = frozenset(s for s, bit in chosen.items() if bit == 1)
        return Structure(dict(env), oracle)
    return None


def valid_pc(f: Formula) -> bool:
    return sat_pc(Not(f)) is None


def validity_formula(s: Sequent) -> Formula:
    """~G1 | ... | ~Gm | D1 | ... | Dk; the empty sequent yields 0."""
    parts = [Not(g) for g in s.antecedent] + list(s.succedent)
    return or_all(parts)


def sequent_valid(s: Sequent) -> bool:
    return valid_pc(validity_formula(s))


@dataclass(frozen=True)
class SolverLimits:
    """Desk-scale budgets for the expansion solver."""

    max_universal_vars: int = 22
    max_oracle_strings: int = 4096
    max_structures: int = 1 << 20

    def __post_init__(self) -> None:
        if min(self.max_universal_vars, self.max_oracle_strings, self.max_structures) <= 0:
            raise ValueError("solver limits must be positive")


DEFAULT_LIMITS = SolverLimits()

SAT = "sat"
UNSAT = "unsat"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Pi1Result:
    status: str
    witness: Optional[Structure] = None
    reason: str = ""


class UnsupportedShapeError(ValueError):
    """Input is not a universally quantified formula over a QF matrix."""


def _rename_free(g: Formula, env: dict[str, str]) -> Formula:
    """Rename free atoms per env, preserving unchanged subtrees.  The new
    names are fresh across the whole formula, so capture is impossible."""
    if not env:
        return g
    if isinstance(g, Atom):
        new = env.get(g.name)
        return g if new is None else Atom(new)
    if isinstance(g, Const):
        return g
    if isinstance(g, Not):
        c = _rename_free(g.child, env)
        return g if c is g.child else Not(c)
    if isinstance(g, (And, Or)):
        left = _rename_free(g.left, env)
        right = _rename_free(g.right, env)
        if left is g.left and right is g.right:
            return g
        return type(g)(left, right)
    if isinstance(g, RApp):
        args = tuple(_rename_free(a, env) for a in g.args)
        if all(a is b for a, b in zip(args, g.args)):
            return g
        return RApp(args)
    if g.var in env:
        env = {k: v for k, v in env.items() if k != g.var}
    body = _rename_free(g.body, env)
    return g if body is g.body else type(g)(g.var, body)


def pull_universals(f: Formula) -> tuple[tuple[str, ...], Formula]:
    """Strip universal quantifiers reachable through &, | and leading
    Forall nodes, renaming each bound variable to a fresh name.

    Pulling through a disjunct is sound because the fresh variable is
    not free on the other side.  Raises UnsupportedShapeError if the
    remaining matrix is not quantifier-free.
    """
    taken = set(all_names(f))
    order: list[str] = []
    counter = itertools.count()

    def fresh() -> str:
        while True:
            name = f"u{next(counter)}"
            if name not in taken:
                taken.add(name)
                return name

    def spine(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, Forall):
            name = fresh()
            order.append(name)
            return spine(g.body, {**env, g.var: name})
        if isinstance(g, (And, Or)):
            return type(g)(spine(g.left, env), spine(g.right, env))
        return _rename_free(g, env)

    matrix = spine(f, {})
    if not is_quantifier_free(matrix):
        raise UnsupportedShapeError(
            "matrix is not quantifier-free; only pi1-shaped inputs are supported"
        )
    return tuple(order), matrix


def _constraint_strings(f: Formula) -> set[str]:
    out = set()
    for g in walk(f):
        if isinstance(g, RApp) and all(isinstance(a, Const) for a in g.args):
            out.add("".join(str(a.bit) for a in g.args))
    return out


class _Budget(Exception):
    pass


def _expand(conjunct: Formula, support: list[str], limits: SolverLimits, counters: dict) -> list[Formula]:
    """All ground instances of `conjunct` over its universal support.
    Branches whose instance folds to 1 are pruned, and variables no
    longer occurring are skipped; the surviving instances are exactly
    the non-trivial constraints of the full expansion."""
    out: list[Formula] = []

    def leaf(g: Formula) -> None:
        counters["leaves"] += 1
        if counters["leaves"] > limits.max_structures:
            raise _Budget("expansion exceeded max_structures")
        counters["strings"] |= _constraint_strings(g)
        if len(counters["strings"]) > limits.max_oracle_strings:
            raise _Budget("expansion exceeded max_oracle_strings")
        out.append(g)

    def rec(g: Formula, remaining: list[str]) -> None:
        if isinstance(g, Const):
            if g.bit == 0:
                out.append(FALSE)
            return
        present_names = atom_names_fast(g)
        remaining = [v for v in remaining if v in present_names]
        if not remaining:
            leaf(g)
            return
        var = remaining[0]
        for bit in (0, 1):
            rec(fold_assign(g, {var: bit}), remaining[1:])

    rec(fold_assign(conjunct, {}), list(support))
    return out


def _as_literal(g: Formula) -> Optional[tuple[tuple[str, str], int]]:
    """Recognize a forced unit: (key, bit) with key ('a', name) for an
    atom or ('s', string) for an oracle string."""
    positive = 1
    if isinstance(g, Not):
        positive = 0
        g = g.child
    if isinstance(g, Atom):
        return ("a", g.name), positive
    if isinstance(g, RApp) and all(isinstance(a, Const) for a in g.args):
        return ("s", "".join(str(a.bit) for a in g.args)), positive
    return None


def _fold_ground(f: Formula, atoms: dict[str, int], strings: dict[str, int]) -> Formula:
    """fold_assign extended to resolve constant-argument R applications
    against a partial string assignment."""
    if isinstance(f, Atom):
        bit = atoms.get(f.name)
        return f if bit is None else Const(bit)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        c = _fold_ground(f.child, atoms, strings)
        if isinstance(c, Const):
            return Const(1 - c.bit)
        return f if c is f.child else Not(c)
    if isinstance(f, (And, Or)):
        absorbing = 0 if isinstance(f, And) else 1
        left = _fold_ground(f.left, atoms, strings)
        if isinstance(left, Const) and left.bit == absorbing:
            return left
        right = _fold_ground(f.right, atoms, strings)
        if isinstance(right, Const) and right.bit == absorbing:
            return right
        if isinstance(left, Const):
            return right
        if isinstance(right, Const):
            return left
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    if isinstance(f, RApp):
        args = tuple(_fold_ground(a, atoms, strings) for a in f.args)
        if all(isinstance(a, Const) for a in args):
            bit = strings.get("".join(str(a.bit) for a in args))
            if bit is not None:
                return Const(bit)
        if all(a is b for a, b in zip(args, f.args)):
            return f
        return RApp(args)
    raise ValueError("ground constraints must be quantifier-free")


def _constraint_keys(g: Formula) -> set[tuple[str, str]]:
    keys: set[tuple[str, str]] = set()
    for h in walk(g):
        if isinstance(h, Atom):
            keys.add(("a", h.name))
        elif isinstance(h, RApp) and all(isinstance(a, Const) for a in h.args):
            keys.add(("s", "".join(str(a.bit) for a in h.args)))
    return keys


@dataclass
class _SolverState:
    atoms: dict[str, int]
    strings: dict[str, int]
    active: dict[int, Formula]
    watch: dict[tuple[str, str], set[int]]

    def copy(self) -> "_SolverState":
        return _SolverState(
            dict(self.atoms),
            dict(self.strings),
            dict(self.active),
            {k: set(v) for k, v in self.watch.items()},
        )

    def lookup(self, key: tuple[str, str]) -> Optional[int]:
        table = self.atoms if key[0] == "a" else self.strings
        return table.get(key[1])


class _Solver:
    """Unit propagation with chronological backtracking over free atoms
    and oracle strings; a constraint is refolded only when one of its
    keys gets assigned."""

    def __init__(self, constraints: list[Formula], limits: SolverLimits):
        self.limits = limits
        self.initial = list(constraints)
        self._next_id = 0

    def solve(self) -> Optional[tuple[dict[str, int], dict[str, int]]]:
        state = _SolverState({}, {}, {}, {})
        dirty = []
        for g in self.initial:
            cid = self._next_id
            self._next_id += 1
            state.active[cid] = g
            dirty.append(cid)
        return self._search(state, dirty)

    def _assign(self, state: _SolverState, key, bit, dirty) -> bool:
        old = state.lookup(key)
        if old is not None:
            return old == bit
        if key[0] == "s":
            if len(state.strings) >= self.limits.max_oracle_strings:
                raise _Budget("solver exceeded max_oracle_strings")
            state.strings[key[1]] = bit
        else:
            state.atoms[key[1]] = bit
        dirty.extend(state.watch.pop(key, ()))
        return True

    def _propagate(self, state: _SolverState, dirty) -> bool:
        while dirty:
            cid = dirty.pop()
            g = state.active.pop(cid, None)
            if g is None:
                continue
            g = _fold_ground(g, state.atoms, state.strings)
            if isinstance(g, Const):
                if g.bit == 0:
                    return False
                continue
            for part in flatten_and(g):
                unit = _as_literal(part)
                if unit is not None:
                    key, bit = unit
                    if not self._assign(state, key, bit, dirty):
                        return False
                    continue
                pid = self._next_id
                self._next_id += 1
                state.active[pid] = part
                touched = False
                for key in _constraint_keys(part):
                    if state.lookup(key) is not None:
                        touched = True
                    else:
                        state.watch.setdefault(key, set()).add(pid)
                if touched:
                    dirty.append(pid)
        return True

    def _branch_key(self, state: _SolverState):
        best = None
        for g in state.active.values():
            for key in _constraint_keys(g):
                if state.lookup(key) is not None:
                    continue
                if best is None or key < best:
                    best = key
        return best

    def _search(self, state: _SolverState, dirty):
        if not self._propagate(state, dirty):
            return None
        if not state.active:
            return state.atoms, state.strings
        key = self._branch_key(state)
        if key is None:
            return None
        for bit in (0, 1):
            branch = state.copy()
            dirty2: list[int] = []
            if not self._assign(branch, key, bit, dirty2):
                continue
            result = self._search(branch, dirty2)
            if result is not None:
                return result
        return None


def _solve_constraints(
    constraints: list[Formula], limits: SolverLimits
) -> Optional[tuple[dict[str, int], dict[str, int]]]:
    return _Solver(constraints, limits).solve()


def sat_pi1(f: Formula, limits: SolverLimits = DEFAULT_LIMITS) -> Pi1Result:
    """Expansion solver for universally quantified formulas over a
    quantifier-free matrix.  Free atoms are further existential
    unknowns.  UNSAT is exact within the enumerated space; the witness
    on SAT is the least one under the documented deterministic order
    (sorted atoms before sorted strings, 0 before 1)."""
    uvars, matrix = pull_universals(f)
    if len(uvars) > limits.max_universal_vars:
        return Pi1Result(
            BUDGET_EXCEEDED,
            reason=f"{len(uvars)} universal variables exceed limit {limits.max_universal_vars}",
        )
    counters = {"leaves": 0, "strings": set()}
    constraints: list[Formula] = []
    try:
        for conjunct in flatten_and(matrix):
            conjunct_free = free_atoms(conjunct)
            support = [v for v in uvars if v in conjunct_free]
            constraints.extend(_expand(conjunct, support, limits, counters))
        solution = _solve_constraints(constraints, limits)
    except _Budget as exc:
        return Pi1Result(BUDGET_EXCEEDED, reason=str(exc))
    if solution is None:
        return Pi1Result(UNSAT)
    atoms, strings = solution
    original_free = free_atoms(f)
    assignment = {name: atoms.get(name, 0) for name in sorted(original_free)}
    oracle = frozenset(s for s, bit in strings.items() if bit == 1)
    return Pi1Result(SAT, witness=Structure(assignment, oracle))


def holds_universally(
    f: Formula, structure: Structure, limits: SolverLimits = DEFAULT_LIMITS
) -> bool:
    """Exact check that a closed universally quantified formula holds in
    the given structure, via the pruning expansion (no sampling)."""
    if free_atoms(f):
        raise ValueError("holds_universally expects a closed formula")
    uvars, matrix = pull_universals(f)
    counters = {"leaves": 0, "strings": set()}
    oracle = structure.oracle
    for conjunct in flatten_and(matrix):
        conjunct_free = free_atoms(conjunct)
        support = [v for v in uvars if v in conjunct_free]
        for constraint in _expand(conjunct, support, limits, counters):
            if _eval(constraint, {}, lambda s: 1 if s in oracle else 0) == 0:
                return False
    return True


def rapp_arities(f: Formula) -> set[int]:
    return {len(g.args) for g in walk(f) if isinstance(g, RApp)}


def all_strings(m: int) -> list[str]:
    return ["".join(bits) for bits in itertools.product("01", repeat=m)]


def enumerate_oracles(m: int) -> Iterable[frozenset[str]]:
    """All subsets of {0,1}^m in a fixed deterministic order."""
    strings = all_strings(m)
    for mask in range(1 << len(strings)):
        yield frozenset(s for j, s in enumerate(strings) if mask >> j & 1)


def valid_q_bruteforce(f: Formula, max_arity: int = 4) -> int:
    """Validity of a closed formula by enumerating every oracle over
    {0,1}^m, where m is the common arity of all R applications."""
    if free_atoms(f):
        raise ValueError("valid_q_bruteforce expects a closed formula")
    arities = rapp_arities(f)
    if len(arities) > 1:
        raise ValueError(f"mixed R arities {sorted(arities)} are not supported")
    if not arities:
        return eval_formula(f, EMPTY_STRUCTURE)
    (m,) = arities
    if m > max_arity:
        raise ValueError(f"R arity {m} exceeds max_arity {max_arity}")
    for oracle in enumerate_oracles(m):
        if eval_formula(f, Structure({}, oracle)) == 0:
            return 0
    return 1


# ---------------------------------------------------------------------------
# Vectorized evaluation for large-scale matrix checks.

def _pack_strings(strings: Iterable[str]) -> np.ndarray:
    return np.array(sorted(int(s[::-1], 2) if s else 0 for s in strings), dtype=np.uint64)


def eval_batch(f: Formula, env: dict[str, np.ndarray], structure: Structure) -> np.ndarray:
    """Evaluate a quantifier-free formula on many assignments at once.

    env maps atom names to equal-length boolean arrays.  R arguments are
    packed into integers (argument 1 is the low-order bit) and matched
    against the same-length oracle strings.
    """
    packed: dict[int, np.ndarray] = {}

    def oracle_for(arity: int) -> np.ndarray:
        if arity not in packed:
            packed[arity] = _pack_strings(s for s in structure.oracle if len(s) == arity)
        return packed[arity]

    def go(g: Formula) -> np.ndarray:
        if isinstance(g, Atom):
            arr = env.get(g.name)
            if arr is None:
                raise UnassignedAtomError(g.name)
            return arr
        if isinstance(g, Const):
            size = len(next(iter(env.values()))) if env else 1
            return np.full(size, bool(g.bit))
        if isinstance(g, Not):
            return ~go(g.child)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Or):
            return go(g.left) | go(g.right)
        if isinstance(g, RApp):
            if len(g.args) > 63:
                raise ValueError("batched evaluation supports R arity up to 63")
            if not g.args:
                size = len(next(iter(env.values()))) if env else 1
                return np.full(size, "" in structure.oracle)
            vals = [go(a) for a in g.args]
            code = np.zeros(len(vals[0]), dtype=np.uint64)
            for i, v in enumerate(vals):
                code |= v.astype(np.uint64) << np.uint64(i)
            table = oracle_for(len(g.args))
            if table.size == 0:
                return np.zeros(len(vals[0]), dtype=bool)
            return np.isin(code, table)
        raise ValueError("eval_batch expects a quantifier-free formula")

    return go(f)


def exhaustive_assignments(names: list[str], chunk: int = 1 << 16):
    """Yield boolean-array environments covering all 2^k assignments."""
    k = len(names)
    total = 1 << k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        yield {name: (idx >> np.uint64(i)) & np.uint64(1) != 0 for i, name in enumerate(names)}


def sampled_assignments(names: list[str], samples: int, seed: int, chunk: int = 1 << 16):
    rng = np.random.default_rng(seed)
    remaining = samples
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size
        yield {name: rng.integers(0, 2, size=size, dtype=np.uint8) != 0 for name in names}
