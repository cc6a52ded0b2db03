"""Boolean circuits for the machine-to-formula translation.

A circuit is a gate list over NOT/AND/OR with implicit node ids: inputs
occupy ids 0 .. n_inputs-1 and gate j has id n_inputs + j.  Outputs may
reference gates or inputs directly.  The one-hot decoder maps a binary
index (input 1 is the low-order bit) to outputs r_1..r_n with r_i set
exactly when the index equals i; it is built by recursion on the bit
count, splitting on the high bit and reusing the smaller decoder, and
uses at most C_ALPHA * n gates after dead-gate pruning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import And, Atom, Formula, Not, Or, and_all, iff


@dataclass(frozen=True)
class Gate:
    op: str  # NOT | AND | OR
    operands: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "operands", tuple(self.operands))
        if self.op not in ("NOT", "AND", "OR"):
            raise ValueError(f"unknown gate op {self.op!r}")
        if len(self.operands) != (1 if self.op == "NOT" else 2):
            raise ValueError(f"{self.op} gate has wrong arity")


@dataclass(frozen=True)
class Circuit:
    n_inputs: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for j, gate in enumerate(self.gates):
            limit = self.n_inputs + j
            if any(not (0 <= op < limit) for op in gate.operands):
                raise ValueError(f"gate {j} references a later node")
        top = self.n_inputs + len(self.gates)
        if any(not (0 <= o < top) for o in self.outputs):
            raise ValueError("output references a missing node")

    @property
    def gate_count(self) -> int:
        return len(self.gates)


def evaluate(circuit: Circuit, bits) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Returns (gate values, output values) for the given input bits."""
    bits = list(bits)
    if len(bits) != circuit.n_inputs:
        raise ValueError("wrong number of input bits")
    values = list(bits)
    for gate in circuit.gates:
        ops = [values[i] for i in gate.operands]
        if gate.op == "NOT":
            values.append(1 - ops[0])
        elif gate.op == "AND":
            values.append(ops[0] & ops[1])
        else:
            values.append(ops[0] | ops[1])
    gate_values = tuple(values[circuit.n_inputs :])
    return gate_values, tuple(values[i] for i in circuit.outputs)


def _prune(circuit: Circuit) -> Circuit:
    """Drop gates not reachable from the outputs, renumbering densely."""
    needed: set[int] = set()
    stack = [i for i in circuit.outputs if i >= circuit.n_inputs]
    while stack:
        node = stack.pop()
        if node in needed:
            continue
        needed.add(node)
        for op in circuit.gates[node - circuit.n_inputs].operands:
            if op >= circuit.n_inputs:
                stack.append(op)
    remap: dict[int, int] = {i: i for i in range(circuit.n_inputs)}
    gates: list[Gate] = []
    for j, gate in enumerate(circuit.gates):
        node = circuit.n_inputs + j
        if node not in needed:
            continue
        remap[node] = circuit.n_inputs + len(gates)
        gates.append(Gate(gate.op, tuple(remap[op] for op in gate.operands)))
    outputs = tuple(remap[i] for i in circuit.outputs)
    return Circuit(circuit.n_inputs, tuple(gates), outputs)


def index_bits(value: int, width: int) -> tuple[int, ...]:
    """Low-order-first binary representation."""
    return tuple((value >> i) & 1 for i in range(width))


def decoder_width(n: int) -> int:
    """Input count of the decoder for targets 1..n."""
    return max(1, n.bit_length())


def decoder_circuit(n: int) -> Circuit:
    """One-hot decoder: k = ceil(log2(n+1)) inputs, outputs r_1..r_n."""
    if n < 1:
        raise ValueError("decoder needs n >= 1")
    k = decoder_width(n)
    gates: list[Gate] = []

    def add(op: str, *operands: int) -> int:
        gates.append(Gate(op, tuple(operands)))
        return k + len(gates) - 1

    # minterms[v] holds the node computing [index == v] over the first
    # `level` inputs; start with the one-bit decoder and extend.
    minterms = [add("NOT", 0), 0]
    for bit in range(1, k):
        neg = add("NOT", bit)
        low = minterms
        minterms = [add("AND", node, neg) for node in low]
        minterms += [add("AND", node, bit) for node in low]
    outputs = tuple(minterms[i] for i in range(1, n + 1))
    return _prune(Circuit(k, tuple(gates), outputs))


def increment_circuit(m: int) -> Circuit:
    """m inputs -> m sum outputs plus a final carry-out output,
    computing value+1 mod 2^m with ripple carry; at most 5m gates."""
    if m < 1:
        raise ValueError("increment needs m >= 1")
    gates: list[Gate] = []

    def add(op: str, *operands: int) -> int:
        gates.append(Gate(op, tuple(operands)))
        return m + len(gates) - 1

    outputs = [add("NOT", 0)]
    carry = 0  # carry into bit 1 is the input bit 0
    for i in range(1, m):
        either = add("OR", i, carry)
        both = add("AND", i, carry)
        not_both = add("NOT", both)
        outputs.append(add("AND", either, not_both))
        carry = both
    outputs.append(carry)
    return Circuit(m, tuple(gates), tuple(outputs))


def decrement_circuit(m: int) -> Circuit:
    """m inputs -> m outputs computing value-1 mod 2^m (ripple borrow)."""
    if m < 1:
        raise ValueError("decrement needs m >= 1")
    gates: list[Gate] = []

    def add(op: str, *operands: int) -> int:
        gates.append(Gate(op, tuple(operands)))
        return m + len(gates) - 1

    # borrow into bit i is 1 iff bits 0..i-1 are all 0.
    outputs = [add("NOT", 0)]
    borrow = outputs[0]
    for i in range(1, m):
        either = add("OR", i, borrow)
        both = add("AND", i, borrow)
        not_both = add("NOT", both)
        outputs.append(add("AND", either, not_both))
        not_i = add("NOT", i)
        borrow = add("AND", not_i, borrow)
    return Circuit(m, tuple(gates), tuple(outputs))


def circuit_to_formula(
    circuit: Circuit,
    input_vars: list[str],
    gate_vars: list[str],
    output_vars: list[str],
) -> Formula:
    """Consistency formula: one biconditional per gate and per output;
    it holds exactly when the gate and output variables carry the values
    the circuit computes from the inputs."""
    if len(input_vars) != circuit.n_inputs:
        raise ValueError("input variable list does not match circuit arity")
    if len(gate_vars) != len(circuit.gates):
        raise ValueError("gate variable list does not match gate count")
    if len(output_vars) != len(circuit.outputs):
        raise ValueError("output variable list does not match output count")

    def ref(i: int) -> Formula:
        if i < circuit.n_inputs:
            return Atom(input_vars[i])
        return Atom(gate_vars[i - circuit.n_inputs])

    parts: list[Formula] = []
    for j, gate in enumerate(circuit.gates):
        if gate.op == "NOT":
            expr: Formula = Not(ref(gate.operands[0]))
        elif gate.op == "AND":
            expr = And(ref(gate.operands[0]), ref(gate.operands[1]))
        else:
            expr = Or(ref(gate.operands[0]), ref(gate.operands[1]))
        parts.append(iff(Atom(gate_vars[j]), expr))
    for name, src in zip(output_vars, circuit.outputs):
        parts.append(iff(Atom(name), ref(src)))
    return and_all(parts)
