"""Programmatic AIG construction helpers for test fixtures."""

from __future__ import annotations

import random

from orthologic.aig import AigCircuit


class GateBuilder:
    """Builds well-formed combinational AIGs gate by gate."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.gates: list[tuple[int, int, int]] = []
        self.next_var = num_inputs + 1

    def input_lit(self, k: int) -> int:
        assert 0 <= k < self.num_inputs
        return 2 * (k + 1)

    def and_(self, a: int, b: int) -> int:
        lhs = 2 * self.next_var
        self.next_var += 1
        self.gates.append((lhs, a, b))
        return lhs

    def or_(self, a: int, b: int) -> int:
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b ^ 1), self.and_(a ^ 1, b))

    def build(self, outputs: list[int], comments: list[str] | None = None) -> AigCircuit:
        circuit = AigCircuit(
            self.num_inputs, list(self.gates), list(outputs), comments=comments or []
        )
        circuit.validate()
        return circuit


def identity_circuit() -> AigCircuit:
    b = GateBuilder(1)
    return b.build([b.input_lit(0)])


def single_and() -> AigCircuit:
    b = GateBuilder(2)
    return b.build([b.and_(b.input_lit(0), b.input_lit(1))])


def negated_and() -> AigCircuit:
    b = GateBuilder(2)
    return b.build([b.and_(b.input_lit(0), b.input_lit(1)) ^ 1])


def ripple_adder(width: int) -> AigCircuit:
    """width-bit adder: inputs a0..a(w-1), b0..b(w-1); outputs sum bits + carry."""
    b = GateBuilder(2 * width)
    carry = 0  # constant false literal
    sums = []
    for k in range(width):
        a = b.input_lit(k)
        x = b.input_lit(width + k)
        s1 = b.xor(a, x)
        sums.append(b.xor(s1, carry))
        carry = b.or_(b.and_(a, x), b.and_(s1, carry))
    return b.build(sums + [carry])


def ripple_multiplier(width: int) -> AigCircuit:
    """width x width unsigned multiplier with ripple-carry accumulation."""
    b = GateBuilder(2 * width)

    def half_add(x, y):
        return b.xor(x, y), b.and_(x, y)

    def full_add(x, y, c):
        s1, c1 = half_add(x, y)
        s2, c2 = half_add(s1, c)
        return s2, b.or_(c1, c2)

    acc = [0] * (2 * width)  # constant-false accumulator
    for i in range(width):
        partial = [0] * i
        for j in range(width):
            partial.append(b.and_(b.input_lit(i), b.input_lit(width + j)))
        partial.extend([0] * (2 * width - len(partial)))
        carry = 0
        next_acc = []
        for k in range(2 * width):
            s, carry = full_add(acc[k], partial[k], carry)
            next_acc.append(s)
        acc = next_acc
    return b.build(acc)


def random_circuit(seed: int, num_inputs: int, num_gates: int, num_outputs: int) -> AigCircuit:
    rng = random.Random(seed)
    b = GateBuilder(num_inputs)
    available = [b.input_lit(k) for k in range(num_inputs)] + [0]
    for _ in range(num_gates):
        a = rng.choice(available) ^ rng.randrange(2)
        c = rng.choice(available) ^ rng.randrange(2)
        available.append(b.and_(a, c))
    outputs = [rng.choice(available) ^ rng.randrange(2) for _ in range(num_outputs)]
    return b.build(outputs)


def fixture_circuits() -> list[tuple[str, AigCircuit]]:
    """At least 20 named circuits spanning the structures the parser meets."""
    fixtures = [
        ("identity", identity_circuit()),
        ("single_and", single_and()),
        ("negated_and", negated_and()),
        ("adder2", ripple_adder(2)),
        ("adder3", ripple_adder(3)),
        ("adder4", ripple_adder(4)),
        ("mult2", ripple_multiplier(2)),
        ("mult3", ripple_multiplier(3)),
        ("mult4", ripple_multiplier(4)),
    ]
    const_builder = GateBuilder(1)
    fixtures.append(("const_outputs", const_builder.build([0, 1, const_builder.input_lit(0) ^ 1])))
    for seed in range(10):
        fixtures.append(
            (f"random{seed}", random_circuit(seed, 3 + seed % 5, 4 + 3 * seed, 1 + seed % 3))
        )
    assert len(fixtures) >= 20
    return fixtures
