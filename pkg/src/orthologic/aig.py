"""ASCII AIGER (aag) circuits: parsing, emission, cones, and conversion.

Combinational circuits only.  Literals follow the AIGER convention:
``variable * 2 + negation_bit``, with 0 the constant false and 1 the constant
true.  Inputs are variables 1..I; every AND gate defines an even literal
strictly above the inputs, at most once, reading only literals defined on
earlier lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import BOT, NOT, OR, TOP, VAR, FormulaStore


class AigError(Exception):
    """Malformed circuit text or structurally invalid circuit."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"{message} (line {line})")
        self.line = line


@dataclass
class AigCircuit:
    num_inputs: int
    gates: list[tuple[int, int, int]]
    outputs: list[int]
    input_symbols: dict[int, str] = field(default_factory=dict)
    output_symbols: dict[int, str] = field(default_factory=dict)
    comments: list[str] = field(default_factory=list)

    @property
    def max_var(self) -> int:
        top = self.num_inputs
        for lhs, _, _ in self.gates:
            top = max(top, lhs >> 1)
        return top

    def input_name(self, index: int) -> str:
        """Formula variable used for input `index` (0-based): i0, i1, ..."""
        return f"i{index}"

    def validate(self) -> None:
        defined = set(range(1, self.num_inputs + 1))
        for lhs, rhs0, rhs1 in self.gates:
            if lhs & 1:
                raise AigError(f"gate literal {lhs} is negated")
            var = lhs >> 1
            if var <= self.num_inputs:
                raise AigError(f"gate literal {lhs} collides with an input")
            if var in defined:
                raise AigError(f"gate variable {var} defined twice")
            for rhs in (rhs0, rhs1):
                rv = rhs >> 1
                if rv != 0 and rv not in defined:
                    raise AigError(f"gate {lhs} reads undefined literal {rhs}")
            defined.add(var)
        for lit in self.outputs:
            if (lit >> 1) != 0 and (lit >> 1) not in defined:
                raise AigError(f"output reads undefined literal {lit}")


def parse_aag(text: str) -> AigCircuit:
    """Parse an ASCII AIGER file.  Latches are rejected (combinational only)."""
    lines = text.splitlines()
    if not lines:
        raise AigError("empty file", 1)
    header = lines[0].split()
    if len(header) != 6 or header[0] != "aag":
        raise AigError("expected header 'aag M I L O A'", 1)
    try:
        m, i, l, o, a = (int(x) for x in header[1:])
    except ValueError:
        raise AigError("non-numeric header field", 1) from None
    if l > 0:
        raise AigError("sequential circuits unsupported (latches present)", 1)
    if any(x < 0 for x in (m, i, l, o, a)):
        raise AigError("negative header field", 1)

    def body_line(idx: int, what: str) -> str:
        if idx >= len(lines):
            raise AigError(f"missing {what} line", len(lines) + 1)
        return lines[idx]

    def ints(idx: int, count: int, what: str) -> list[int]:
        raw = body_line(idx, what).split()
        if len(raw) != count:
            raise AigError(f"expected {count} integers on {what} line", idx + 1)
        try:
            vals = [int(x) for x in raw]
        except ValueError:
            raise AigError(f"non-numeric {what} literal", idx + 1) from None
        if any(v < 0 for v in vals):
            raise AigError(f"negative {what} literal", idx + 1)
        return vals

    pos = 1
    for k in range(i):
        (lit,) = ints(pos, 1, "input")
        if lit != 2 * (k + 1):
            raise AigError(f"input {k} must be literal {2 * (k + 1)}, got {lit}", pos + 1)
        pos += 1
    outputs = []
    for _ in range(o):
        (lit,) = ints(pos, 1, "output")
        outputs.append(lit)
        pos += 1
    gates = []
    for _ in range(a):
        lhs, rhs0, rhs1 = ints(pos, 3, "gate")
        gates.append((lhs, rhs0, rhs1))
        pos += 1

    input_symbols: dict[int, str] = {}
    output_symbols: dict[int, str] = {}
    comments: list[str] = []
    in_comments = False
    while pos < len(lines):
        line = lines[pos]
        if in_comments:
            comments.append(line)
        elif line == "c":
            in_comments = True
        elif line[:1] in ("i", "o") and " " in line:
            head, name = line.split(" ", 1)
            try:
                index = int(head[1:])
            except ValueError:
                raise AigError(f"bad symbol table entry {line!r}", pos + 1) from None
            table = input_symbols if head[0] == "i" else output_symbols
            limit = i if head[0] == "i" else o
            if not 0 <= index < limit:
                raise AigError(f"symbol index out of range in {line!r}", pos + 1)
            table[index] = name
        elif line.strip() == "":
            pass
        else:
            raise AigError(f"unexpected line {line!r}", pos + 1)
        pos += 1

    circuit = AigCircuit(i, gates, outputs, input_symbols, output_symbols, comments)
    try:
        circuit.validate()
    except AigError as err:
        raise AigError(str(err), None) from None
    if circuit.max_var > m:
        raise AigError(f"header M={m} below used variable {circuit.max_var}", 1)
    return circuit


def emit_aag(circuit: AigCircuit) -> str:
    """Serialize back to ASCII AIGER; inverse of parse_aag up to header M."""
    out = [f"aag {circuit.max_var} {circuit.num_inputs} 0 {len(circuit.outputs)} {len(circuit.gates)}"]
    out.extend(str(2 * (k + 1)) for k in range(circuit.num_inputs))
    out.extend(str(lit) for lit in circuit.outputs)
    out.extend(f"{lhs} {rhs0} {rhs1}" for lhs, rhs0, rhs1 in circuit.gates)
    for idx in sorted(circuit.input_symbols):
        out.append(f"i{idx} {circuit.input_symbols[idx]}")
    for idx in sorted(circuit.output_symbols):
        out.append(f"o{idx} {circuit.output_symbols[idx]}")
    if circuit.comments:
        out.append("c")
        out.extend(circuit.comments)
    return "\n".join(out) + "\n"


def simulate(circuit: AigCircuit, input_bits: list[int]) -> list[int]:
    """Evaluate the circuit on one 0/1 input vector."""
    if len(input_bits) != circuit.num_inputs:
        raise AigError(
            f"expected {circuit.num_inputs} input bits, got {len(input_bits)}"
        )
    values = {0: 0}
    for k, bit in enumerate(input_bits):
        values[k + 1] = 1 if bit else 0

    def read(lit: int) -> int:
        return values[lit >> 1] ^ (lit & 1)

    for lhs, rhs0, rhs1 in circuit.gates:
        values[lhs >> 1] = read(rhs0) & read(rhs1)
    return [read(lit) for lit in circuit.outputs]


def cone_formula(store: FormulaStore, circuit: AigCircuit, output_index: int) -> int:
    """Formula over i0..i(I-1) computing the given output bit.

    Gate sharing becomes DAG sharing through interning; constant literals map
    to Top/Bot.
    """
    if not 0 <= output_index < len(circuit.outputs):
        raise AigError(
            f"output index {output_index} out of range (circuit has {len(circuit.outputs)})"
        )
    defs = {lhs >> 1: (rhs0, rhs1) for lhs, rhs0, rhs1 in circuit.gates}
    memo: dict[int, int] = {}  # circuit variable -> formula id

    def negate(f: int) -> int:
        if f == store.bot:
            return store.top
        if f == store.top:
            return store.bot
        return store.neg(f)

    root = circuit.outputs[output_index]
    stack = [root >> 1]
    while stack:
        v = stack[-1]
        if v in memo:
            stack.pop()
            continue
        if v == 0:
            memo[v] = store.bot
            stack.pop()
        elif v <= circuit.num_inputs:
            memo[v] = store.var(circuit.input_name(v - 1))
            stack.pop()
        else:
            rhs0, rhs1 = defs[v]
            missing = [k for k in (rhs0 >> 1, rhs1 >> 1) if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            a = memo[rhs0 >> 1]
            if rhs0 & 1:
                a = negate(a)
            b = memo[rhs1 >> 1]
            if rhs1 & 1:
                b = negate(b)
            memo[v] = store.conj(a, b)
            stack.pop()

    f = memo[root >> 1]
    return negate(f) if root & 1 else f


def formulas_to_circuit(
    store: FormulaStore, roots: list[int], input_order: list[str] | None = None
) -> AigCircuit:
    """Encode formulas as a multi-output AIG.

    Or nodes become ``not (not a and not b)`` through negation bits, so the
    gate count equals the number of distinct And/Or nodes.  Shared subformulas
    map to shared gates.  ``input_order`` defaults to the sorted union of the
    root variables; extra names are allowed (they become unused inputs).
    """
    names: set[str] = set()
    for f in roots:
        names |= store.variables(f)
    if input_order is None:
        input_order = sorted(names)
    else:
        missing = names - set(input_order)
        if missing:
            raise AigError(f"input_order lacks variables: {sorted(missing)}")
    var_lit = {name: 2 * (k + 1) for k, name in enumerate(input_order)}
    gates: list[tuple[int, int, int]] = []
    next_var = len(input_order) + 1
    lits: dict[int, int] = {}

    def literal(f: int) -> int:
        nonlocal next_var
        stack = [f]
        while stack:
            g = stack[-1]
            if g in lits:
                stack.pop()
                continue
            kind = store.kind(g)
            if kind == VAR:
                lits[g] = var_lit[store.name(g)]
                stack.pop()
            elif kind == TOP:
                lits[g] = 1
                stack.pop()
            elif kind == BOT:
                lits[g] = 0
                stack.pop()
            elif kind == NOT:
                child = store.left(g)
                if child in lits:
                    lits[g] = lits[child] ^ 1
                    stack.pop()
                else:
                    stack.append(child)
            else:
                a, b = store.left(g), store.right(g)
                pending = [c for c in (a, b) if c not in lits]
                if pending:
                    stack.extend(pending)
                    continue
                la, lb = lits[a], lits[b]
                if kind == OR:
                    la ^= 1
                    lb ^= 1
                lhs = 2 * next_var
                next_var += 1
                gates.append((lhs, la, lb))
                lits[g] = lhs ^ 1 if kind == OR else lhs
                stack.pop()
        return lits[f]

    outputs = [literal(f) for f in roots]
    symbols = {k: name for k, name in enumerate(input_order)}
    return AigCircuit(len(input_order), gates, outputs, input_symbols=symbols)


def formula_to_circuit(store: FormulaStore, f: int) -> AigCircuit:
    """Single-output convenience wrapper around formulas_to_circuit."""
    return formulas_to_circuit(store, [f])
