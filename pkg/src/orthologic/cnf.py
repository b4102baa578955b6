"""Tseitin clausification, miter construction, and DIMACS read/write.

CNF variables are assigned deterministically: one per input variable (1..V,
sorted by name), an optional constant-truth variable when Top/Bot occurs, then
one per distinct And/Or node in topological (children-first) order.  Emitted
files are byte-stable for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import AND, BOT, NOT, TOP, VAR, FormulaStore


class CnfError(Exception):
    pass


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[list[int]]
    comments: list[str] = field(default_factory=list)

    def validate(self) -> None:
        for clause in self.clauses:
            if not clause:
                raise CnfError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range 1..{self.num_vars}")


class _Encoder:
    """Assigns CNF variables and emits gate clauses for one or two formulas."""

    def __init__(self, store: FormulaStore, input_vars: dict[str, int], const_var: int | None):
        self.store = store
        self.input_vars = input_vars
        self.const_var = const_var
        self.clauses: list[list[int]] = []
        self.next_var = (const_var if const_var is not None else len(input_vars)) + 1

    def encode(self, f: int, lits: dict[int, int]) -> int:
        """Clausify f, returning its literal; `lits` memoizes node literals."""
        store = self.store
        stack = [f]
        while stack:
            g = stack[-1]
            if g in lits:
                stack.pop()
                continue
            kind = store.kind(g)
            if kind == VAR:
                lits[g] = self.input_vars[store.name(g)]
                stack.pop()
            elif kind == TOP:
                lits[g] = self.const_var
                stack.pop()
            elif kind == BOT:
                lits[g] = -self.const_var
                stack.pop()
            elif kind == NOT:
                child = store.left(g)
                if child in lits:
                    lits[g] = -lits[child]
                    stack.pop()
                else:
                    stack.append(child)
            else:
                a, b = store.left(g), store.right(g)
                pending = [c for c in (a, b) if c not in lits]
                if pending:
                    stack.extend(pending)
                    continue
                v = self.next_var
                self.next_var += 1
                la, lb = lits[a], lits[b]
                if kind == AND:
                    self.clauses.extend(([-v, la], [-v, lb], [v, -la, -lb]))
                else:
                    self.clauses.extend(([v, -la], [v, -lb], [-v, la, lb]))
                lits[g] = v
                stack.pop()
        return lits[f]


def _has_constant(store: FormulaStore, roots: list[int]) -> bool:
    return any(
        store.kind(g) in (TOP, BOT) for f in roots for g in store.subformula_ids(f)
    )


def tseitin(store: FormulaStore, f: int, assert_root: bool = True) -> CnfInstance:
    """Equisatisfiable CNF for f; with assert_root, SAT iff f is satisfiable.

    And gate g = a.b emits (-g a)(-g b)(g -a -b); Or gate g = a+b emits
    (g -a)(g -b)(-g a b); negation is literal polarity.  A constant-truth
    variable (forced by a unit clause) stands in for Top/Bot when present.
    """
    names = sorted(store.variables(f))
    input_vars = {name: k + 1 for k, name in enumerate(names)}
    const_var = len(names) + 1 if _has_constant(store, [f]) else None
    enc = _Encoder(store, input_vars, const_var)
    if const_var is not None:
        enc.clauses.append([const_var])
    root = enc.encode(f, {})
    if assert_root:
        enc.clauses.append([root])
    comments = [f"{len(names)} input variables, {enc.next_var - 1} total"]
    cnf = CnfInstance(enc.next_var - 1, enc.clauses, comments)
    cnf.validate()
    return cnf


def miter_cnf(store: FormulaStore, f: int, g: int, share_subterms: bool = False) -> CnfInstance:
    """CNF asserting that f and g disagree on some input; UNSAT iff equivalent.

    Input variables are shared between the sides.  With share_subterms the
    sides also share gate variables for identical interned subnodes; otherwise
    each side gets fresh internal variables (the default, which keeps the
    instances hard: cross-side sharing would hand a solver the equivalence).
    One side's variables may be a subset of the other's (normalization can
    eliminate redundant inputs); disjoint variable sets are rejected.
    """
    vf, vg = store.variables(f), store.variables(g)
    if not (vf <= vg or vg <= vf):
        raise CnfError(
            f"variable-set mismatch: only one side uses {sorted(vf ^ vg)}"
        )
    names = sorted(vf | vg)
    input_vars = {name: k + 1 for k, name in enumerate(names)}
    const_var = len(names) + 1 if _has_constant(store, [f, g]) else None
    enc = _Encoder(store, input_vars, const_var)
    if const_var is not None:
        enc.clauses.append([const_var])
    shared: dict[int, int] = {}
    p = enc.encode(f, shared)
    q = enc.encode(g, shared if share_subterms else {})
    enc.clauses.append([p, q])
    enc.clauses.append([-p, -q])
    comments = [
        f"miter over {len(names)} shared inputs, "
        f"{'shared' if share_subterms else 'independent'} subterms",
    ]
    cnf = CnfInstance(enc.next_var - 1, enc.clauses, comments)
    cnf.validate()
    return cnf


def emit_dimacs(cnf: CnfInstance) -> str:
    lines = [f"c {text}" for text in cnf.comments]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfInstance:
    num_vars = None
    num_clauses = None
    comments: list[str] = []
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[2:] if line.startswith("c ") else line[1:])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"bad problem line (line {lineno})")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise CnfError(f"clause before problem line (line {lineno})")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise CnfError("unterminated final clause")
    if num_vars is None:
        raise CnfError("missing problem line")
    if num_clauses is not None and num_clauses != len(clauses):
        raise CnfError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    cnf = CnfInstance(num_vars, clauses, comments)
    cnf.validate()
    return cnf


def satisfiable(cnf: CnfInstance) -> bool:
    """Complete satisfiability check by DPLL with unit propagation.

    A trusted-but-slow decision procedure for tests and desk-scale checks; it
    is not meant to replace an external solver on large instances.  Branches
    on the lowest unassigned variable, which on Tseitin-style instances means
    inputs first, letting propagation settle the derived gate variables.
    """

    def propagate(clauses: list[list[int]], unit: int) -> list[list[int]] | None:
        out = []
        for clause in clauses:
            if unit in clause:
                continue
            if -unit in clause:
                reduced = [lit for lit in clause if lit != -unit]
                if not reduced:
                    return None
                out.append(reduced)
            else:
                out.append(clause)
        return out

    def solve(clauses: list[list[int]]) -> bool:
        while True:
            if not clauses:
                return True
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            clauses = propagate(clauses, unit)
            if clauses is None:
                return False
        var = min(abs(lit) for clause in clauses for lit in clause)
        for choice in (var, -var):
            branch = propagate(clauses, choice)
            if branch is not None and solve(branch):
                return True
        return False

    return solve([list(c) for c in cnf.clauses])
