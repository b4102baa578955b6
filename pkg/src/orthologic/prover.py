"""Forward-saturation entailment prover for orthologic.

Decides whether an inequality ``lhs <= rhs`` holds in every ortholattice
satisfying a finite set of axiom inequalities.  Goals and axioms are compiled
into sequents of two right-annotated NNF formulas; saturation then closes the
proven set under the six rules (Hyp, Ax, Cut restricted to axiom formulas,
And-Right, Or-Right, Replace) using index maps so each candidate deduction is
attempted a bounded number of times.  Worst-case O(n^2 (1+|A|)) deduction
attempts and O(n^2) retained sequents over a universe of n formulas.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Iterable

from .formula import AND, NOT, OR, VAR, FormulaStore

Sequent = tuple[int, int]

RULE_AX = "Ax"
RULE_HYP = "Hyp"
RULE_CUT = "Cut"
RULE_AND_R = "AndR"
RULE_OR_R = "OrR"
RULE_REPLACE = "Replace"


class Verdict(enum.Enum):
    PROVED = "proved"
    NOT_PROVABLE = "not-provable"
    LIMIT_EXCEEDED = "limit-exceeded"


class LimitExceededError(Exception):
    """Raised by callers that cannot proceed past a resource-limited run."""

    def __init__(self, message: str, proven_count: int, attempts: int):
        super().__init__(f"{message} (proven={proven_count}, attempts={attempts})")
        self.proven_count = proven_count
        self.attempts = attempts


def sequent(a: int, b: int) -> Sequent:
    """Canonical unordered pair of formula ids."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class DerivationRecord:
    rule: str
    premises: tuple[Sequent, ...] = ()


@dataclass(frozen=True)
class AxiomSet:
    """Axioms in right-only NNF sequent form, plus their formula closure."""

    sequents: tuple[Sequent, ...]
    formulas: frozenset[int]  # components and their inverses


class EntailmentState:
    """Mutable saturation state for one proof instance (single-threaded)."""

    def __init__(self, store: FormulaStore, universe: frozenset[int], fifo: bool = False,
                 record_derivations: bool = True):
        self.store = store
        self.universe = universe
        self.fifo = fifo
        self.record_derivations = record_derivations
        # a -> partners k such that (a and k) or (k and a) is in the universe
        self.conj_partners: dict[int, tuple[int, ...]] = {}
        # unordered child pair -> conjunction nodes over exactly that pair
        self.conj_nodes: dict[Sequent, tuple[int, ...]] = {}
        # a -> disjunction nodes of the universe having a as a child
        self.disj_parents: dict[int, tuple[int, ...]] = {}
        # axiom formula a -> {b | (inverse(a), b) proven}; feeds the Cut rule
        self.cut_index: dict[int, set[int]] = {}
        # (b, k) -> conjunction nodes over {a, k} such that (a, b) is proven
        self.conj_index: dict[tuple[int, int], set[int]] = {}
        self.proven: set[Sequent] = set()
        self.worklist: list[Sequent] = []
        self.pop_cursor = 0  # FIFO mode reads the worklist through this cursor
        self.order: dict[Sequent, int] = {}
        self.derivations: dict[Sequent, DerivationRecord] = {}
        self.processed: set[Sequent] = set()  # populated in debug mode only
        self.attempts = 0
        self.derivation_error: Sequent | None = None

        partners: dict[int, set[int]] = {}
        pair_nodes: dict[Sequent, list[int]] = {}
        parents: dict[int, set[int]] = {}
        for f in universe:
            kind = store.kind(f)
            if kind == AND:
                a, b = store.left(f), store.right(f)
                partners.setdefault(a, set()).add(b)
                partners.setdefault(b, set()).add(a)
                pair_nodes.setdefault(sequent(a, b), []).append(f)
            elif kind == OR:
                a, b = store.left(f), store.right(f)
                parents.setdefault(a, set()).add(f)
                parents.setdefault(b, set()).add(f)
        self.conj_partners = {k: tuple(sorted(v)) for k, v in partners.items()}
        self.conj_nodes = {k: tuple(sorted(v)) for k, v in pair_nodes.items()}
        self.disj_parents = {k: tuple(sorted(v)) for k, v in parents.items()}

    def seed(self, seq: Sequent, rule: str) -> None:
        if seq not in self.proven:
            self.proven.add(seq)
            self.order[seq] = len(self.order)
            if self.record_derivations:
                self.derivations[seq] = DerivationRecord(rule)
            self.worklist.append(seq)


@dataclass
class ProofStats:
    proven_count: int = 0
    attempts: int = 0
    elapsed_ms: float = 0.0


@dataclass
class ProofResult:
    verdict: Verdict
    stats: ProofStats
    goal: Sequent
    axioms: AxiomSet
    state: EntailmentState

    @property
    def proved(self) -> bool:
        return self.verdict is Verdict.PROVED


def fresh_variable(store: FormulaStore, formulas: Iterable[int]) -> str:
    """A variable name not occurring in any of the given formulas."""
    used: set[str] = set()
    for f in formulas:
        used |= store.variables(f)
    i = 0
    while f"_z{i}" in used:
        i += 1
    return f"_z{i}"


def right_only(store: FormulaStore, lhs: int, rhs: int) -> Sequent:
    """Compile an inequality into the equiprovable two-right-NNF sequent.

    Inputs must already be constant-free.
    """
    return sequent(store.inverse(store.nnf(lhs)), store.nnf(rhs))


def prepare_goal(
    store: FormulaStore,
    lhs: int,
    rhs: int,
    axioms: Iterable[tuple[int, int]] = (),
    fifo: bool = False,
    record_derivations: bool = True,
) -> tuple[Sequent, AxiomSet, EntailmentState]:
    """Build the seeded saturation state for the goal ``lhs <= rhs``.

    Top/Bot occurrences are first rewritten as ``z or not z`` / ``z and not z``
    for a fresh reserved variable, so saturation never meets a constant.  The
    universe is the subformula closure of the compiled goal and axioms
    together with all inverses; the worklist starts with the axiom sequents
    and a Hyp sequent ``(x, not x)`` for every variable of the universe.
    """
    axiom_pairs = [(a, b) for a, b in axioms]
    everything = [lhs, rhs] + [f for pair in axiom_pairs for f in pair]
    z = store.var(fresh_variable(store, everything))
    top_sub = store.disj(z, store.neg(z))
    bot_sub = store.conj(z, store.neg(z))

    def compile_pair(a: int, b: int) -> Sequent:
        a = store.replace_constants(a, top_sub, bot_sub)
        b = store.replace_constants(b, top_sub, bot_sub)
        return right_only(store, a, b)

    goal = compile_pair(lhs, rhs)
    axiom_sequents = tuple(compile_pair(a, b) for a, b in axiom_pairs)
    axiom_formulas: set[int] = set()
    for a, b in axiom_sequents:
        axiom_formulas.update((a, b, store.inverse(a), store.inverse(b)))

    subs: set[int] = set()
    for a, b in (goal,) + axiom_sequents:
        subs |= store.subformula_ids(a)
        subs |= store.subformula_ids(b)
    universe = frozenset(subs | {store.inverse(f) for f in subs})

    state = EntailmentState(store, universe, fifo=fifo, record_derivations=record_derivations)
    axiom_set = AxiomSet(axiom_sequents, frozenset(axiom_formulas))
    for seq in axiom_sequents:
        state.seed(seq, RULE_AX)
    for f in sorted(universe):
        if store.kind(f) == VAR:
            state.seed(sequent(f, store.inverse(f)), RULE_HYP)
    return goal, axiom_set, state


def saturate(
    state: EntailmentState,
    goal: Sequent,
    axioms: AxiomSet,
    max_sequents: int | None = None,
    timeout_ms: float | None = None,
    debug_invariants: bool = False,
) -> tuple[Verdict, ProofStats]:
    """Run the worklist to exhaustion or until the goal is proven.

    Every deduction candidate increments ``state.attempts``; a sequent enters
    the worklist at most once.  The goal is tested when popped and, as a
    strictly-earlier shortcut, when pushed.
    """
    store = state.store
    start = time.perf_counter()
    proven = state.proven
    worklist = state.worklist
    order = state.order
    derivations = state.derivations
    record = state.record_derivations
    conj_partners = state.conj_partners
    conj_nodes = state.conj_nodes
    disj_parents = state.disj_parents
    cut_index = state.cut_index
    conj_index = state.conj_index
    axiom_formulas = axioms.formulas
    inverse = store.inverse
    fifo = state.fifo
    universe_sorted = sorted(state.universe)
    empty: tuple[int, ...] = ()

    def stats() -> ProofStats:
        return ProofStats(
            proven_count=len(proven),
            attempts=state.attempts,
            elapsed_ms=(time.perf_counter() - start) * 1000.0,
        )

    def push(seq: Sequent, rule: str, premises: tuple[Sequent, ...]) -> bool:
        """Attempt one deduction; True when the goal was just proven."""
        state.attempts += 1
        if seq in proven:
            return False
        proven.add(seq)
        order[seq] = len(order)
        if record:
            derivations[seq] = DerivationRecord(rule, premises)
        worklist.append(seq)
        return seq == goal

    if goal in proven:
        return Verdict.PROVED, stats()

    while True:
        if fifo:
            if state.pop_cursor >= len(worklist):
                break
            popped = worklist[state.pop_cursor]
            state.pop_cursor += 1
        else:
            if not worklist:
                break
            popped = worklist.pop()
        if max_sequents is not None and len(proven) > max_sequents:
            return Verdict.LIMIT_EXCEEDED, stats()
        if timeout_ms is not None and (time.perf_counter() - start) * 1000.0 > timeout_ms:
            return Verdict.LIMIT_EXCEEDED, stats()

        a, b = popped
        if popped == goal:
            return Verdict.PROVED, stats()

        if a in axiom_formulas:
            cut_index.setdefault(inverse(a), set()).add(b)
        if b in axiom_formulas:
            cut_index.setdefault(inverse(b), set()).add(a)

        for k in conj_partners.get(a, empty):
            pair = (a, k) if a <= k else (k, a)
            conj_index.setdefault((b, k), set()).update(conj_nodes[pair])
        if a != b:
            for k in conj_partners.get(b, empty):
                pair = (b, k) if b <= k else (k, b)
                conj_index.setdefault((a, k), set()).update(conj_nodes[pair])

        done = False
        for other, fixed in ((a, b), (b, a)) if a != b else ((a, b),):
            for phi in disj_parents.get(other, empty):
                if push(sequent(phi, fixed), RULE_OR_R, (popped,)):
                    done = True
                    break
            if done:
                break
            for phi in conj_index.get((fixed, other), empty):
                x, y = store.left(phi), store.right(phi)
                sibling = y if x == other else x
                if push(sequent(phi, fixed), RULE_AND_R, (popped, sequent(sibling, fixed))):
                    done = True
                    break
            if done:
                break
            for phi in cut_index.get(other, empty):
                if push(sequent(phi, fixed), RULE_CUT, (popped, sequent(inverse(other), phi))):
                    done = True
                    break
            if done:
                break
        if done:
            return Verdict.PROVED, stats()

        if a == b:
            for phi in universe_sorted:
                if push(sequent(phi, a), RULE_REPLACE, (popped,)):
                    return Verdict.PROVED, stats()

        if debug_invariants:
            state.processed.add(popped)
            _assert_invariants(state, axioms)

    return Verdict.NOT_PROVABLE, stats()


def _assert_invariants(state: EntailmentState, axioms: AxiomSet) -> None:
    store = state.store
    inverse = store.inverse
    # cut index: keys are axiom formulas, entries mirror proven sequents
    for key, vals in state.cut_index.items():
        assert key in axioms.formulas, "cut index key outside axiom formulas"
        for v in vals:
            assert sequent(inverse(key), v) in state.proven
    # every processed sequent with an axiom-formula component is registered
    for a, b in state.processed:
        for x, y in ((a, b), (b, a)):
            if x in axioms.formulas:
                assert y in state.cut_index.get(inverse(x), ())
    # conjunction index entries pair a proven partner with the key formula
    for (b, k), nodes in state.conj_index.items():
        for m in nodes:
            x, y = store.left(m), store.right(m)
            assert k in (x, y), "conjunction node lacks the key child"
            other = y if x == k else x
            assert sequent(other, b) in state.proven
    # per-b space bound: each conjunction node appears under at most two keys
    per_b: dict[int, int] = {}
    for (b, _k), nodes in state.conj_index.items():
        per_b[b] = per_b.get(b, 0) + len(nodes)
    for total in per_b.values():
        assert total <= 2 * len(state.universe), "conjunction index space bound violated"


def prove(
    store: FormulaStore,
    lhs: int,
    rhs: int,
    axioms: Iterable[tuple[int, int]] = (),
    max_sequents: int | None = None,
    timeout_ms: float | None = None,
    fifo: bool = False,
    record_derivations: bool = True,
    debug_invariants: bool = False,
) -> ProofResult:
    """Decide ``lhs <= rhs`` under the axiom inequalities; verdict plus stats."""
    goal, axiom_set, state = prepare_goal(
        store, lhs, rhs, axioms, fifo=fifo, record_derivations=record_derivations
    )
    verdict, stats = saturate(
        state, goal, axiom_set,
        max_sequents=max_sequents, timeout_ms=timeout_ms,
        debug_invariants=debug_invariants,
    )
    return ProofResult(verdict, stats, goal, axiom_set, state)


def check_derivations(result_or_state, axioms: AxiomSet | None = None) -> bool:
    """Replay every recorded derivation against its rule schema.

    True iff each proven sequent carries a record whose premises were proven
    strictly earlier and instantiate the rule, with Cut formulas drawn from
    the axiom formulas.  On failure the offending sequent is left on the
    state as ``derivation_error``.
    """
    if isinstance(result_or_state, ProofResult):
        state = result_or_state.state
        axioms = result_or_state.axioms
    else:
        state = result_or_state
        if axioms is None:
            raise ValueError("axioms required when passing a bare state")
    state.derivation_error = None
    for seq in state.proven:
        if not _check_one(state.store, state, axioms, seq):
            state.derivation_error = seq
            return False
    return True


def _check_one(store: FormulaStore, state: EntailmentState, axioms: AxiomSet, seq: Sequent) -> bool:
    record = state.derivations.get(seq)
    if record is None:
        return False
    my_order = state.order[seq]
    for p in record.premises:
        if p not in state.proven or state.order[p] >= my_order:
            return False
    a, b = seq
    rule = record.rule
    if rule == RULE_AX:
        return seq in axioms.sequents and not record.premises
    if rule == RULE_HYP:
        if record.premises:
            return False
        return any(
            store.kind(x) == VAR and store.kind(y) == NOT and store.left(y) == x
            for x, y in ((a, b), (b, a))
        )
    if rule == RULE_OR_R:
        if len(record.premises) != 1:
            return False
        (p,) = record.premises
        for phi, other in ((a, b), (b, a)):
            if store.kind(phi) == OR:
                if p in (sequent(store.left(phi), other), sequent(store.right(phi), other)):
                    return True
        return False
    if rule == RULE_AND_R:
        if len(record.premises) != 2:
            return False
        got = sorted(record.premises)
        for phi, other in ((a, b), (b, a)):
            if store.kind(phi) == AND:
                want = sorted((sequent(store.left(phi), other), sequent(store.right(phi), other)))
                if got == want:
                    return True
        return False
    if rule == RULE_CUT:
        if len(record.premises) != 2:
            return False
        p1, p2 = record.premises
        for q1, q2 in ((p1, p2), (p2, p1)):
            for gamma in set(q1):
                if gamma not in axioms.formulas:
                    continue
                inv = store.inverse(gamma)
                if inv not in q2:
                    continue
                x = q1[1] if q1[0] == gamma else q1[0]
                y = q2[1] if q2[0] == inv else q2[0]
                if sequent(x, y) == seq:
                    return True
        return False
    if rule == RULE_REPLACE:
        if len(record.premises) != 1:
            return False
        (p,) = record.premises
        return p[0] == p[1] and p[0] in seq
    return False
