"""Slow but trusted deciders used to cross-check the fast engine.

``naive_prove`` performs exhaustive backward proof search over right-only NNF
sequents with cycle blocking on the current branch and deliberately no
memoization across branches: the implementation is meant to be obviously
correct rather than fast.  ``brute_force_tautology`` checks classical validity
by bit-parallel evaluation over every assignment.  The enumeration helpers
build the small deterministic formula pools the differential tests run on.
"""

from __future__ import annotations

import random
import sys

from .formula import AND, BOT, NOT, OR, TOP, VAR, FormulaError, FormulaStore
from .prover import AxiomSet, Sequent

MAX_POOL_VARIABLES = 3
MAX_POOL_CONNECTIVES = 9
MAX_BRUTE_FORCE_VARIABLES = 20


class DepthLimitExceeded(Exception):
    """Backward search ran past its depth budget (distinct from NotProvable)."""


def default_depth_limit(universe_size: int) -> int:
    # safety net above the longest possible duplicate-free proof path
    return 2 * (universe_size * universe_size + 1)


def naive_prove(
    store: FormulaStore,
    goal: Sequent,
    axioms: AxiomSet,
    depth_limit: int | None = None,
) -> bool:
    """Exhaustive backward search; True iff the sequent is provable.

    Expects the goal and axioms in the right-only NNF form produced by
    ``prepare_goal``.  At each sequent it tries Hyp, Ax, the Or/And right
    decompositions of both components, Replace, and Cut restricted to axiom
    formulas.  A branch that revisits a sequent already on its path fails;
    nothing is memoized across branches, so runtime is exponential but every
    verdict is independent of exploration history.
    """
    universe: set[int] = set()
    for x, y in (goal,) + axioms.sequents:
        universe |= store.subformula_ids(x)
        universe |= store.subformula_ids(y)
    universe |= {store.inverse(f) for f in universe}
    if depth_limit is None:
        depth_limit = default_depth_limit(len(universe))

    # dense per-id tables for the hot recursion
    top = max(universe) + 1
    kinds = [0] * top
    lefts = [0] * top
    rights = [0] * top
    invs = [0] * top
    for f in universe:
        k = store.kind(f)
        kinds[f] = k
        if k in (NOT, AND, OR):
            lefts[f] = store.left(f)
        if k in (AND, OR):
            rights[f] = store.right(f)
        invs[f] = store.inverse(f)

    axiom_sequents = frozenset(axioms.sequents)
    cut_formulas = sorted(axioms.formulas)
    hyp_pairs = frozenset(
        (f, invs[f]) if f <= invs[f] else (invs[f], f)
        for f in universe
        if kinds[f] == VAR
    )
    # recursion headroom, capped so a runaway search raises instead of
    # exhausting the C stack
    needed = min(depth_limit * 4 + 200, 30_000)
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)

    path: set[Sequent] = set()

    def search(p: int, q: int, depth: int) -> bool:
        if p > q:
            p, q = q, p
        s = (p, q)
        if s in hyp_pairs or s in axiom_sequents:
            return True
        if s in path:
            return False
        if depth > depth_limit:
            raise DepthLimitExceeded(f"backward search exceeded depth {depth_limit}")
        path.add(s)
        try:
            nd = depth + 1
            for this, that in ((p, q), (q, p)):
                k = kinds[this]
                if k == OR:
                    if search(lefts[this], that, nd) or search(rights[this], that, nd):
                        return True
                elif k == AND:
                    if search(lefts[this], that, nd) and search(rights[this], that, nd):
                        return True
                if this == that:
                    break
            # Replace: a component proven against itself yields anything
            if search(p, p, nd):
                return True
            if p != q and search(q, q, nd):
                return True
            for gamma in cut_formulas:
                if search(p, gamma, nd) and search(invs[gamma], q, nd):
                    return True
            return False
        finally:
            path.discard(s)

    return search(goal[0], goal[1], 1)


# ----------------------------------------------------------------------
# classical semantics

def truth_column(store: FormulaStore, f: int, var_order: list[str]) -> int:
    """Truth table of f as a bitmask over all 2^v assignments of var_order.

    Row m assigns variable i the i-th bit of m; bit m of the result is the
    value of f under row m.
    """
    v = len(var_order)
    width = 1 << v
    mask = (1 << width) - 1
    columns: dict[str, int] = {}
    for i, name in enumerate(var_order):
        block = 1 << (1 << i)
        columns[name] = (mask // (block + 1)) * block
    values: dict[int, int] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if g in values:
            continue
        k = store.kind(g)
        if k == VAR:
            try:
                values[g] = columns[store.name(g)]
            except KeyError:
                raise FormulaError(f"variable {store.name(g)!r} not in var_order") from None
        elif k == TOP:
            values[g] = mask
        elif k == BOT:
            values[g] = 0
        elif k == NOT:
            c = store.left(g)
            if c in values:
                values[g] = values[c] ^ mask
            else:
                stack.append(g)
                stack.append(c)
        else:
            a, b = store.left(g), store.right(g)
            if a in values and b in values:
                values[g] = values[a] & values[b] if k == AND else values[a] | values[b]
            else:
                stack.append(g)
                if b not in values:
                    stack.append(b)
                if a not in values:
                    stack.append(a)
    return values[f]


def brute_force_tautology(store: FormulaStore, f: int) -> bool:
    """True iff f evaluates to true under every assignment (at most 20 vars)."""
    names = sorted(store.variables(f))
    if len(names) > MAX_BRUTE_FORCE_VARIABLES:
        raise FormulaError(
            f"brute force limited to {MAX_BRUTE_FORCE_VARIABLES} variables, got {len(names)}"
        )
    width = 1 << len(names)
    return truth_column(store, f, names) == (1 << width) - 1


def classically_equivalent(store: FormulaStore, f: int, g: int) -> bool:
    """Brute-force equivalence of f and g over the union of their variables."""
    names = sorted(store.variables(f) | store.variables(g))
    if len(names) > MAX_BRUTE_FORCE_VARIABLES:
        raise FormulaError(
            f"brute force limited to {MAX_BRUTE_FORCE_VARIABLES} variables, got {len(names)}"
        )
    return truth_column(store, f, names) == truth_column(store, g, names)


# ----------------------------------------------------------------------
# formula pools

def enumerate_formulas(store: FormulaStore, variables: int, max_connectives: int):
    """All NNF formulas over v0..v(variables-1) with up to the given connectives.

    Deterministic order: by connective count, then split point, then operands,
    with And before Or.  Leaves are the positive then negated variables.
    """
    if variables > MAX_POOL_VARIABLES:
        raise FormulaError(f"enumeration pool limited to {MAX_POOL_VARIABLES} variables")
    if max_connectives > MAX_POOL_CONNECTIVES:
        raise FormulaError(f"enumeration pool limited to {MAX_POOL_CONNECTIVES} connectives")
    leaves: list[int] = []
    for i in range(variables):
        x = store.var(f"v{i}")
        leaves.append(x)
        leaves.append(store.neg(x))
    strata: list[list[int]] = [leaves]
    seen: set[int] = set()
    for f in leaves:
        seen.add(f)
        yield f
    for c in range(1, max_connectives + 1):
        stratum: list[int] = []
        for i in range(c):
            for a in strata[i]:
                for b in strata[c - 1 - i]:
                    for kind in (AND, OR):
                        f = store.intern(kind, (a, b))
                        stratum.append(f)
                        if f not in seen:
                            seen.add(f)
                            yield f
        strata.append(stratum)


def _catalan(n: int) -> int:
    result = 1
    for i in range(n):
        result = result * 2 * (2 * i + 1) // (i + 2)
    return result


def random_formula(store: FormulaStore, seed: int, variables: int, connectives: int) -> int:
    """Reproducible random NNF formula with exactly the requested connectives.

    Tree skeletons are drawn uniformly (Catalan-weighted splits), then leaves
    get a uniform variable from v0..v(variables-1) and a uniform polarity.
    Hash-consing can merge identical random subtrees, which would lower the
    shared connective count, so sampling repeats until the count matches.
    """
    rng = random.Random(seed)
    catalan = [_catalan(i) for i in range(connectives + 1)]

    def build(c: int) -> int:
        if c == 0:
            x = store.var(f"v{rng.randrange(variables)}")
            return store.neg(x) if rng.random() < 0.5 else x
        total = catalan[c]
        pick = rng.randrange(total)
        i = 0
        while True:
            weight = catalan[i] * catalan[c - 1 - i]
            if pick < weight:
                break
            pick -= weight
            i += 1
        kind = AND if rng.random() < 0.5 else OR
        return store.intern(kind, (build(i), build(c - 1 - i)))

    while True:
        f = build(connectives)
        if store.connective_count(f) == connectives:
            return f
