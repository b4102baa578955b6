"""Minimal canonical normal form for formulas under the ortholattice laws.

``normalize`` rewrites a formula to the smallest equivalent one reachable by
flattening, deduplication, constant folding, complement collapse and
order-certified redundancy elimination, then rebuilds connectives in a fixed
id-sorted right-nested shape.  The certifying order queries go through
``WordProblem.leq``, a memoized cut-free backward search over sequent pairs;
failed verdicts whose computation depended on an in-progress ancestor are
never cached (they are recomputed on later queries), which keeps the cache
sound in the presence of search cycles.
"""

from __future__ import annotations

import sys

from .formula import AND, BOT, NOT, OR, TOP, VAR, FormulaStore
from .prover import LimitExceededError, Sequent, Verdict, fresh_variable, prove, right_only

_UNTAINTED = 1 << 60


class WordProblem:
    """Axiom-free orthologic order decisions with a shared verdict cache."""

    def __init__(self, store: FormulaStore):
        self.store = store
        self.cache: dict[Sequent, bool] = {}
        self._in_progress: dict[Sequent, int] = {}

    def leq(self, a: int, b: int) -> bool:
        """True iff ``a <= b`` holds in every ortholattice."""
        store = self.store
        z = store.var(fresh_variable(store, (a, b)))
        top_sub = store.disj(z, store.neg(z))
        bot_sub = store.conj(z, store.neg(z))
        a = store.replace_constants(a, top_sub, bot_sub)
        b = store.replace_constants(b, top_sub, bot_sub)
        goal = right_only(store, a, b)
        if sys.getrecursionlimit() < 30_000:
            sys.setrecursionlimit(30_000)
        return self._search(goal)[0]

    def _search(self, s: Sequent) -> tuple[bool, int]:
        """Provability of the right-only sequent s.

        Returns (verdict, taint): taint is the shallowest in-progress stack
        depth the computation depended on, or a large sentinel when the
        verdict is unconditional.  Tainted failures are not cached.
        """
        cached = self.cache.get(s)
        if cached is not None:
            return cached, _UNTAINTED
        depth = self._in_progress.get(s)
        if depth is not None:
            return False, depth

        store = self.store
        p, q = s
        # Hyp
        for x, y in ((p, q), (q, p)):
            if store.kind(x) == VAR and store.kind(y) == NOT and store.left(y) == x:
                self.cache[s] = True
                return True, _UNTAINTED

        my_depth = len(self._in_progress)
        self._in_progress[s] = my_depth
        taint = _UNTAINTED
        proved = False
        try:
            for this, that in ((p, q), (q, p)):
                kind = store.kind(this)
                if kind == OR:
                    for child in (store.left(this), store.right(this)):
                        ok, t = self._search((child, that) if child <= that else (that, child))
                        taint = min(taint, t)
                        if ok:
                            proved = True
                            break
                elif kind == AND:
                    x, y = store.left(this), store.right(this)
                    ok1, t1 = self._search((x, that) if x <= that else (that, x))
                    taint = min(taint, t1)
                    if ok1:
                        ok2, t2 = self._search((y, that) if y <= that else (that, y))
                        taint = min(taint, t2)
                        if ok2:
                            proved = True
                if proved:
                    break
            if not proved:
                # Replace: (x, x) proves (x, anything)
                for x in (p, q) if p != q else (p,):
                    diag = (x, x)
                    ok, t = self._search(diag)
                    taint = min(taint, t)
                    if ok:
                        proved = True
                        break
        finally:
            del self._in_progress[s]

        if proved:
            self.cache[s] = True
            return True, _UNTAINTED
        if taint >= my_depth:
            # failure depended on no strict ancestor: sound to cache
            self.cache[s] = False
            return False, _UNTAINTED
        return False, taint


class Normalizer:
    """Bottom-up memoized normalization over one store (single-threaded)."""

    def __init__(self, store: FormulaStore, word: WordProblem | None = None):
        self.store = store
        self.word = word if word is not None else WordProblem(store)
        self.memo: dict[int, int] = {}

    def normalize(self, f: int) -> int:
        return self._norm(self.store.nnf(f))

    def _norm(self, f: int) -> int:
        store = self.store
        memo = self.memo
        stack = [f]
        while stack:
            g = stack.pop()
            if g in memo:
                continue
            kind = store.kind(g)
            if kind in (VAR, TOP, BOT, NOT):
                memo[g] = g  # NNF literals and constants are already minimal
                continue
            spine = self._spine(g, kind)
            pending = [c for c in spine if c not in memo]
            if pending:
                stack.append(g)
                stack.extend(pending)
                continue
            memo[g] = self._rebuild(kind, {memo[c] for c in spine})
        return memo[f]

    def _spine(self, g: int, kind: int) -> list[int]:
        """Maximal non-`kind` descendants under the same-connective spine of g."""
        store = self.store
        out: list[int] = []
        stack = [g]
        while stack:
            h = stack.pop()
            if store.kind(h) == kind:
                stack.append(store.right(h))
                stack.append(store.left(h))
            else:
                out.append(h)
        return out

    def _rebuild(self, kind: int, normalized: set[int]) -> int:
        store = self.store
        word = self.word
        # normalized children may themselves be connectives of the same kind
        children: set[int] = set()
        for c in normalized:
            if store.kind(c) == kind:
                children.update(self._spine(c, kind))
            else:
                children.add(c)

        absorbing = store.bot if kind == AND else store.top  # x and Bot = Bot
        neutral = store.top if kind == AND else store.bot  # x and Top = x
        children.discard(neutral)
        if absorbing in children:
            return absorbing
        if not children:
            return neutral
        for c in children:
            if store.inverse(c) in children:
                return absorbing
        items = sorted(children)
        if len(items) > 1:
            combined = self._fold(kind, items)
            collapsed = (
                word.leq(combined, store.bot) if kind == AND else word.leq(store.top, combined)
            )
            if collapsed:
                return absorbing
        # drop any child implied by the rest; restart after each removal
        changed = True
        while changed and len(items) > 1:
            changed = False
            for i, c in enumerate(items):
                rest = items[:i] + items[i + 1 :]
                folded = self._fold(kind, rest)
                redundant = word.leq(folded, c) if kind == AND else word.leq(c, folded)
                if redundant:
                    items = rest
                    changed = True
                    break
        return self._fold(kind, items)

    def _fold(self, kind: int, items: list[int]) -> int:
        result = items[-1]
        for c in reversed(items[:-1]):
            result = self.store.intern(kind, (c, result))
        return result


def normalize(store: FormulaStore, f: int) -> int:
    """One-shot normalization with a fresh cache."""
    return Normalizer(store).normalize(f)


def leq(store: FormulaStore, a: int, b: int) -> bool:
    """One-shot axiom-free order query."""
    return WordProblem(store).leq(a, b)


def certify_equivalence(
    store: FormulaStore,
    f: int,
    g: int,
    max_sequents: int | None = None,
    timeout_ms: float | None = None,
) -> bool:
    """Check both inequalities with the saturation engine (no axioms).

    Raises :class:`LimitExceededError` if either direction hits a limit.
    """
    for lhs, rhs in ((f, g), (g, f)):
        result = prove(store, lhs, rhs, max_sequents=max_sequents, timeout_ms=timeout_ms)
        if result.verdict is Verdict.LIMIT_EXCEEDED:
            raise LimitExceededError(
                "equivalence check hit engine limits",
                result.stats.proven_count,
                result.stats.attempts,
            )
        if result.verdict is not Verdict.PROVED:
            return False
    return True
