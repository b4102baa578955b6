"""Hash-consed propositional formulas.

Formulas live in a :class:`FormulaStore`, which interns every structurally
distinct node exactly once and hands out dense integer identities.  Two
formulas are therefore equal iff their ids are equal, and the store can cache
per-node results (negation normal form, inversion) without ever rebuilding a
subterm.  Connectives are strictly binary; n-ary surface syntax is folded by
the parser.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

VAR = 0
NOT = 1
AND = 2
OR = 3
TOP = 4
BOT = 5

KIND_NAMES = {VAR: "var", NOT: "not", AND: "and", OR: "or", TOP: "true", BOT: "false"}

_ARITY = {VAR: 0, NOT: 1, AND: 2, OR: 2, TOP: 0, BOT: 0}

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_RESERVED = {"not", "and", "or", "true", "false"}


class FormulaError(Exception):
    """Structural misuse of the store (bad arity, unknown id, contract breach)."""


class ParseError(FormulaError):
    """Formula text that does not match the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class _Node:
    __slots__ = ("kind", "left", "right", "name", "nnf_id", "inverse_id")

    def __init__(self, kind: int, left: int | None, right: int | None, name: str | None):
        self.kind = kind
        self.left = left
        self.right = right
        self.name = name
        self.nnf_id: int | None = None
        self.inverse_id: int | None = None


class FormulaStore:
    """Append-only arena of interned formula nodes.

    Single writer: interning must be externally serialized, but a fully built
    store may be read from several threads.
    """

    def __init__(self):
        self._nodes: list[_Node] = []
        self._table: dict[tuple, int] = {}
        self._size_cache: dict[int, int] = {}
        self._conn_cache: dict[int, int] = {}
        self._var_cache: dict[int, frozenset[str]] = {}
        self.top = self.intern(TOP)
        self.bot = self.intern(BOT)

    def __len__(self) -> int:
        return len(self._nodes)

    # ------------------------------------------------------------------
    # construction

    def intern(self, kind: int, children: Iterable[int] = (), name: str | None = None) -> int:
        """Return the id of the (kind, children) node, creating it if new.

        Purely structural: interning never simplifies (``intern(NOT, [intern(
        NOT, [x])])`` really is a double negation node).
        """
        kids = tuple(children)
        if kind not in _ARITY:
            raise FormulaError(f"unknown node kind {kind!r}")
        if kind == VAR:
            if kids or not name:
                raise FormulaError("variable nodes take a name and no children")
            key = (VAR, name)
        else:
            if name is not None:
                raise FormulaError(f"{KIND_NAMES[kind]} nodes do not take a name")
            if len(kids) != _ARITY[kind]:
                raise FormulaError(
                    f"{KIND_NAMES[kind]} expects {_ARITY[kind]} children, got {len(kids)}"
                )
            for c in kids:
                if not (0 <= c < len(self._nodes)):
                    raise FormulaError(f"child id {c} is not in this store")
            key = (kind,) + kids
        found = self._table.get(key)
        if found is not None:
            return found
        fid = len(self._nodes)
        left = kids[0] if len(kids) > 0 else None
        right = kids[1] if len(kids) > 1 else None
        self._nodes.append(_Node(kind, left, right, name))
        self._table[key] = fid
        return fid

    def var(self, name: str) -> int:
        return self.intern(VAR, name=name)

    def neg(self, f: int) -> int:
        return self.intern(NOT, (f,))

    def conj(self, a: int, b: int) -> int:
        return self.intern(AND, (a, b))

    def disj(self, a: int, b: int) -> int:
        return self.intern(OR, (a, b))

    # ------------------------------------------------------------------
    # node access

    def kind(self, f: int) -> int:
        return self._nodes[f].kind

    def children(self, f: int) -> tuple[int, ...]:
        node = self._nodes[f]
        if node.kind == NOT:
            return (node.left,)
        if node.kind in (AND, OR):
            return (node.left, node.right)
        return ()

    def left(self, f: int) -> int:
        return self._nodes[f].left

    def right(self, f: int) -> int:
        return self._nodes[f].right

    def name(self, f: int) -> str:
        node = self._nodes[f]
        if node.kind != VAR:
            raise FormulaError(f"id {f} is not a variable")
        return node.name

    def is_literal(self, f: int) -> bool:
        """Variable or negated variable."""
        node = self._nodes[f]
        if node.kind == VAR:
            return True
        return node.kind == NOT and self._nodes[node.left].kind == VAR

    # ------------------------------------------------------------------
    # traversal

    def subformula_ids(self, f: int) -> set[int]:
        """All distinct node ids reachable from f (including f)."""
        seen = {f}
        stack = [f]
        while stack:
            node = self._nodes[stack.pop()]
            if node.kind in (NOT, AND, OR):
                for c in (node.left, node.right):
                    if c is not None and c not in seen:
                        seen.add(c)
                        stack.append(c)
        return seen

    def size(self, f: int) -> int:
        """DAG size: number of distinct reachable nodes."""
        cached = self._size_cache.get(f)
        if cached is None:
            cached = len(self.subformula_ids(f))
            self._size_cache[f] = cached
        return cached

    def connective_count(self, f: int) -> int:
        """Distinct reachable And/Or nodes, counted once under sharing."""
        cached = self._conn_cache.get(f)
        if cached is None:
            cached = sum(1 for g in self.subformula_ids(f) if self._nodes[g].kind in (AND, OR))
            self._conn_cache[f] = cached
        return cached

    def variables(self, f: int) -> frozenset[str]:
        cached = self._var_cache.get(f)
        if cached is None:
            cached = frozenset(
                self._nodes[g].name for g in self.subformula_ids(f) if self._nodes[g].kind == VAR
            )
            self._var_cache[f] = cached
        return cached

    # ------------------------------------------------------------------
    # negation normal form and inversion

    def nnf(self, f: int) -> int:
        """Negation normal form, memoized per node.

        Negations are pushed onto variables; double negations and negated
        constants disappear.  The result of a negative occurrence is obtained
        as the inverse of the positive result, so the whole computation stays
        within the interned universe.
        """
        stack = [f]
        nodes = self._nodes
        while stack:
            g = stack.pop()
            node = nodes[g]
            if node.nnf_id is not None:
                continue
            kind = node.kind
            if kind in (VAR, TOP, BOT):
                node.nnf_id = g
            elif kind == NOT:
                child = node.left
                if nodes[child].nnf_id is None:
                    stack.append(g)
                    stack.append(child)
                else:
                    node.nnf_id = self.inverse(nodes[child].nnf_id)
            else:
                a, b = node.left, node.right
                if nodes[a].nnf_id is None or nodes[b].nnf_id is None:
                    stack.append(g)
                    if nodes[b].nnf_id is None:
                        stack.append(b)
                    if nodes[a].nnf_id is None:
                        stack.append(a)
                else:
                    node.nnf_id = self.intern(kind, (nodes[a].nnf_id, nodes[b].nnf_id))
        return nodes[f].nnf_id

    def inverse(self, f: int) -> int:
        """NNF of the negation of an NNF formula, memoized and involutive.

        Raises :class:`FormulaError` when f is not in negation normal form.
        """
        stack = [f]
        nodes = self._nodes
        while stack:
            g = stack.pop()
            node = nodes[g]
            if node.inverse_id is not None:
                continue
            kind = node.kind
            if kind == VAR:
                inv = self.intern(NOT, (g,))
            elif kind == TOP:
                inv = self.bot
            elif kind == BOT:
                inv = self.top
            elif kind == NOT:
                child = node.left
                if nodes[child].kind != VAR:
                    raise FormulaError(
                        f"inverse requires negation normal form; id {g} negates a "
                        f"{KIND_NAMES[nodes[child].kind]} node"
                    )
                inv = child
            else:
                a, b = node.left, node.right
                ia, ib = nodes[a].inverse_id, nodes[b].inverse_id
                if ia is None or ib is None:
                    stack.append(g)
                    if ib is None:
                        stack.append(b)
                    if ia is None:
                        stack.append(a)
                    continue
                inv = self.intern(OR if kind == AND else AND, (ia, ib))
            node.inverse_id = inv
            nodes[inv].inverse_id = g
        return nodes[f].inverse_id

    def is_nnf(self, f: int) -> bool:
        return all(
            self._nodes[self._nodes[g].left].kind == VAR
            for g in self.subformula_ids(f)
            if self._nodes[g].kind == NOT
        )

    # ------------------------------------------------------------------
    # semantics

    def evaluate(self, f: int, assignment: Mapping[str, bool]) -> bool:
        """Classical Boolean evaluation, memoized over shared nodes.

        Raises :class:`FormulaError` naming the first unassigned variable.
        """
        nodes = self._nodes
        values: dict[int, bool] = {}
        stack = [f]
        while stack:
            g = stack.pop()
            if g in values:
                continue
            node = nodes[g]
            kind = node.kind
            if kind == VAR:
                try:
                    values[g] = bool(assignment[node.name])
                except KeyError:
                    raise FormulaError(f"unassigned variable {node.name!r}") from None
            elif kind == TOP:
                values[g] = True
            elif kind == BOT:
                values[g] = False
            elif kind == NOT:
                child = node.left
                if child in values:
                    values[g] = not values[child]
                else:
                    stack.append(g)
                    stack.append(child)
            else:
                a, b = node.left, node.right
                if a in values and b in values:
                    if kind == AND:
                        values[g] = values[a] and values[b]
                    else:
                        values[g] = values[a] or values[b]
                else:
                    stack.append(g)
                    if b not in values:
                        stack.append(b)
                    if a not in values:
                        stack.append(a)
        return values[f]

    def replace_constants(self, f: int, top_sub: int, bot_sub: int) -> int:
        """Rewrite every Top into top_sub and every Bot into bot_sub."""
        nodes = self._nodes
        out: dict[int, int] = {}
        stack = [f]
        while stack:
            g = stack.pop()
            if g in out:
                continue
            node = nodes[g]
            kind = node.kind
            if kind == TOP:
                out[g] = top_sub
            elif kind == BOT:
                out[g] = bot_sub
            elif kind == VAR:
                out[g] = g
            elif kind == NOT:
                child = node.left
                if child in out:
                    out[g] = g if out[child] == child else self.intern(NOT, (out[child],))
                else:
                    stack.append(g)
                    stack.append(child)
            else:
                a, b = node.left, node.right
                if a in out and b in out:
                    if out[a] == a and out[b] == b:
                        out[g] = g
                    else:
                        out[g] = self.intern(kind, (out[a], out[b]))
                else:
                    stack.append(g)
                    if b not in out:
                        stack.append(b)
                    if a not in out:
                        stack.append(a)
        return out[f]

    # ------------------------------------------------------------------
    # text format

    def parse(self, text: str) -> int:
        """Parse one formula in s-expression syntax.

        Atoms match ``[A-Za-z_][A-Za-z0-9_]*``; composite forms are
        ``(not f)``, ``(and f1 f2 ...)`` and ``(or f1 f2 ...)``; ``true`` and
        ``false`` are constants; ``;`` starts a line comment.  N-ary and/or
        fold left-associatively into binary nodes.
        """
        tokens = list(_tokenize(text))
        pos = 0

        def peek():
            return tokens[pos] if pos < len(tokens) else None

        def advance():
            nonlocal pos
            tok = tokens[pos]
            pos += 1
            return tok

        def parse_one() -> int:
            tok = peek()
            if tok is None:
                raise ParseError("unexpected end of input", *_end_position(text))
            value, line, col = advance()
            if value == ")":
                raise ParseError("unexpected ')'", line, col)
            if value != "(":
                return self._parse_atom(value, line, col)
            head = peek()
            if head is None:
                raise ParseError("unclosed '('", line, col)
            hvalue, hline, hcol = advance()
            if hvalue in ("(", ")"):
                raise ParseError("expected 'not', 'and' or 'or' after '('", hline, hcol)
            if hvalue not in ("not", "and", "or"):
                raise ParseError(f"unknown operator {hvalue!r}", hline, hcol)
            args = []
            while True:
                nxt = peek()
                if nxt is None:
                    raise ParseError("unclosed '('", line, col)
                if nxt[0] == ")":
                    advance()
                    break
                args.append(parse_one())
            if hvalue == "not":
                if len(args) != 1:
                    raise ParseError("'not' expects exactly one argument", hline, hcol)
                return self.intern(NOT, (args[0],))
            if not args:
                raise ParseError(f"'{hvalue}' expects at least one argument", hline, hcol)
            kind = AND if hvalue == "and" else OR
            result = args[0]
            for arg in args[1:]:
                result = self.intern(kind, (result, arg))
            return result

        result = parse_one()
        tok = peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok[0]!r}", tok[1], tok[2])
        return result

    def _parse_atom(self, value: str, line: int, col: int) -> int:
        if value == "true":
            return self.top
        if value == "false":
            return self.bot
        if value in _RESERVED:
            raise ParseError(f"reserved word {value!r} cannot be used as a variable", line, col)
        if not _ATOM_RE.fullmatch(value):
            raise ParseError(f"invalid atom {value!r}", line, col)
        return self.var(value)

    def format(self, f: int) -> str:
        """Canonical s-expression text for f (binary connectives throughout)."""
        nodes = self._nodes
        parts: dict[int, str] = {}
        stack = [f]
        while stack:
            g = stack.pop()
            if g in parts:
                continue
            node = nodes[g]
            kind = node.kind
            if kind == VAR:
                parts[g] = node.name
            elif kind == TOP:
                parts[g] = "true"
            elif kind == BOT:
                parts[g] = "false"
            elif kind == NOT:
                child = node.left
                if child in parts:
                    parts[g] = f"(not {parts[child]})"
                else:
                    stack.append(g)
                    stack.append(child)
            else:
                a, b = node.left, node.right
                if a in parts and b in parts:
                    parts[g] = f"({KIND_NAMES[kind]} {parts[a]} {parts[b]})"
                else:
                    stack.append(g)
                    if b not in parts:
                        stack.append(b)
                    if a not in parts:
                        stack.append(a)
        return parts[f]


def _tokenize(text: str) -> Iterator[tuple[str, int, int]]:
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        else:
            m = _ATOM_RE.match(text, i)
            if m is None:
                raise ParseError(f"unexpected character {ch!r}", line, col)
            yield m.group(0), line, col
            col += len(m.group(0))
            i = m.end()


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1
