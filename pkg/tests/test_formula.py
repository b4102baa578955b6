import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthologic.formula import (
    AND, NOT, OR, VAR, FormulaError, FormulaStore, ParseError,
)


def test_intern_is_idempotent(store):
    a, b = store.var("a"), store.var("b")
    f1 = store.intern(AND, (a, b))
    f2 = store.intern(AND, (a, b))
    assert f1 == f2


def test_intern_var_twice_same_id(store):
    assert store.var("x") == store.var("x")
    assert store.var("x") != store.var("y")


def test_intern_no_silent_simplification(store):
    x = store.var("x")
    nn = store.neg(store.neg(x))
    assert nn != x
    assert store.kind(nn) == NOT
    assert store.kind(store.left(nn)) == NOT


def test_intern_arity_errors(store):
    with pytest.raises(FormulaError):
        store.intern(AND, (store.var("a"),))
    with pytest.raises(FormulaError):
        store.intern(NOT, ())
    with pytest.raises(FormulaError):
        store.intern(VAR)
    with pytest.raises(FormulaError):
        store.intern(AND, (0, 99999))


def test_parse_basic(store):
    f = store.parse("(and a (or b (not c)))")
    assert store.kind(f) == AND
    assert store.format(f) == "(and a (or b (not c)))"


def test_parse_nary_folds_left(store):
    f = store.parse("(and a b c)")
    byhand = store.conj(store.conj(store.var("a"), store.var("b")), store.var("c"))
    assert f == byhand


def test_parse_constants(store):
    assert store.parse("true") == store.top
    assert store.parse("(not true)") == store.neg(store.top)


def test_parse_comments_and_whitespace(store):
    f = store.parse("; leading comment\n(and  a\n\tb) ; trailing")
    assert f == store.conj(store.var("a"), store.var("b"))


@pytest.mark.parametrize(
    "text",
    ["(and)", "(or)", "(not a b)", "(xor a b)", "(and a", ")", "", "(and a b) extra", "not"],
)
def test_parse_errors(store, text):
    with pytest.raises(ParseError):
        store.parse(text)


def test_parse_error_carries_position(store):
    with pytest.raises(ParseError) as exc:
        store.parse("(and a\n  (or b !))")
    assert exc.value.line == 2


def test_nnf_de_morgan(store):
    a, b = store.var("a"), store.var("b")
    f = store.nnf(store.neg(store.conj(a, b)))
    assert f == store.disj(store.neg(a), store.neg(b))


def test_nnf_double_negation(store):
    a = store.var("a")
    assert store.nnf(store.neg(store.neg(a))) == a


def test_nnf_fixpoint_on_nnf_input(store):
    f = store.parse("(and a (or b (not c)))")
    assert store.nnf(f) == f


def test_nnf_constants(store):
    assert store.nnf(store.neg(store.top)) == store.bot
    assert store.nnf(store.neg(store.bot)) == store.top


def test_inverse_examples(store):
    x = store.var("x")
    assert store.inverse(x) == store.neg(x)
    f = store.disj(store.neg(store.var("a")), store.neg(store.var("b")))
    assert store.inverse(f) == store.conj(store.var("a"), store.var("b"))


def test_inverse_involution(store):
    f = store.nnf(store.parse("(and a (not b))"))
    assert store.inverse(store.inverse(f)) == f


def test_inverse_rejects_non_nnf(store):
    f = store.neg(store.conj(store.var("a"), store.var("b")))
    with pytest.raises(FormulaError):
        store.inverse(f)


def test_evaluate(store):
    x = store.var("x")
    assert store.evaluate(store.conj(x, store.neg(x)), {"x": True}) is False
    assert store.evaluate(store.disj(x, store.neg(x)), {"x": False}) is True
    f = store.parse("(or (and a b) c)")
    assert store.evaluate(f, {"a": True, "b": False, "c": True}) is True


def test_evaluate_names_missing_variable(store):
    with pytest.raises(FormulaError, match="zzz"):
        store.evaluate(store.var("zzz"), {})


def test_connective_count(store):
    x = store.var("x")
    assert store.connective_count(x) == 0
    assert store.connective_count(store.parse("(and a (or b c))")) == 2
    ab = store.conj(store.var("a"), store.var("b"))
    assert store.connective_count(store.disj(ab, ab)) == 2  # shared child counted once


def test_size_counts_distinct_nodes(store):
    ab = store.conj(store.var("a"), store.var("b"))
    f = store.disj(ab, ab)
    assert store.size(f) == 4  # a, b, a^b, whole


def test_format_round_trip(store):
    texts = ["(and a b)", "(or (not x) (and y z))", "true", "(not (not q))", "v"]
    for text in texts:
        f = store.parse(text)
        assert store.parse(store.format(f)) == f


# ----------------------------------------------------------------------
# property tests

def formulas(draw, store, names=("a", "b", "c"), max_depth=5):
    depth = draw(st.integers(0, max_depth))
    return _build(draw, store, names, depth)


def _build(draw, store, names, depth):
    if depth == 0:
        choice = draw(st.integers(0, len(names) + 1))
        if choice == len(names):
            return store.top
        if choice == len(names) + 1:
            return store.bot
        return store.var(names[choice])
    op = draw(st.integers(0, 2))
    if op == 0:
        return store.neg(_build(draw, store, names, depth - 1))
    left = _build(draw, store, names, draw(st.integers(0, depth - 1)))
    right = _build(draw, store, names, draw(st.integers(0, depth - 1)))
    return store.intern(AND if op == 1 else OR, (left, right))


@st.composite
def formula_in_fresh_store(draw):
    store = FormulaStore()
    return store, formulas(draw, store)


@given(formula_in_fresh_store())
@settings(max_examples=200, deadline=None)
def test_nnf_idempotent_and_semantics_preserved(case):
    store, f = case
    nf = store.nnf(f)
    assert store.nnf(nf) == nf
    assert store.is_nnf(nf)
    names = sorted(store.variables(f))
    assert len(names) <= 10
    for mask in range(1 << len(names)):
        env = {name: bool(mask >> i & 1) for i, name in enumerate(names)}
        assert store.evaluate(f, env) == store.evaluate(nf, env)


@given(formula_in_fresh_store())
@settings(max_examples=200, deadline=None)
def test_parse_format_identity(case):
    store, f = case
    assert store.parse(store.format(f)) == f


@given(formula_in_fresh_store())
@settings(max_examples=200, deadline=None)
def test_universe_bound_and_involution(case):
    store, f = case
    n = store.size(f)
    nf = store.nnf(f)
    reachable = store.subformula_ids(nf)
    closure = reachable | {store.inverse(g) for g in reachable}
    assert len(closure) <= 2 * n
    for g in closure:
        assert store.inverse(store.inverse(g)) == g
