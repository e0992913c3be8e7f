import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from alphabet import Alphabet, Lasso
from errors import UnknownPropositionError
from ltl import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Implies, Next, Not,
    Or, Release, TrueConst, Until,
)
from ltl_parser import parse_ltl
from semantics import LassoEvaluator, eval_lasso, eval_prefix

AB = Alphabet(("a", "b"))
a, b = Atom("a"), Atom("b")

formulas = st.recursive(
    st.sampled_from([a, b, TRUE, FALSE]),
    lambda inner: st.one_of(
        st.builds(lambda op, x: op(x), st.sampled_from((Not, Next, Eventually, Globally)), inner),
        st.builds(lambda op, x, y: op(x, y), st.sampled_from((And, Or, Implies, Until, Release)), inner, inner),
    ),
    max_leaves=6,
)

lassos = st.builds(
    Lasso,
    st.lists(st.integers(0, 3), max_size=3).map(tuple),
    st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple),
)


def reference(formula: Formula, lasso: Lasso, i: int = 0) -> bool:
    """Direct recursive semantics, walking at most n successor steps."""
    n = lasso.length

    def walk(start):
        position = start
        for _ in range(n):
            yield position
            position = position + 1 if position + 1 < n else lasso.loop_start

    match formula:
        case TrueConst():
            return True
        case FalseConst():
            return False
        case Atom(name=name):
            return AB.holds(lasso.base[i], name)
        case Not(operand=x):
            return not reference(x, lasso, i)
        case And(left=x, right=y):
            return reference(x, lasso, i) and reference(y, lasso, i)
        case Or(left=x, right=y):
            return reference(x, lasso, i) or reference(y, lasso, i)
        case Implies(left=x, right=y):
            return not reference(x, lasso, i) or reference(y, lasso, i)
        case Next(operand=x):
            return reference(x, lasso, i + 1 if i + 1 < n else lasso.loop_start)
        case Eventually(operand=x):
            return any(reference(x, lasso, j) for j in walk(i))
        case Globally(operand=x):
            return all(reference(x, lasso, j) for j in walk(i))
        case Until(left=x, right=y):
            for j in walk(i):
                if reference(y, lasso, j):
                    return True
                if not reference(x, lasso, j):
                    return False
            return False
        case Release(left=x, right=y):
            for j in walk(i):
                if not reference(y, lasso, j):
                    return False
                if reference(x, lasso, j):
                    return True
            return True
    raise TypeError(formula)


@pytest.mark.parametrize("text, ap, lasso_text, expected", [
    ("X p", "p", "{} ({p})", True),
    ("a U b", "a,b", "({a})", False),
    ("F G p", "p", "{} ({p}{p})", True),
    ("G F p", "p", "{p} ({})", False),
    ("a U b", "a,b", "{a}{a} ({b})", True),
    ("b R a", "a,b", "({a})", True),
    ("b R a", "a,b", "{a} ({})", False),
    ("X X a", "a,b", "{} ({a}{})", False),
])
def test_examples(text, ap, lasso_text, expected):
    alphabet = Alphabet.from_text(ap)
    formula = parse_ltl(text, alphabet)
    assert eval_lasso(formula, Lasso.parse(lasso_text, alphabet), alphabet) is expected


@settings(max_examples=300)
@given(formulas, lassos)
def test_matches_reference_semantics(formula, lasso):
    assert eval_lasso(formula, lasso, AB) == reference(formula, lasso)


@settings(max_examples=200)
@given(formulas, lassos)
def test_unroll_invariance(formula, lasso):
    evaluator = LassoEvaluator(formula, AB)
    verdict = evaluator(lasso)
    assert evaluator(lasso.unroll_prefix()) == verdict
    assert evaluator(lasso.unroll_loop()) == verdict
    assert evaluator(lasso.unroll_loop().unroll_prefix()) == verdict


@given(formulas, lassos)
def test_negation_duality(formula, lasso):
    assert eval_lasso(Not(formula), lasso, AB) != eval_lasso(formula, lasso, AB)


def test_truth_mask_marks_positions():
    evaluator = LassoEvaluator(a, AB)
    assert evaluator.truth_mask(Lasso((1, 0), (1,))) == 0b101


def test_bounded_safety_locality():
    formula = Or(a, Next(b))
    # words agree on positions 0..1
    assert eval_lasso(formula, Lasso((0, 2), (0,)), AB) == eval_lasso(formula, Lasso((), (0, 2, 3)), AB)


def test_eval_prefix_closes_on_last_letter():
    formula = And(a, Next(Next(b)))
    assert eval_prefix(formula, (1, 0, 2), AB)
    assert not eval_prefix(formula, (1, 2, 1), AB)


@given(formulas, st.lists(st.integers(0, 3), min_size=1, max_size=6).map(tuple))
def test_loop_start_count_matches_each_lasso(formula, base):
    evaluator = LassoEvaluator(formula, AB)
    expected = sum(evaluator(Lasso(base[:k], base[k:])) for k in range(len(base)))
    assert evaluator.count_loop_starts(base) == expected


def test_compiled_program_is_postfix():
    evaluator = LassoEvaluator(Until(a, Next(b)), AB)
    assert len(evaluator.program) == 4
    # only the loop back to position 0 reaches the b in letter {a,b}
    assert evaluator.count_loop_starts((3, 1, 1)) == 1
    assert evaluator.count_loop_starts((2, 1, 0)) == 0


@given(formulas, st.lists(st.integers(0, 3), min_size=1, max_size=5).map(tuple))
def test_eval_prefix_matches_evaluator(formula, word):
    assert eval_prefix(formula, word, AB) == LassoEvaluator(formula, AB).on_prefix(word)


def test_unknown_atom_rejected():
    with pytest.raises(UnknownPropositionError):
        LassoEvaluator(Atom("z"), AB)
