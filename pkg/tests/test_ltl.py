import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from alphabet import Alphabet
from errors import FragmentError
from ltl import (
    FALSE, TRUE, And, Atom, Eventually, Globally, Implies, Next, Not, Or, Release,
    SyntacticClass, Until, atoms, classify_syntactic, conjunction, disjunction,
    fragment_body, is_bounded_safety, next_depth, subformulas, to_nnf, to_text,
)
from ltl_parser import parse_ltl

AB = Alphabet(("a", "b"))
a, b = Atom("a"), Atom("b")

_UNARY = (Not, Next, Eventually, Globally)
_BINARY = (And, Or, Implies, Until, Release)

formulas = st.recursive(
    st.sampled_from([a, b, TRUE, FALSE]),
    lambda inner: st.one_of(
        st.builds(lambda op, x: op(x), st.sampled_from(_UNARY), inner),
        st.builds(lambda op, x, y: op(x, y), st.sampled_from(_BINARY), inner, inner),
    ),
    max_leaves=8,
)

bounded_safety = st.recursive(
    st.sampled_from([a, b, TRUE, FALSE]),
    lambda inner: st.one_of(
        st.builds(Not, inner),
        st.builds(Next, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
    ),
    max_leaves=6,
)


class TestPrinter:
    @pytest.mark.parametrize("formula, text", [
        (Until(a, b), "a U b"),
        (And(And(a, Next(b)), Next(Next(b))), "a & X b & X X b"),
        (And(a, And(b, a)), "a & (b & a)"),
        (Implies(Implies(a, b), a), "(a -> b) -> a"),
        (Implies(a, Implies(b, a)), "a -> b -> a"),
        (Until(a, Until(b, a)), "a U b U a"),
        (Until(Until(a, b), a), "(a U b) U a"),
        (Not(Until(a, b)), "! a U b"),
        (Globally(And(a, Next(b))), "G (a & X b)"),
        (Or(TRUE, FALSE), "true | false"),
    ])
    def test_to_text(self, formula, text):
        assert to_text(formula) == text
        assert str(formula) == text

    @settings(max_examples=200)
    @given(formulas)
    def test_printed_text_parses_back(self, formula):
        assert parse_ltl(to_text(formula), AB) == formula


class TestNnf:
    def test_eventually_and_globally_desugar(self):
        assert to_nnf(Eventually(a)) == Until(TRUE, a)
        assert to_nnf(Globally(a)) == Release(FALSE, a)

    def test_negation_dualizes(self):
        assert to_nnf(Not(Until(a, b))) == Release(Not(a), Not(b))
        assert to_nnf(Not(And(a, Next(b)))) == Or(Not(a), Next(Not(b)))
        assert to_nnf(Not(Implies(a, b))) == And(a, Not(b))

    @given(formulas)
    def test_negation_only_above_atoms(self, formula):
        for node in subformulas(to_nnf(formula)):
            assert not isinstance(node, (Implies, Eventually, Globally))
            if isinstance(node, Not):
                assert isinstance(node.operand, Atom)


class TestFragments:
    @pytest.mark.parametrize("formula, expected", [
        (a, SyntacticClass.BOUNDED_SAFETY),
        (Or(a, Next(b)), SyntacticClass.BOUNDED_SAFETY),
        (Globally(And(a, Next(b))), SyntacticClass.INVARIANT),
        (Eventually(a), SyntacticClass.GUARANTEE),
        (Eventually(Globally(Atom("p"))), SyntacticClass.PERSISTENCE),
        (Globally(Eventually(Atom("p"))), SyntacticClass.RESPONSE),
        (Globally(TRUE), SyntacticClass.INVARIANT),
        (Until(a, b), SyntacticClass.NOT_IN_FRAGMENT),
        (And(Globally(a), Eventually(b)), SyntacticClass.NOT_IN_FRAGMENT),
        (Globally(Until(a, b)), SyntacticClass.NOT_IN_FRAGMENT),
    ])
    def test_classify_syntactic(self, formula, expected):
        assert classify_syntactic(formula) is expected

    @pytest.mark.parametrize("formula, depth", [
        (a, 0),
        (Or(a, Next(b)), 1),
        (Next(Next(Next(And(b, a)))), 3),
        (And(Next(a), Next(Next(b))), 2),
    ])
    def test_next_depth(self, formula, depth):
        assert next_depth(formula) == depth

    def test_next_depth_outside_fragment(self):
        with pytest.raises(FragmentError):
            next_depth(Eventually(a))

    def test_fragment_body(self):
        body = And(a, Next(b))
        assert fragment_body(Globally(body)) == body
        assert fragment_body(Globally(Eventually(body))) == body
        assert fragment_body(body) == body
        with pytest.raises(FragmentError):
            fragment_body(Until(a, b))

    @given(bounded_safety)
    def test_bounded_safety_generator_stays_in_fragment(self, formula):
        assert is_bounded_safety(formula)
        assert classify_syntactic(formula) is SyntacticClass.BOUNDED_SAFETY


def test_helpers():
    assert conjunction() == TRUE
    assert disjunction() == FALSE
    assert conjunction(a, b, a) == And(And(a, b), a)
    assert disjunction(a) == a
    assert atoms(Until(a, Next(b))) == {"a", "b"}
