from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from alphabet import Alphabet
from composition import (
    BoundedSafetyMerged, ConstantSubstituted, Connective, ConvergenceClass, ConvergenceKind,
    LeafClassified, RuleApplied, bounded_safety_density, compose_classes, convergence_class,
    reduce_formula,
)
from errors import FragmentError, ResourceCapExceeded
from lasso_lab import FormulaPredicate, density_curve
from ltl import FALSE, TRUE, Not, Or
from ltl_parser import parse_ltl

AB = Alphabet(("a", "b"))
WORKED = "(a | X b) & (X X X (b & a) | F a) | (G b & F (a & X b))"

ZERO, ONE = ConvergenceClass.zero(), ConvergenceClass.one()
EPS = ConvergenceClass.eps()
KINDS = [ConvergenceKind.ZERO, ConvergenceKind.EPS, ConvergenceKind.ONE]

definite = st.one_of(
    st.just(ZERO),
    st.just(ONE),
    st.just(EPS),
    st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100)
    .filter(lambda v: 0 < v < 1)
    .map(ConvergenceClass.eps),
)
classes = st.one_of(
    definite,
    st.just(ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.EPS)),
    st.just(ConvergenceClass.between(ConvergenceKind.EPS, ConvergenceKind.ONE)),
    st.just(ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.ONE)),
    st.just(ConvergenceClass.unknown()),
)
connectives = st.sampled_from(list(Connective))


def parse(text):
    return parse_ltl(text, AB)


# ─── Convergence Classes ─────────────────────────────────────────────────────

class TestConvergenceClass:
    def test_rendering(self):
        assert str(ConvergenceClass.eps(Fraction(3, 4))) == "Eps(3/4)"
        assert str(EPS) == "Eps"
        assert str(ZERO) == "Zero"
        assert str(ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.EPS)) == "Range(Zero, Eps)"

    @pytest.mark.parametrize("build", [
        lambda: ConvergenceClass.eps(Fraction(1)),
        lambda: ConvergenceClass.eps(Fraction(0)),
        lambda: ConvergenceClass(ConvergenceKind.RANGE, low=ConvergenceKind.ONE, high=ConvergenceKind.EPS),
        lambda: ConvergenceClass(ConvergenceKind.ZERO, value=Fraction(1, 2)),
    ])
    def test_invalid(self, build):
        with pytest.raises(ValueError):
            build()

    def test_between_collapses_equal_bounds(self):
        assert ConvergenceClass.between(ConvergenceKind.ONE, ConvergenceKind.ONE) == ONE

    def test_of_density(self):
        assert ConvergenceClass.of_density(Fraction(0)) == ZERO
        assert ConvergenceClass.of_density(Fraction(1)) == ONE
        assert ConvergenceClass.of_density(Fraction(1, 8)).value == Fraction(1, 8)

    def test_negated(self):
        assert ZERO.negated() == ONE
        assert ConvergenceClass.eps(Fraction(1, 4)).negated() == ConvergenceClass.eps(Fraction(3, 4))
        assert ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.EPS).negated() == \
            ConvergenceClass.between(ConvergenceKind.EPS, ConvergenceKind.ONE)


# ─── Composition Table ───────────────────────────────────────────────────────

@pytest.mark.parametrize("connective, left, right, expected", [
    (Connective.AND, ONE, ConvergenceClass.eps(Fraction(3, 4)), ConvergenceClass.eps(Fraction(3, 4))),
    (Connective.OR, EPS, EPS, ConvergenceClass.between(ConvergenceKind.EPS, ConvergenceKind.ONE)),
    (Connective.AND, EPS, EPS, ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.EPS)),
    (Connective.AND, ZERO, ONE, ZERO),
    (Connective.OR, ZERO, ConvergenceClass.eps(Fraction(1, 3)), ConvergenceClass.eps(Fraction(1, 3))),
    (Connective.OR, ConvergenceClass.unknown(), ONE, ONE),
    (Connective.AND, ConvergenceClass.unknown(), ZERO, ZERO),
    (Connective.AND, ConvergenceClass.unknown(), EPS, ConvergenceClass.unknown()),
    (Connective.AND, ConvergenceClass.eps(Fraction(1, 2)), ConvergenceClass.eps(Fraction(1, 2)),
     ConvergenceClass.between(ConvergenceKind.ZERO, ConvergenceKind.EPS)),
])
def test_compose_classes(connective, left, right, expected):
    assert compose_classes(connective, left, right) == expected


@given(connectives, classes, classes)
def test_composition_is_commutative(connective, left, right):
    assert compose_classes(connective, left, right) == compose_classes(connective, right, left)


@given(definite, definite, definite)
def test_composition_is_monotone(low, high, other):
    rank = {kind: k for k, kind in enumerate(KINDS)}
    if rank[low.kind] > rank[high.kind]:
        low, high = high, low

    def bounds(result):
        if result.kind is ConvergenceKind.RANGE:
            return rank[result.low], rank[result.high]
        return rank[result.kind], rank[result.kind]

    for connective in Connective:
        below = bounds(compose_classes(connective, low, other))
        above = bounds(compose_classes(connective, high, other))
        assert below[0] <= above[0] and below[1] <= above[1]


@given(classes, classes)
def test_de_morgan_duality(left, right):
    conjunction = compose_classes(Connective.AND, left, right)
    disjunction = compose_classes(Connective.OR, left.negated(), right.negated())
    assert conjunction.negated().kind == disjunction.kind


# ─── Bounded Safety ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("text, expected", [
    ("a | X b", Fraction(3, 4)),
    ("a & X b & X X b", Fraction(1, 8)),
    ("X a & ! X a", Fraction(0)),
    ("a | ! a", Fraction(1)),
    ("X X X (b & a)", Fraction(1, 4)),
])
def test_bounded_safety_density(text, expected):
    assert bounded_safety_density(parse(text), AB) == expected


def test_bounded_safety_density_rejects_temporal_operators():
    with pytest.raises(FragmentError):
        bounded_safety_density(parse("F a"), AB)


def test_bounded_safety_density_cap():
    with pytest.raises(ResourceCapExceeded, match="prefixes"):
        bounded_safety_density(parse("X X X a"), AB, cap=100)


@pytest.mark.parametrize("text", ["a | X b", "a & X b & X X b", "X a -> b"])
def test_bounded_safety_density_equals_rate_beyond_depth(text):
    formula = parse(text)
    density = bounded_safety_density(formula, AB)
    curve = density_curve(FormulaPredicate(formula, AB), AB, 5)
    assert all(curve.rate(n) == density for n in range(3, 6))


# ─── Convergence Class of Formulas ───────────────────────────────────────────

@pytest.mark.parametrize("text, expected", [
    ("G (a & X b)", ZERO),
    ("G F a", ONE),
    ("G F (a & X b)", ONE),
    ("G F (a & ! a)", ZERO),
    ("F G a", ZERO),
    ("F G (a | ! a)", ONE),
    ("G true", ONE),
    ("F false", ZERO),
    ("a | X b", ConvergenceClass.eps(Fraction(3, 4))),
    ("a & X b & X X b", ConvergenceClass.eps(Fraction(1, 8))),
    ("X a & ! X a", ZERO),
    ("G b & F (a & X b)", ZERO),
    ("X X X (b & a) | F a", ONE),
    ("! G (a & X b)", ONE),
    ("! (a | X b)", ConvergenceClass.eps(Fraction(1, 4))),
    ("(a U b) & G a", ZERO),
    ("(a U b) | G a", ConvergenceClass.unknown()),
    ("G F a -> a", ConvergenceClass.eps(Fraction(1, 2))),
])
def test_convergence_class(text, expected):
    assert convergence_class(parse(text), AB) == expected


@pytest.mark.parametrize("text", ["G (a & X b)", "G F a", "a | X b", "F G a", "F (a & X b)"])
def test_negation_flips_class(text):
    formula = parse(text)
    assert convergence_class(Not(formula), AB) == convergence_class(formula, AB).negated()


def test_unclassified_leaves_stay_unknown():
    alphabet = Alphabet(("a",))
    result = reduce_formula(parse_ltl("(a U X a) & (a U X a)", alphabet), alphabet)
    assert result.convergence == ConvergenceClass.unknown()


# ─── Reduction ───────────────────────────────────────────────────────────────

def test_worked_reduction():
    reduction = reduce_formula(parse(WORKED), AB)
    assert reduction.residual == parse("a | X b")
    assert reduction.convergence == ConvergenceClass.eps(Fraction(3, 4))
    assert reduction.offending is None

    steps = [str(step) for step in reduction.trace]
    assert "rule Eps(1/4) | One = One" in steps
    assert "rule Zero & One = Zero" in steps
    assert "rule Eps(3/4) | Zero = Eps(3/4)" in steps
    assert "replace G b by false" in steps
    assert "replace F a by true" in steps


def test_bounded_safety_parts_merge_exactly():
    reduction = reduce_formula(parse("((a | X b) & G F a) & (X a | b)"), AB)
    kinds = {type(step) for step in reduction.trace}
    assert {LeafClassified, BoundedSafetyMerged, ConstantSubstituted, RuleApplied} <= kinds
    assert reduction.residual == parse("(a | X b) & (X a | b)")
    assert reduction.convergence == ConvergenceClass.eps(Fraction(9, 16))
    assert bounded_safety_density(reduction.residual, AB) == Fraction(9, 16)


def test_unclassified_leaf_is_reported():
    reduction = reduce_formula(parse("(a U b) | G a"), AB)
    assert reduction.convergence.kind is ConvergenceKind.UNKNOWN
    assert reduction.offending == parse("a U b")


def test_absorbed_unclassified_leaf_still_reported():
    reduction = reduce_formula(parse("(a U b) & G a"), AB)
    assert reduction.convergence == ZERO
    assert reduction.residual == FALSE
    assert reduction.offending == parse("a U b")


def test_constant_residual():
    assert reduce_formula(parse("G b | F a"), AB).residual == TRUE
    assert reduce_formula(parse("a | X b"), AB).residual == Or(parse("a"), parse("X b"))


def test_leaf_cap_is_a_resource_error():
    with pytest.raises(ResourceCapExceeded):
        reduce_formula(parse("G (X X X a) | b"), AB, cap=50)


@pytest.mark.parametrize("text, expected", [
    (WORKED, Fraction(3, 4)),
    ("G b & F (a & X b)", Fraction(0)),
    ("X X X (b & a) | F a", Fraction(1)),
])
def test_reduction_agrees_with_enumeration(text, expected):
    curve = density_curve(FormulaPredicate(parse(text), AB), AB, 4)
    assert abs(curve.rate(4) - expected) <= Fraction(3, 10)


@pytest.mark.slow
@pytest.mark.parametrize("text, expected", [
    (WORKED, Fraction(3, 4)),
    ("G b & F (a & X b)", Fraction(0)),
    ("X X X (b & a) | F a", Fraction(1)),
])
def test_reduction_agrees_with_enumeration_at_ten(text, expected):
    curve = density_curve(FormulaPredicate(parse(text), AB), AB, 10, jobs=2)
    assert abs(curve.rate(10) - expected) <= Fraction(1, 10)
