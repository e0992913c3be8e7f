"""
Composition Calculus Module.
Convergence classes of fragment formulas, their composition under
conjunction and disjunction, reduction of a boolean combination of
fragment formulas to a bounded-safety residual, and the exact density
of bounded-safety formulas by prefix enumeration.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from alphabet import Alphabet
from lasso_lab import guard_enumeration
from ltl import (
    FALSE, TRUE, And, Eventually, FalseConst, Formula, Globally, Implies, Not, Or,
    SyntacticClass, TrueConst, classify_syntactic, fragment_body, next_depth,
)
from semantics import LassoEvaluator

logger = logging.getLogger(__name__)


# ─── Convergence Classes ─────────────────────────────────────────────────────

class ConvergenceKind(str, Enum):
    ZERO = "Zero"
    EPS = "Eps"
    ONE = "One"
    RANGE = "Range"
    UNKNOWN = "Unknown"


# Order of the definite symbols.
_RANK = {ConvergenceKind.ZERO: 0, ConvergenceKind.EPS: 1, ConvergenceKind.ONE: 2}
_BY_RANK = {rank: kind for kind, rank in _RANK.items()}


@dataclass(frozen=True)
class ConvergenceClass:
    kind: ConvergenceKind
    value: Optional[Fraction] = None            # exact density of an Eps class, when known
    low: Optional[ConvergenceKind] = None       # Range bounds
    high: Optional[ConvergenceKind] = None

    def __post_init__(self):
        if self.value is not None and not (
            self.kind is ConvergenceKind.EPS and 0 < self.value < 1
        ):
            raise ValueError(f"An exact value must lie strictly between 0 and 1, got {self.value}.")
        if self.kind is ConvergenceKind.RANGE:
            if self.low not in _RANK or self.high not in _RANK or _RANK[self.low] >= _RANK[self.high]:
                raise ValueError(f"Invalid range bounds ({self.low}, {self.high}).")

    @classmethod
    def zero(cls) -> "ConvergenceClass":
        return cls(ConvergenceKind.ZERO)

    @classmethod
    def one(cls) -> "ConvergenceClass":
        return cls(ConvergenceKind.ONE)

    @classmethod
    def eps(cls, value: Optional[Fraction] = None) -> "ConvergenceClass":
        return cls(ConvergenceKind.EPS, value)

    @classmethod
    def between(cls, low: ConvergenceKind, high: ConvergenceKind) -> "ConvergenceClass":
        if low == high:
            return cls(low)
        return cls(ConvergenceKind.RANGE, low=low, high=high)

    @classmethod
    def unknown(cls) -> "ConvergenceClass":
        return cls(ConvergenceKind.UNKNOWN)

    @classmethod
    def of_density(cls, value: Fraction) -> "ConvergenceClass":
        if value == 0:
            return cls.zero()
        if value == 1:
            return cls.one()
        return cls.eps(value)

    @property
    def is_exact(self) -> bool:
        """The asymptotic density is known exactly."""
        return self.kind in (ConvergenceKind.ZERO, ConvergenceKind.ONE) or self.value is not None

    @property
    def density(self) -> Optional[Fraction]:
        if self.kind is ConvergenceKind.ZERO:
            return Fraction(0)
        if self.kind is ConvergenceKind.ONE:
            return Fraction(1)
        return self.value

    def negated(self) -> "ConvergenceClass":
        """Class of the complement property."""
        flip = {ConvergenceKind.ZERO: ConvergenceKind.ONE, ConvergenceKind.ONE: ConvergenceKind.ZERO,
                ConvergenceKind.EPS: ConvergenceKind.EPS}
        match self.kind:
            case ConvergenceKind.EPS:
                return ConvergenceClass.eps(None if self.value is None else 1 - self.value)
            case ConvergenceKind.RANGE:
                return ConvergenceClass.between(flip[self.high], flip[self.low])
            case ConvergenceKind.UNKNOWN:
                return self
        return ConvergenceClass(flip[self.kind])

    def _interval(self) -> tuple[int, int]:
        if self.kind is ConvergenceKind.RANGE:
            return _RANK[self.low], _RANK[self.high]
        return _RANK[self.kind], _RANK[self.kind]

    def __str__(self) -> str:
        if self.kind is ConvergenceKind.EPS and self.value is not None:
            return f"Eps({self.value})"
        if self.kind is ConvergenceKind.RANGE:
            return f"Range({self.low.value}, {self.high.value})"
        return self.kind.value


class Connective(str, Enum):
    AND = "&"
    OR = "|"


# Symbol-level composition: (connective, left rank, right rank) -> (low rank, high rank).
def _symbol_rule(connective: Connective, left: int, right: int) -> tuple[int, int]:
    zero, eps, one = 0, 1, 2
    if connective is Connective.AND:
        if zero in (left, right):
            return zero, zero
        if left == one:
            return right, right
        if right == one:
            return left, left
        return zero, eps
    if one in (left, right):
        return one, one
    if left == zero:
        return right, right
    if right == zero:
        return left, left
    return eps, one


def compose_classes(
    connective: Connective,
    left: ConvergenceClass,
    right: ConvergenceClass,
) -> ConvergenceClass:
    """
    Composition table for ∧ and ∨, lifted to ranges by taking the hull over
    every symbol a range admits. Identity rules (1 ∧ c, 0 ∨ c) keep the
    other operand whole, including an exact Eps value.
    """
    identity, absorbing = (
        (ConvergenceKind.ONE, ConvergenceKind.ZERO) if connective is Connective.AND
        else (ConvergenceKind.ZERO, ConvergenceKind.ONE)
    )
    if absorbing in (left.kind, right.kind):
        return ConvergenceClass(absorbing)
    if left.kind is identity:
        return right
    if right.kind is identity:
        return left
    if ConvergenceKind.UNKNOWN in (left.kind, right.kind):
        return ConvergenceClass.unknown()

    (left_low, left_high), (right_low, right_high) = left._interval(), right._interval()
    outcomes = [
        _symbol_rule(connective, a, b)
        for a in range(left_low, left_high + 1)
        for b in range(right_low, right_high + 1)
    ]
    low = min(outcome[0] for outcome in outcomes)
    high = max(outcome[1] for outcome in outcomes)
    return ConvergenceClass.between(_BY_RANK[low], _BY_RANK[high])


# ─── Bounded Safety ──────────────────────────────────────────────────────────

def bounded_safety_density(formula: Formula, alphabet: Alphabet, cap: Optional[int] = None) -> Fraction:
    """
    Exact asymptotic density of a bounded-safety formula: the share of the
    |Σ|^(d+1) words of length d+1 (d = Next depth) that satisfy it.

    Raises:
        FragmentError: If the formula uses U, R, F or G.
        ResourceCapExceeded: If |Σ|^(d+1) exceeds the cap.
    """
    depth = next_depth(formula)
    total = alphabet.size ** (depth + 1)
    guard_enumeration(total, cap, what="prefixes")
    evaluator = LassoEvaluator(formula, alphabet)
    satisfied = sum(
        1
        for word in itertools.product(alphabet.letters(), repeat=depth + 1)
        if evaluator.on_prefix(word)
    )
    logger.debug(f"'{formula}': {satisfied} of {total} prefixes of length {depth + 1} satisfy it.")
    return Fraction(satisfied, total)


# ─── Reduction Trace ─────────────────────────────────────────────────────────

class TraceStep:
    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class LeafClassified(TraceStep):
    leaf: Formula
    syntactic: SyntacticClass
    convergence: ConvergenceClass

    def describe(self) -> str:
        return f"leaf {self.leaf}: {self.syntactic.value} -> {self.convergence}"


@dataclass(frozen=True)
class ConstantSubstituted(TraceStep):
    leaf: Formula
    constant: Formula

    def describe(self) -> str:
        return f"replace {self.leaf} by {self.constant}"


@dataclass(frozen=True)
class RuleApplied(TraceStep):
    connective: Connective
    left: ConvergenceClass
    right: ConvergenceClass
    result: ConvergenceClass

    def describe(self) -> str:
        return f"rule {self.left} {self.connective.value} {self.right} = {self.result}"


@dataclass(frozen=True)
class BoundedSafetyMerged(TraceStep):
    formula: Formula
    convergence: ConvergenceClass

    def describe(self) -> str:
        return f"merge bounded safety {self.formula} -> {self.convergence}"


@dataclass(frozen=True)
class Reduction:
    residual: Formula
    convergence: ConvergenceClass
    trace: tuple[TraceStep, ...] = field(default_factory=tuple)
    offending: Optional[Formula] = None     # first leaf outside every fragment


# ─── Reduction ───────────────────────────────────────────────────────────────

_DUAL = {
    SyntacticClass.INVARIANT: lambda body: Eventually(Not(body)),
    SyntacticClass.GUARANTEE: lambda body: Globally(Not(body)),
    SyntacticClass.PERSISTENCE: lambda body: Globally(Eventually(Not(body))),
    SyntacticClass.RESPONSE: lambda body: Eventually(Globally(Not(body))),
}


@dataclass
class _Part:
    formula: Formula
    convergence: ConvergenceClass
    bounded_safety: bool        # formula is a bounded-safety formula with an exact density


class _Reducer:
    def __init__(self, alphabet: Alphabet, cap: Optional[int]):
        self.alphabet = alphabet
        self.cap = cap
        self.trace: list[TraceStep] = []
        self.offending: Optional[Formula] = None

    # Boolean skeleton with negations pushed onto the fragment leaves.
    def skeleton(self, node: Formula, negate: bool = False) -> Formula:
        kind = classify_syntactic(node)
        if kind is not SyntacticClass.NOT_IN_FRAGMENT:
            if not negate:
                return node
            if kind is SyntacticClass.BOUNDED_SAFETY:
                return Not(node)
            return _DUAL[kind](fragment_body(node))
        match node:
            case Not(operand=operand):
                return self.skeleton(operand, not negate)
            case And(left=left, right=right):
                kind_of = Or if negate else And
                return kind_of(self.skeleton(left, negate), self.skeleton(right, negate))
            case Or(left=left, right=right):
                kind_of = And if negate else Or
                return kind_of(self.skeleton(left, negate), self.skeleton(right, negate))
            case Implies(left=left, right=right):
                return self.skeleton(Or(Not(left), right), negate)
        return Not(node) if negate else node

    def fold(self, node: Formula) -> _Part:
        if isinstance(node, (And, Or)) and classify_syntactic(node) is SyntacticClass.NOT_IN_FRAGMENT:
            connective = Connective.AND if isinstance(node, And) else Connective.OR
            return self.combine(connective, self.fold(node.left), self.fold(node.right))
        return self.leaf(node)

    def leaf(self, node: Formula) -> _Part:
        kind = classify_syntactic(node)
        if kind is SyntacticClass.NOT_IN_FRAGMENT:
            convergence = ConvergenceClass.unknown()
            if self.offending is None:
                self.offending = node
            self.trace.append(LeafClassified(node, kind, convergence))
            return _Part(node, convergence, False)

        if kind is SyntacticClass.BOUNDED_SAFETY:
            convergence = ConvergenceClass.of_density(bounded_safety_density(node, self.alphabet, self.cap))
        else:
            body = bounded_safety_density(fragment_body(node), self.alphabet, self.cap)
            if kind in (SyntacticClass.INVARIANT, SyntacticClass.PERSISTENCE):
                convergence = ConvergenceClass.one() if body == 1 else ConvergenceClass.zero()
            else:
                convergence = ConvergenceClass.zero() if body == 0 else ConvergenceClass.one()
        self.trace.append(LeafClassified(node, kind, convergence))
        return self.settle(node, convergence, kind is SyntacticClass.BOUNDED_SAFETY)

    def settle(self, node: Formula, convergence: ConvergenceClass, bounded_safety: bool) -> _Part:
        """Replace a Zero or One part by the matching constant."""
        if convergence.kind in (ConvergenceKind.ZERO, ConvergenceKind.ONE):
            constant = TRUE if convergence.kind is ConvergenceKind.ONE else FALSE
            if node != constant:
                self.trace.append(ConstantSubstituted(node, constant))
            return _Part(constant, convergence, True)
        return _Part(node, convergence, bounded_safety)

    def combine(self, connective: Connective, left: _Part, right: _Part) -> _Part:
        join = And if connective is Connective.AND else Or
        constants = (TrueConst, FalseConst)
        if (
            left.bounded_safety and right.bounded_safety
            and not isinstance(left.formula, constants) and not isinstance(right.formula, constants)
        ):
            # Next depth of the merge is that of the deeper part, so this stays under the cap.
            merged = join(left.formula, right.formula)
            convergence = ConvergenceClass.of_density(
                bounded_safety_density(merged, self.alphabet, self.cap)
            )
            self.trace.append(BoundedSafetyMerged(merged, convergence))
            return self.settle(merged, convergence, True)

        result = compose_classes(connective, left.convergence, right.convergence)
        self.trace.append(RuleApplied(connective, left.convergence, right.convergence, result))
        match result.kind:
            case ConvergenceKind.ZERO:
                return _Part(FALSE, result, True)
            case ConvergenceKind.ONE:
                return _Part(TRUE, result, True)
        if result is left.convergence and isinstance(right.formula, constants):
            return left
        if result is right.convergence and isinstance(left.formula, constants):
            return right
        return _Part(join(left.formula, right.formula), result, False)


def reduce_formula(formula: Formula, alphabet: Alphabet, cap: Optional[int] = None) -> Reduction:
    """
    Classify every maximal fragment leaf, substitute constants for Zero and
    One leaves, simplify, and merge bounded-safety parts into one residual
    whose density is exact.

    Args:
        formula: Boolean combination (&, |, !, ->) of fragment formulas.
        alphabet: Alphabet the atoms range over.
        cap: Bound on prefix enumeration (defaults to LASSO_DENSITY_CAP).

    Returns:
        The residual formula, its convergence class, the trace, and the first
        leaf outside every fragment (class Unknown) if there is one.
    """
    reducer = _Reducer(alphabet, cap)
    part = reducer.fold(reducer.skeleton(formula))
    logger.info(f"Reduced '{formula}' to '{part.formula}' with class {part.convergence}.")
    return Reduction(part.formula, part.convergence, tuple(reducer.trace), reducer.offending)


def convergence_class(formula: Formula, alphabet: Alphabet, cap: Optional[int] = None) -> ConvergenceClass:
    """
    Convergence class of a fragment formula or a boolean combination of them.

    Raises:
        UnknownPropositionError: If an atom is missing from the alphabet.
    """
    return reduce_formula(formula, alphabet, cap).convergence

