"""
LTL Abstract Syntax Module.
Immutable formula nodes, a precedence-aware pretty-printer, negation
normal form, and recognition of the syntactic fragments
(bounded-safety, invariant, guarantee, persistence, response).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from errors import FragmentError

logger = logging.getLogger(__name__)


# ─── Formula Nodes ───────────────────────────────────────────────────────────

class Formula:
    """Base class of all LTL nodes."""

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Globally(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


TRUE = TrueConst()
FALSE = FalseConst()

BOOLEAN_NODES = (TrueConst, FalseConst, Atom, Not, And, Or, Implies)
TEMPORAL_NODES = (Next, Eventually, Globally, Until, Release)


def conjunction(*operands: Formula) -> Formula:
    """Left-associated conjunction; TRUE when empty."""
    result: Formula = TRUE
    for operand in operands:
        result = operand if result == TRUE else And(result, operand)
    return result


def disjunction(*operands: Formula) -> Formula:
    """Left-associated disjunction; FALSE when empty."""
    result: Formula = FALSE
    for operand in operands:
        result = operand if result == FALSE else Or(result, operand)
    return result


def subformulas(formula: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    yield formula
    for child in formula.children():
        yield from subformulas(child)


def atoms(formula: Formula) -> set[str]:
    return {node.name for node in subformulas(formula) if isinstance(node, Atom)}


# ─── Pretty Printer ──────────────────────────────────────────────────────────

# Binding strength, weakest first; mirrors the parser grammar.
_PRECEDENCE = {
    Implies: 1,
    Or: 2,
    And: 3,
    Not: 4, Next: 4, Eventually: 4, Globally: 4,
    Until: 5, Release: 5,
    TrueConst: 6, FalseConst: 6, Atom: 6,
}

_UNARY_SYMBOL = {Not: "!", Next: "X", Eventually: "F", Globally: "G"}
_BINARY_SYMBOL = {Implies: "->", Or: "|", And: "&", Until: "U", Release: "R"}


def to_text(formula: Formula) -> str:
    """Render in the concrete syntax accepted by the parser."""
    match formula:
        case TrueConst():
            return "true"
        case FalseConst():
            return "false"
        case Atom(name=name):
            return name
        case Not() | Next() | Eventually() | Globally():
            symbol = _UNARY_SYMBOL[type(formula)]
            return f"{symbol} {_wrap(formula.operand, 4)}"
        case And() | Or():
            # left-associative
            level = _PRECEDENCE[type(formula)]
            left = _wrap(formula.left, level)
            right = _wrap(formula.right, level + 1)
            return f"{left} {_BINARY_SYMBOL[type(formula)]} {right}"
        case Implies():
            left = _wrap(formula.left, 2)
            right = _wrap(formula.right, 1)
            return f"{left} -> {right}"
        case Until() | Release():
            left = _wrap(formula.left, 6)
            right = _wrap(formula.right, 4)
            return f"{left} {_BINARY_SYMBOL[type(formula)]} {right}"
    raise TypeError(f"Not an LTL formula: {formula!r}")


def _wrap(formula: Formula, minimum: int) -> str:
    text = to_text(formula)
    if _PRECEDENCE[type(formula)] < minimum:
        return f"({text})"
    return text


# ─── Normalization ───────────────────────────────────────────────────────────

def to_nnf(formula: Formula) -> Formula:
    """
    Rewrite into negation normal form over {!, &, |, X, U, R}.
    Negation only occurs directly above atoms; F and G become U and R.
    """
    return _nnf(formula, negate=False)


def _nnf(formula: Formula, negate: bool) -> Formula:
    match formula:
        case TrueConst():
            return FALSE if negate else TRUE
        case FalseConst():
            return TRUE if negate else FALSE
        case Atom():
            return Not(formula) if negate else formula
        case Not(operand=operand):
            return _nnf(operand, not negate)
        case And(left=left, right=right):
            kind = Or if negate else And
            return kind(_nnf(left, negate), _nnf(right, negate))
        case Or(left=left, right=right):
            kind = And if negate else Or
            return kind(_nnf(left, negate), _nnf(right, negate))
        case Implies(left=left, right=right):
            return _nnf(Or(Not(left), right), negate)
        case Next(operand=operand):
            return Next(_nnf(operand, negate))
        case Eventually(operand=operand):
            return _nnf(Until(TRUE, operand), negate)
        case Globally(operand=operand):
            return _nnf(Release(FALSE, operand), negate)
        case Until(left=left, right=right):
            kind = Release if negate else Until
            return kind(_nnf(left, negate), _nnf(right, negate))
        case Release(left=left, right=right):
            kind = Until if negate else Release
            return kind(_nnf(left, negate), _nnf(right, negate))
    raise TypeError(f"Not an LTL formula: {formula!r}")


# ─── Syntactic Fragments ─────────────────────────────────────────────────────

class SyntacticClass(str, Enum):
    BOUNDED_SAFETY = "BoundedSafety"
    INVARIANT = "Invariant"
    GUARANTEE = "Guarantee"
    PERSISTENCE = "Persistence"
    RESPONSE = "Response"
    NOT_IN_FRAGMENT = "NotInFragment"


def is_bounded_safety(formula: Formula) -> bool:
    """Only boolean connectives and Next."""
    return all(
        isinstance(node, BOOLEAN_NODES + (Next,)) for node in subformulas(formula)
    )


def classify_syntactic(formula: Formula) -> SyntacticClass:
    """Purely syntactic; G true is an Invariant, not BoundedSafety."""
    if is_bounded_safety(formula):
        return SyntacticClass.BOUNDED_SAFETY
    match formula:
        case Eventually(operand=Globally(operand=body)) if is_bounded_safety(body):
            return SyntacticClass.PERSISTENCE
        case Globally(operand=Eventually(operand=body)) if is_bounded_safety(body):
            return SyntacticClass.RESPONSE
        case Globally(operand=body) if is_bounded_safety(body):
            return SyntacticClass.INVARIANT
        case Eventually(operand=body) if is_bounded_safety(body):
            return SyntacticClass.GUARANTEE
    return SyntacticClass.NOT_IN_FRAGMENT


def fragment_body(formula: Formula) -> Formula:
    """The bounded-safety body ψ of Gψ, Fψ, FGψ or GFψ (ψ itself for bounded safety)."""
    kind = classify_syntactic(formula)
    if kind is SyntacticClass.BOUNDED_SAFETY:
        return formula
    if kind in (SyntacticClass.INVARIANT, SyntacticClass.GUARANTEE):
        return formula.operand
    if kind in (SyntacticClass.PERSISTENCE, SyntacticClass.RESPONSE):
        return formula.operand.operand
    raise FragmentError(f"'{formula}' is not in a recognized fragment.")


def next_depth(formula: Formula) -> int:
    """
    Maximum nesting depth of Next in a bounded-safety formula; its value
    depends only on positions 0..next_depth of the word.

    Raises:
        FragmentError: If the formula contains U, R, F or G.
    """
    if not is_bounded_safety(formula):
        raise FragmentError(
            f"next_depth requires a bounded-safety formula, got '{formula}'."
        )
    return _depth(formula)


def _depth(formula: Formula) -> int:
    inner = max((_depth(child) for child in formula.children()), default=0)
    return inner + 1 if isinstance(formula, Next) else inner
