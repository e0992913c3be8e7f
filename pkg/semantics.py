"""
LTL Semantics over Lassos.
Evaluates a formula on the n positions of a lasso's base, where the
successor of position n-1 is the loop entry |u|. Truth sets are int
bitmasks (bit i <=> the subformula holds at position i); Until is a
least and Release a greatest fixed point over this successor graph.
"""

import logging
from typing import Sequence

from alphabet import Alphabet, Lasso
from errors import UnknownPropositionError
from ltl import (
    And, Atom, FalseConst, Formula, Next, Not, Or, Release, TrueConst, Until,
    atoms, to_nnf,
)

logger = logging.getLogger(__name__)

# Opcodes of the compiled postfix program.
_ATOM, _NOT_ATOM, _TRUE, _FALSE, _AND, _OR, _NEXT, _UNTIL, _RELEASE = range(9)


class LassoEvaluator:
    """
    Reusable evaluator for one formula over one alphabet.
    The NNF is compiled once into a postfix program over position bitmasks.
    Atom masks depend on the base only, so all loop starts of one base share them.
    """

    def __init__(self, formula: Formula, alphabet: Alphabet):
        unknown = atoms(formula) - set(alphabet.propositions)
        if unknown:
            raise UnknownPropositionError(sorted(unknown)[0], 0)
        self.formula = formula
        self.alphabet = alphabet
        self.nnf = to_nnf(formula)
        index = {name: k for k, name in enumerate(alphabet.propositions)}
        self.program: tuple[tuple[int, int], ...] = tuple(_compile(self.nnf, index))
        width = len(alphabet.propositions)
        self._bits = tuple(
            tuple(k for k in range(width) if letter >> k & 1) for letter in alphabet.letters()
        )

    def __call__(self, lasso: Lasso) -> bool:
        return bool(self.truth_mask(lasso) & 1)

    def truth_mask(self, lasso: Lasso) -> int:
        """Positions 0..n-1 of the base at which the formula holds."""
        base = lasso.prefix + lasso.loop
        return _run(self.program, self._atom_masks(base), len(base), len(lasso.prefix))

    def count_loop_starts(self, base: Sequence[int]) -> int:
        """Number of the lassos (base[:k], base[k:]), k = 0..n-1, that satisfy the formula."""
        masks = self._atom_masks(base)
        n = len(base)
        return sum(_run(self.program, masks, n, k) & 1 for k in range(n))

    def on_prefix(self, word: Sequence[int]) -> bool:
        """Evaluate on the finite word closed into a lasso on its last letter."""
        word = tuple(word)
        return self(Lasso(word[:-1], word[-1:]))

    def _atom_masks(self, base: Sequence[int]) -> list[int]:
        masks = [0] * len(self.alphabet.propositions)
        for i, letter in enumerate(base):
            bit = 1 << i
            for k in self._bits[letter]:
                masks[k] |= bit
        return masks


def _compile(node: Formula, index: dict[str, int]) -> list[tuple[int, int]]:
    """Postorder program of an NNF formula; operands come before their operator."""
    match node:
        case Atom(name=name):
            return [(_ATOM, index[name])]
        case Not(operand=Atom(name=name)):
            return [(_NOT_ATOM, index[name])]
        case TrueConst():
            return [(_TRUE, 0)]
        case FalseConst():
            return [(_FALSE, 0)]
        case Next(operand=operand):
            return _compile(operand, index) + [(_NEXT, 0)]
    binary = {And: _AND, Or: _OR, Until: _UNTIL, Release: _RELEASE}
    opcode = binary.get(type(node))
    if opcode is None:
        raise TypeError(f"Unexpected node in NNF: {node!r}")
    return _compile(node.left, index) + _compile(node.right, index) + [(opcode, 0)]


def _run(program: Sequence[tuple[int, int]], masks: list[int], n: int, loop_start: int) -> int:
    full = (1 << n) - 1
    top = 1 << (n - 1)
    stack: list[int] = []
    push, pop = stack.append, stack.pop
    for opcode, arg in program:
        if opcode == _ATOM:
            push(masks[arg])
        elif opcode == _AND:
            right = pop()
            stack[-1] &= right
        elif opcode == _OR:
            right = pop()
            stack[-1] |= right
        elif opcode == _NEXT:
            mask = stack[-1]
            stack[-1] = (mask >> 1) | top if mask >> loop_start & 1 else mask >> 1
        elif opcode == _NOT_ATOM:
            push(full & ~masks[arg])
        elif opcode == _TRUE:
            push(full)
        elif opcode == _FALSE:
            push(0)
        elif opcode == _UNTIL:
            goal = pop()
            hold = pop()
            current = goal
            while True:
                following = (current >> 1) | top if current >> loop_start & 1 else current >> 1
                updated = goal | (hold & following)
                if updated == current:
                    break
                current = updated
            push(current)
        else:
            keep = pop()
            release = pop()
            current = full
            while True:
                following = (current >> 1) | top if current >> loop_start & 1 else current >> 1
                updated = keep & (release | following)
                if updated == current:
                    break
                current = updated
            push(current)
    return stack[0]


def eval_lasso(formula: Formula, lasso: Lasso, alphabet: Alphabet) -> bool:
    """
    Decide u·v^ω ⊨ φ.

    Args:
        formula: Any LTL formula whose atoms belong to the alphabet.
        lasso: The lasso (u, v).
        alphabet: Alphabet the lasso's letters are drawn from.

    Returns:
        True iff the induced ultimately periodic word satisfies the formula.
    """
    return LassoEvaluator(formula, alphabet)(lasso)


def eval_prefix(formula: Formula, word: tuple[int, ...], alphabet: Alphabet) -> bool:
    """
    Positional evaluation of a bounded-safety formula on a finite word whose
    length exceeds its Next depth; the word is closed into a lasso on its last letter.
    """
    return LassoEvaluator(formula, alphabet).on_prefix(word)
