"""
LTL Concrete-Syntax Parser.
LALR grammar (lark) and a Transformer building the AST of ltl.py.

Binding, weakest to strongest: '->' (right-assoc), '|', '&',
unary '! X F G', 'U R' (right-assoc). Atoms are proposition names;
'true' and 'false' are literals.
"""

import logging
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from alphabet import Alphabet
from errors import LtlSyntaxError, UnknownPropositionError
from ltl import (
    FALSE, TRUE, And, Atom, Eventually, Formula, Globally, Implies, Next, Not,
    Or, Release, Until,
)

logger = logging.getLogger(__name__)

LTL_GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction "->" implication -> implies
                | disjunction

    ?disjunction: disjunction "|" conjunction -> or_
                | conjunction

    ?conjunction: conjunction "&" unary -> and_
                | unary

    ?unary: "!" unary -> not_
          | "X" unary -> next_
          | "F" unary -> eventually
          | "G" unary -> globally
          | binary

    ?binary: primary "U" unary -> until
           | primary "R" unary -> release
           | primary

    ?primary: "true" -> true
            | "false" -> false
            | NAME -> atom
            | "(" implication ")"

    NAME: /(?!(?:X|F|G|U|R|true|false)(?![A-Za-z0-9_]))[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""

# ─── Module-Level Singleton ──────────────────────────────────────────────────
_parser: Optional[Lark] = None


def _get_parser() -> Lark:
    """Build the LALR parser once and cache it."""
    global _parser
    if _parser is None:
        _parser = Lark(LTL_GRAMMAR, parser="lalr", propagate_positions=True)
        logger.debug("LTL parser built.")
    return _parser


@v_args(inline=True)
class _AstBuilder(Transformer):
    """Turns the lark parse tree into ltl.Formula nodes."""

    def __init__(self, alphabet: Alphabet):
        super().__init__()
        self.alphabet = alphabet

    def atom(self, token: Token) -> Formula:
        name = str(token)
        if name not in self.alphabet.propositions:
            raise UnknownPropositionError(name, token.start_pos)
        return Atom(name)

    def true(self) -> Formula:
        return TRUE

    def false(self) -> Formula:
        return FALSE

    def not_(self, operand):
        return Not(operand)

    def next_(self, operand):
        return Next(operand)

    def eventually(self, operand):
        return Eventually(operand)

    def globally(self, operand):
        return Globally(operand)

    def and_(self, left, right):
        return And(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def until(self, left, right):
        return Until(left, right)

    def release(self, left, right):
        return Release(left, right)


def parse_ltl(text: str, alphabet: Alphabet) -> Formula:
    """
    Parse an LTL formula over the given alphabet.

    Args:
        text: Formula in the concrete syntax, e.g. "a U X b".
        alphabet: Propositions the formula may mention.

    Returns:
        The formula's AST.

    Raises:
        LtlSyntaxError: Malformed text, with the offending offset.
        UnknownPropositionError: An atom is not in the alphabet.
    """
    try:
        tree = _get_parser().parse(text)
    except UnexpectedEOF as e:
        raise LtlSyntaxError("Unexpected end of formula", len(text)) from e
    except UnexpectedInput as e:
        position = e.pos_in_stream if e.pos_in_stream is not None else len(text)
        if position < 0:
            position = len(text)
        raise LtlSyntaxError(f"Syntax error near {text[position:position + 8]!r}", position) from e

    try:
        formula = _AstBuilder(alphabet).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, UnknownPropositionError):
            raise e.orig_exc from None
        raise

    logger.info(f"Parsed LTL formula '{formula}' over {{{alphabet}}}.")
    return formula
