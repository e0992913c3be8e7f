"""
Alphabets and Lassos.
A letter is a subset of the atomic propositions, stored as an int bitmask
(bit k set <=> proposition k holds). A lasso (u, v) induces the word u·v^ω.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from errors import AlphabetError

logger = logging.getLogger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
RESERVED_NAMES = frozenset({"X", "F", "G", "U", "R", "true", "false"})


@dataclass(frozen=True)
class Alphabet:
    """Σ = 2^AP over an ordered list of distinct proposition names."""

    propositions: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.propositions)
        object.__setattr__(self, "propositions", names)
        for name in names:
            if not _NAME.fullmatch(name):
                raise AlphabetError(
                    f"Invalid proposition name {name!r}: use letters, digits and "
                    f"underscores, not starting with a digit."
                )
            if name in RESERVED_NAMES:
                raise AlphabetError(f"Proposition name {name!r} is an LTL keyword.")
        if len(set(names)) != len(names):
            raise AlphabetError(f"Duplicate proposition names in {list(names)}.")

    @classmethod
    def from_text(cls, text: str) -> "Alphabet":
        """Build an alphabet from 'a,b' or 'a b'."""
        names = [part for part in re.split(r"[,\s]+", text.strip()) if part]
        return cls(tuple(names))

    @property
    def size(self) -> int:
        return 1 << len(self.propositions)

    def letters(self) -> range:
        return range(self.size)

    def index(self, name: str) -> int:
        try:
            return self.propositions.index(name)
        except ValueError:
            raise AlphabetError(
                f"Unknown proposition '{name}' (alphabet: {', '.join(self.propositions)})"
            ) from None

    def format_letter(self, letter: int) -> str:
        """Render a letter as '{p,q}' in alphabet order; '{}' is the empty letter."""
        names = [
            name for k, name in enumerate(self.propositions) if letter >> k & 1
        ]
        return "{" + ",".join(names) + "}"

    def parse_letter(self, text: str) -> int:
        """Parse '{p, q}' (order and spacing irrelevant) into a letter."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise AlphabetError(f"Letter must be written in braces: {text!r}")
        letter = 0
        for name in re.split(r"[,\s]+", body[1:-1].strip()):
            if name:
                letter |= 1 << self.index(name)
        return letter

    def holds(self, letter: int, name: str) -> bool:
        return bool(letter >> self.index(name) & 1)

    def __str__(self) -> str:
        return ",".join(self.propositions)


class Lasso(NamedTuple):
    """A pair (u, v) of finite words; |v| >= 1. Letters are alphabet bitmasks."""

    prefix: tuple[int, ...]
    loop: tuple[int, ...]

    @classmethod
    def of(cls, prefix: Sequence[int], loop: Sequence[int]) -> "Lasso":
        if not loop:
            raise AlphabetError("The loop of a lasso must be nonempty.")
        return cls(tuple(prefix), tuple(loop))

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "Lasso":
        """Parse '{a}{} ({b}{a})' style text: prefix letters, loop in parentheses."""
        match = re.fullmatch(r"\s*((?:\{[^}]*\}\s*)*)\(\s*((?:\{[^}]*\}\s*)+)\)\s*", text)
        if not match:
            raise AlphabetError(f"Cannot parse lasso {text!r}; expected 'u (v)'.")
        prefix = [alphabet.parse_letter(tok) for tok in re.findall(r"\{[^}]*\}", match[1])]
        loop = [alphabet.parse_letter(tok) for tok in re.findall(r"\{[^}]*\}", match[2])]
        return cls.of(prefix, loop)

    @property
    def length(self) -> int:
        return len(self.prefix) + len(self.loop)

    @property
    def base(self) -> tuple[int, ...]:
        return self.prefix + self.loop

    @property
    def loop_start(self) -> int:
        return len(self.prefix)

    def letter_at(self, position: int) -> int:
        """Letter at any position of the induced infinite word."""
        if position < len(self.prefix):
            return self.prefix[position]
        return self.loop[(position - len(self.prefix)) % len(self.loop)]

    def unroll_prefix(self) -> "Lasso":
        """(u, v) -> (u·v, v)."""
        return Lasso(self.prefix + self.loop, self.loop)

    def unroll_loop(self) -> "Lasso":
        """(u, v) -> (u, v·v)."""
        return Lasso(self.prefix, self.loop + self.loop)

    def format(self, alphabet: Alphabet) -> str:
        prefix = "".join(alphabet.format_letter(letter) for letter in self.prefix)
        loop = "".join(alphabet.format_letter(letter) for letter in self.loop)
        return f"{prefix}({loop})" if prefix else f"({loop})"


def check_lasso(lasso: Lasso, alphabet: Alphabet) -> None:
    """Raise if the lasso uses letters outside the alphabet."""
    if not lasso.loop:
        raise AlphabetError("The loop of a lasso must be nonempty.")
    for letter in lasso.base:
        if not 0 <= letter < alphabet.size:
            raise AlphabetError(
                f"Letter {letter} is not a subset of {{{alphabet}}}."
            )


def lassos_of_length(alphabet_size: int, n: int) -> Iterator[Lasso]:
    """All n·|Σ|^n lassos of length n: loop-start index, then lexicographic base."""
    for loop_start in range(n):
        for base in itertools.product(range(alphabet_size), repeat=n):
            yield Lasso(base[:loop_start], base[loop_start:])
