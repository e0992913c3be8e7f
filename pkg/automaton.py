"""
Parity Automaton Module.
Complete max-even parity automata (Büchi = colors {1, 2}) with a
line-oriented text format: parsing, validation, optional completion
with a rejecting sink, printing, and the deterministic color-shift complement.
"""

import logging
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

import networkx as nx

from alphabet import Alphabet
from config import AUTOMATON_ENCODINGS
from errors import (
    AlphabetError, AutomatonFormatError, DeterminismError, IncompleteAutomatonError,
    UnsupportedModeError,
)

logger = logging.getLogger(__name__)

_TRANS_LINE = re.compile(r"(\d+)\s*(\{[^}]*\})\s*(\d+)")


class AutomatonMode(str, Enum):
    DETERMINISTIC = "deterministic"
    UNAMBIGUOUS = "unambiguous"
    NONDETERMINISTIC = "nondeterministic"


@dataclass(frozen=True)
class ParityAutomaton:
    """
    (Q, Q0, δ, c) over Σ = 2^AP with states 0..num_states-1.
    transitions[q][letter] is the sorted tuple of successors of (q, letter).
    """

    alphabet: Alphabet
    num_states: int
    initial_states: tuple[int, ...]
    colors: tuple[int, ...]
    transitions: tuple[tuple[tuple[int, ...], ...], ...]
    mode: AutomatonMode

    def __post_init__(self):
        if not self.initial_states:
            raise AutomatonFormatError("At least one initial state is required.")
        for state in self.initial_states:
            self._check_state(state)
        if len(self.colors) != self.num_states or any(c < 0 for c in self.colors):
            raise AutomatonFormatError("Every state needs exactly one natural color.")
        if len(self.transitions) != self.num_states:
            raise AutomatonFormatError("Transition table does not match the state count.")
        for state, row in enumerate(self.transitions):
            if len(row) != self.alphabet.size:
                raise AutomatonFormatError(f"State {state} has a malformed transition row.")
            for letter, targets in enumerate(row):
                if not targets:
                    raise IncompleteAutomatonError(state, self.alphabet.format_letter(letter))
                for target in targets:
                    self._check_state(target)
        if self.mode is AutomatonMode.DETERMINISTIC:
            if len(self.initial_states) != 1:
                raise DeterminismError("A deterministic automaton has exactly one initial state.")
            for state, row in enumerate(self.transitions):
                for letter, targets in enumerate(row):
                    if len(targets) != 1:
                        raise DeterminismError(
                            f"State {state} has {len(targets)} successors on "
                            f"{self.alphabet.format_letter(letter)} in deterministic mode."
                        )

    def _check_state(self, state: int) -> None:
        if not 0 <= state < self.num_states:
            raise AutomatonFormatError(f"State {state} is out of range 0..{self.num_states - 1}.")

    # ─── Queries ─────────────────────────────────────────────────────────

    @property
    def is_deterministic(self) -> bool:
        return self.mode is AutomatonMode.DETERMINISTIC

    @property
    def states(self) -> range:
        return range(self.num_states)

    @property
    def initial_state(self) -> int:
        """The single initial state of a deterministic automaton."""
        self.require_deterministic("initial_state")
        return self.initial_states[0]

    def successors(self, state: int, letter: int) -> tuple[int, ...]:
        return self.transitions[state][letter]

    def step(self, state: int, letter: int) -> int:
        """Deterministic successor."""
        return self.transitions[state][letter][0]

    def require_deterministic(self, operation: str) -> None:
        if not self.is_deterministic:
            raise UnsupportedModeError(
                f"{operation} requires a deterministic automaton (mode is {self.mode.value})."
            )

    @cached_property
    def graph(self) -> nx.DiGraph:
        """State graph with an edge q -> q' whenever some letter leads from q to q'."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.states)
        for state, row in enumerate(self.transitions):
            for targets in row:
                graph.add_edges_from((state, target) for target in targets)
        return graph


# ─── Derived Automata ────────────────────────────────────────────────────────

def complement(aut: ParityAutomaton) -> ParityAutomaton:
    """Deterministic parity complement: every color shifted by one."""
    aut.require_deterministic("complement")
    return replace(aut, colors=tuple(color + 1 for color in aut.colors))


def state_after(aut: ParityAutomaton, word: Iterable[int]) -> int:
    """State reached by the deterministic run on a finite word."""
    state = aut.initial_state
    for letter in word:
        state = aut.step(state, letter)
    return state


# ─── Text Format ─────────────────────────────────────────────────────────────

def parse_automaton(text: str, complete_with_sink: bool = False) -> ParityAutomaton:
    """
    Parse and validate an automaton in the line-oriented text format.

    Args:
        text: File contents ('#' starts a comment).
        complete_with_sink: Route every missing (state, letter) pair to a fresh
            rejecting sink instead of failing.

    Returns:
        A validated, complete automaton.

    Raises:
        AutomatonFormatError: Malformed line (with line number) or unknown proposition.
        IncompleteAutomatonError: A (state, letter) pair has no transition.
        DeterminismError: Deterministic mode with several starts or successors.
    """
    header: dict[str, tuple[int, str]] = {}
    colors: dict[int, int] = {}
    raw_transitions: list[tuple[int, int, str, int]] = []

    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip().lower(), value.strip()
        if not sep:
            raise AutomatonFormatError(f"Expected 'key: value', got {line!r}.", number)

        if key in ("alphabet", "states", "mode", "start"):
            if key in header:
                raise AutomatonFormatError(f"Duplicate '{key}' line.", number)
            header[key] = (number, value)
        elif key == "color":
            parts = value.split()
            if len(parts) != 2 or not all(part.isdigit() for part in parts):
                raise AutomatonFormatError("Expected 'color: <state> <natural>'.", number)
            state, color = int(parts[0]), int(parts[1])
            if state in colors:
                raise AutomatonFormatError(f"Duplicate color for state {state}.", number)
            colors[state] = color
        elif key == "trans":
            match = _TRANS_LINE.fullmatch(value)
            if not match:
                raise AutomatonFormatError("Expected 'trans: <src> {p,q,...} <dst>'.", number)
            raw_transitions.append((number, int(match[1]), match[2], int(match[3])))
        else:
            raise AutomatonFormatError(f"Unknown key '{key}'.", number)

    for key in ("alphabet", "states", "start"):
        if key not in header:
            raise AutomatonFormatError(f"Missing '{key}' line.")

    line_no, value = header["alphabet"]
    try:
        alphabet = Alphabet.from_text(value)
    except AlphabetError as e:
        raise AutomatonFormatError(str(e), line_no) from e

    line_no, value = header["states"]
    if not value.isdigit() or int(value) < 1:
        raise AutomatonFormatError("'states' must be a positive natural.", line_no)
    num_states = int(value)

    mode = AutomatonMode.NONDETERMINISTIC
    if "mode" in header:
        line_no, value = header["mode"]
        try:
            mode = AutomatonMode(value.lower())
        except ValueError:
            raise AutomatonFormatError(f"Unknown mode '{value}'.", line_no) from None

    line_no, value = header["start"]
    try:
        initial = tuple(sorted({int(part) for part in re.split(r"[,\s]+", value) if part}))
    except ValueError:
        raise AutomatonFormatError("'start' lists state numbers.", line_no) from None
    for state in initial:
        if state >= num_states:
            raise AutomatonFormatError(f"Start state {state} is out of range.", line_no)

    for state in range(num_states):
        if state not in colors:
            raise AutomatonFormatError(f"State {state} has no color.")
    for state in colors:
        if state >= num_states:
            raise AutomatonFormatError(f"Color given for unknown state {state}.")

    table: list[list[set[int]]] = [[set() for _ in alphabet.letters()] for _ in range(num_states)]
    seen: set[tuple[int, int]] = set()
    for number, source, letter_text, target in raw_transitions:
        if source >= num_states or target >= num_states:
            raise AutomatonFormatError(f"Transition {source} -> {target} leaves 0..{num_states - 1}.", number)
        try:
            letter = alphabet.parse_letter(letter_text)
        except AlphabetError as e:
            raise AutomatonFormatError(str(e), number) from e
        if mode is AutomatonMode.DETERMINISTIC and (source, letter) in seen:
            raise DeterminismError(
                f"line {number}: second transition for ({source}, "
                f"{alphabet.format_letter(letter)}) in deterministic mode."
            )
        seen.add((source, letter))
        table[source][letter].add(target)

    color_list = [colors[state] for state in range(num_states)]
    missing = [
        (state, letter)
        for state in range(num_states)
        for letter in alphabet.letters()
        if not table[state][letter]
    ]
    if missing:
        if not complete_with_sink:
            state, letter = missing[0]
            raise IncompleteAutomatonError(state, alphabet.format_letter(letter))
        sink = num_states
        table.append([{sink} for _ in alphabet.letters()])
        color_list.append(1)
        for state, letter in missing:
            table[state][letter].add(sink)
        num_states += 1
        logger.warning(
            f"Completed automaton with rejecting sink {sink} "
            f"({len(missing)} missing transitions)."
        )

    automaton = ParityAutomaton(
        alphabet=alphabet,
        num_states=num_states,
        initial_states=initial,
        colors=tuple(color_list),
        transitions=tuple(tuple(tuple(sorted(targets)) for targets in row) for row in table),
        mode=mode,
    )
    logger.info(
        f"Parsed {mode.value} automaton: {num_states} states over {{{alphabet}}}."
    )
    return automaton


def load_automaton(path: str | Path, complete_with_sink: bool = False) -> ParityAutomaton:
    """
    Read and parse an automaton file.

    Raises:
        AutomatonFormatError: If the file cannot be read or parsed.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise AutomatonFormatError(f"Cannot read automaton file '{path}': {e}") from e
    return parse_automaton(_decode(data), complete_with_sink)


def format_automaton(aut: ParityAutomaton) -> str:
    """Render back into the text format; parse_automaton(format_automaton(a)) == a."""
    lines = [
        f"alphabet: {' '.join(aut.alphabet.propositions)}",
        f"states: {aut.num_states}",
        f"mode: {aut.mode.value}",
        f"start: {' '.join(str(state) for state in aut.initial_states)}",
    ]
    lines += [f"color: {state} {color}" for state, color in enumerate(aut.colors)]
    for state, row in enumerate(aut.transitions):
        for letter, targets in enumerate(row):
            for target in targets:
                lines.append(f"trans: {state} {aut.alphabet.format_letter(letter)} {target}")
    return "\n".join(lines) + "\n"


def _decode(data: bytes) -> str:
    """Decode file bytes, trying the configured encodings in order."""
    for encoding in AUTOMATON_ENCODINGS:
        try:
            return data.decode(encoding)
        except (UnicodeDecodeError, LookupError):
            continue
    return data.decode("utf-8", errors="replace")
