"""
Automaton Analysis Module.
SCC decomposition, lasso acceptance and accepting-run counting on the
(state × position) product graph, state-language emptiness and
universality, and the partition of lassos into base/loop models and
non-models.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from alphabet import Lasso, check_lasso
from automaton import ParityAutomaton, complement, state_after
from chunker import EnumerationChunker, WordBlock
from config import DEFAULT_JOBS
from lasso_lab import MembershipPredicate, guard_enumeration, map_blocks, total_lassos

logger = logging.getLogger(__name__)


# ─── Strongly Connected Components ───────────────────────────────────────────

@dataclass(frozen=True)
class Scc:
    states: frozenset[int]
    is_trivial: bool        # single state without a self-loop
    is_terminal: bool       # no transition leaves the component
    max_color: int

    @property
    def is_accepting(self) -> bool:
        return not self.is_trivial and self.max_color % 2 == 0

    def __str__(self) -> str:
        members = ",".join(str(state) for state in sorted(self.states))
        return f"{{{members}}}"


def scc_decompose(aut: ParityAutomaton) -> list[Scc]:
    """
    Maximal SCCs in topological order of the condensation, so terminal
    components come last. Among ready components, non-terminal ones go
    first, then the smallest member state decides.
    """
    graph = aut.graph
    condensed = nx.condensation(graph)
    order = nx.lexicographical_topological_sort(
        condensed,
        key=lambda node: (condensed.out_degree(node) == 0, min(condensed.nodes[node]["members"])),
    )
    result = []
    for node in order:
        members = frozenset(condensed.nodes[node]["members"])
        trivial = len(members) == 1 and not graph.has_edge(*(2 * tuple(members)))
        result.append(Scc(
            states=members,
            is_trivial=trivial,
            is_terminal=not trivial and condensed.out_degree(node) == 0,
            max_color=max(aut.colors[state] for state in members),
        ))
    logger.debug(f"Decomposed automaton into {len(result)} SCCs.")
    return result


def reachable_states(aut: ParityAutomaton) -> set[int]:
    reached = set(aut.initial_states)
    for state in aut.initial_states:
        reached |= nx.descendants(aut.graph, state)
    return reached


def _reachable_from(graph: nx.DiGraph, sources: Iterable[Hashable]) -> set:
    reachable: set = set()
    for source in sources:
        reachable.add(source)
        reachable |= nx.descendants(graph, source)
    return reachable


def _accepting_cycle_nodes(graph: nx.DiGraph, colorings: Sequence[Callable[[Hashable], int]]) -> set:
    """
    Nodes lying on a cycle whose maximal color is even under every coloring:
    for each choice of even bounds (c1, c2, ...), collect the nontrivial SCCs
    of the subgraph with every color ≤ its bound that reach each bound.
    """
    found: set = set()
    choices = [sorted({color(node) for node in graph if color(node) % 2 == 0}) for color in colorings]
    for bounds in itertools.product(*choices):
        sub = graph.subgraph(
            node for node in graph
            if all(color(node) <= bound for color, bound in zip(colorings, bounds))
        )
        for component in nx.strongly_connected_components(sub):
            node = next(iter(component))
            if len(component) == 1 and not sub.has_edge(node, node):
                continue
            if all(
                any(color(member) == bound for member in component)
                for color, bound in zip(colorings, bounds)
            ):
                found |= component
    return found


def _live_nodes(graph: nx.DiGraph, colorings: Sequence[Callable[[Hashable], int]]) -> set:
    """Nodes from which some infinite path is accepting under every coloring."""
    live = _accepting_cycle_nodes(graph, colorings)
    for node in list(live):
        live |= nx.ancestors(graph, node)
    return live


def _has_accepting_cycle(
    graph: nx.DiGraph,
    sources: Iterable[Hashable],
    color_of: Callable[[Hashable], int],
) -> bool:
    """True iff a cycle reachable from the sources has an even maximal color."""
    reachable = graph.subgraph(_reachable_from(graph, sources))
    return bool(_accepting_cycle_nodes(reachable, [color_of]))


# ─── State Languages ─────────────────────────────────────────────────────────

def nonempty_from(aut: ParityAutomaton, state: int) -> bool:
    """True iff some infinite word has an accepting run starting in `state`."""
    return _has_accepting_cycle(aut.graph, [state], lambda q: aut.colors[q])


def universal_from(aut: ParityAutomaton, state: int) -> bool:
    """
    True iff every infinite word is accepted from `state` (deterministic only),
    decided as emptiness of the color-shifted complement.
    """
    aut.require_deterministic("universal_from")
    return not nonempty_from(complement(aut), state)


# ─── Lasso Acceptance ────────────────────────────────────────────────────────

def _product_graph(aut: ParityAutomaton, lasso: Lasso) -> nx.DiGraph:
    """
    Nodes (q, i): the run is in q before reading base letter i.
    The successor of position n-1 is the loop entry |u|.
    """
    base = lasso.prefix + lasso.loop
    n, entry = len(base), len(lasso.prefix)
    graph = nx.DiGraph()
    pending = [(state, 0) for state in aut.initial_states]
    graph.add_nodes_from(pending)
    while pending:
        state, i = pending.pop()
        following = i + 1 if i + 1 < n else entry
        for target in aut.successors(state, base[i]):
            node = (target, following)
            if node not in graph:
                pending.append(node)
            graph.add_edge((state, i), node)
    return graph


def _accepts_deterministic(aut: ParityAutomaton, lasso: Lasso) -> bool:
    state = state_after(aut, lasso.prefix)
    first_seen: dict[int, int] = {}
    rounds: list[list[int]] = []
    while state not in first_seen:
        first_seen[state] = len(rounds)
        visited = []
        for letter in lasso.loop:
            visited.append(state)
            state = aut.step(state, letter)
        rounds.append(visited)
    cycle_colors = (aut.colors[q] for visited in rounds[first_seen[state]:] for q in visited)
    return max(cycle_colors) % 2 == 0


def accepts_lasso(aut: ParityAutomaton, lasso: Lasso) -> bool:
    """
    True iff some run of the automaton on u·v^ω is accepting.

    Raises:
        AlphabetError: If the lasso's letters are not in the automaton's alphabet.
    """
    check_lasso(lasso, aut.alphabet)
    if aut.is_deterministic:
        return _accepts_deterministic(aut, lasso)
    graph = _product_graph(aut, lasso)
    sources = [(state, 0) for state in aut.initial_states]
    return _has_accepting_cycle(graph, sources, lambda node: aut.colors[node[0]])


def count_accepting_runs(
    aut: ParityAutomaton,
    lasso: Lasso,
    limit: Optional[int] = None,
) -> int | float:
    """
    Number of distinct accepting runs on u·v^ω, math.inf when there are
    infinitely many.

    Accepting runs are exactly the infinite paths through live product
    nodes (those that can still reach an accepting cycle). Their number is
    finite iff every cyclic component of that region is a simple cycle with
    no live exit; the count is then the number of paths into those cycles.

    Args:
        limit: Cap the returned count at this value.
    """
    check_lasso(lasso, aut.alphabet)
    graph = _product_graph(aut, lasso)
    live = _live_nodes(graph, [lambda node: aut.colors[node[0]]])
    sources = [(state, 0) for state in aut.initial_states if (state, 0) in live]
    region = graph.subgraph(_reachable_from(graph.subgraph(live), sources))

    condensed = nx.condensation(region)
    runs: dict[int, int | float] = {}
    for component in reversed(list(nx.topological_sort(condensed))):
        members = condensed.nodes[component]["members"]
        inner = region.subgraph(members)
        if inner.number_of_edges() == 0:
            runs[component] = sum(runs[after] for after in condensed.successors(component))
        elif inner.number_of_edges() == len(members) and condensed.out_degree(component) == 0:
            runs[component] = 1
        else:
            runs[component] = math.inf
    mapping = condensed.graph["mapping"]
    count = sum((runs[mapping[source]] for source in sources), 0)
    return count if limit is None else min(count, limit)


def is_unambiguous(aut: ParityAutomaton) -> bool:
    """
    Exact check that no infinite word has two accepting runs.

    Runs in lockstep on the pair product: the automaton is ambiguous iff a
    reachable pair (p, q) with p != q can still reach a cycle that is
    accepting in both components.
    """
    pending = [(p, q) for p in aut.initial_states for q in aut.initial_states]
    graph = nx.DiGraph()
    graph.add_nodes_from(pending)
    while pending:
        node = pending.pop()
        p, q = node
        for letter in aut.alphabet.letters():
            for target in itertools.product(aut.successors(p, letter), aut.successors(q, letter)):
                if target not in graph:
                    pending.append(target)
                graph.add_edge(node, target)
    colorings = [lambda pair: aut.colors[pair[0]], lambda pair: aut.colors[pair[1]]]
    live = _live_nodes(graph, colorings)
    return all(p == q for p, q in live)


class AutomatonPredicate(MembershipPredicate):
    """Membership in the language of a parity automaton."""

    def __init__(self, aut: ParityAutomaton):
        self.aut = aut

    def __call__(self, lasso: Lasso) -> bool:
        return accepts_lasso(self.aut, lasso)

    def describe(self) -> str:
        return f"{self.aut.mode.value} automaton ({self.aut.num_states} states)"


# ─── Lasso Classes ───────────────────────────────────────────────────────────

class LassoClass(str, Enum):
    BASE_NON_MODEL = "BaseNonModel"
    BASE_MODEL = "BaseModel"
    LOOP_NON_MODEL = "LoopNonModel"
    LOOP_MODEL = "LoopModel"


class PrefixClassifier:
    """Per-state bad/good prefix verdicts of a deterministic automaton, computed once."""

    def __init__(self, aut: ParityAutomaton):
        aut.require_deterministic("lasso classification")
        self.aut = aut
        shifted = complement(aut)
        self.bad = frozenset(q for q in aut.states if not nonempty_from(aut, q))
        self.good = frozenset(q for q in aut.states if not nonempty_from(shifted, q))

    def classify(self, lasso: Lasso) -> LassoClass:
        state = state_after(self.aut, lasso.prefix + lasso.loop)
        if state in self.bad:
            return LassoClass.BASE_NON_MODEL
        if state in self.good:
            return LassoClass.BASE_MODEL
        if _accepts_deterministic(self.aut, lasso):
            return LassoClass.LOOP_MODEL
        return LassoClass.LOOP_NON_MODEL

    def tally(self, base: tuple[int, ...]) -> tuple[int, int, int, int]:
        """
        Class sizes among the n lassos sharing this base, ordered as
        (base non-models, base models, loop non-models, loop models).
        """
        n = len(base)
        state = state_after(self.aut, base)
        if state in self.bad:
            return n, 0, 0, 0
        if state in self.good:
            return 0, n, 0, 0
        models = sum(
            1 for k in range(n) if _accepts_deterministic(self.aut, Lasso(base[:k], base[k:]))
        )
        return 0, 0, n - models, models


def classify_lasso(aut: ParityAutomaton, lasso: Lasso) -> LassoClass:
    """
    Base (non-)model when the base u·v is a good (bad) prefix, else loop
    (non-)model by acceptance. Deterministic automata only.
    """
    check_lasso(lasso, aut.alphabet)
    return PrefixClassifier(aut).classify(lasso)


@dataclass(frozen=True)
class ClassPartitionCounts:
    n: int
    base_non_models: int
    base_models: int
    loop_non_models: int
    loop_models: int
    total: int

    @property
    def models(self) -> int:
        return self.base_models + self.loop_models

    @property
    def non_models(self) -> int:
        return self.base_non_models + self.loop_non_models

    @property
    def density(self) -> Fraction:
        return Fraction(self.models, self.total)

    @property
    def base_model_rate(self) -> Fraction:
        return Fraction(self.base_models, self.total)

    @property
    def base_non_model_rate(self) -> Fraction:
        return Fraction(self.base_non_models, self.total)

    @property
    def loop_model_rate(self) -> Fraction:
        return Fraction(self.loop_models, self.total)

    @property
    def loop_non_model_rate(self) -> Fraction:
        return Fraction(self.loop_non_models, self.total)

    def as_dict(self) -> dict[LassoClass, int]:
        return {
            LassoClass.BASE_NON_MODEL: self.base_non_models,
            LassoClass.BASE_MODEL: self.base_models,
            LassoClass.LOOP_NON_MODEL: self.loop_non_models,
            LassoClass.LOOP_MODEL: self.loop_models,
        }


def _partition_block(task: tuple[PrefixClassifier, int, WordBlock]) -> tuple[int, ...]:
    classifier, size, block = task
    totals = [0, 0, 0, 0]
    for base in block.words(size):
        for k, count in enumerate(classifier.tally(base)):
            totals[k] += count
    return tuple(totals)


def partition_counts(
    aut: ParityAutomaton,
    n: int,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> ClassPartitionCounts:
    """
    Exact sizes of the four lasso classes at length n (deterministic only).

    Raises:
        ResourceCapExceeded: If n·|Σ|^n exceeds the cap.
        UnsupportedModeError: For non-deterministic automata.
    """
    size = aut.alphabet.size
    total = total_lassos(size, n)
    guard_enumeration(total, cap)
    jobs = jobs or DEFAULT_JOBS
    classifier = PrefixClassifier(aut)
    tasks = [(classifier, size, block) for block in EnumerationChunker(jobs).word_blocks(size, n)]
    tallies = map_blocks(_partition_block, tasks, jobs)
    counts = [sum(column) for column in zip(*tallies)]
    result = ClassPartitionCounts(n, *counts, total=total)
    logger.info(
        f"Partition at n={n}: base non-models {result.base_non_models}, base models "
        f"{result.base_models}, loop non-models {result.loop_non_models}, "
        f"loop models {result.loop_models}."
    )
    return result
