"""
Lasso Lab Module.
Exact brute-force counting over all lassos of a given length:
cardinalities, density curves, growth functions, complements, and the
oscillating (non-convergent) property.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from alphabet import Alphabet, Lasso
from chunker import EnumerationChunker, WordBlock
from config import DEFAULT_JOBS, LASSO_DENSITY_CAP, OSCILLATION_READING, OSCILLATION_READINGS
from errors import AlphabetError, ResourceCapExceeded, ScheduleError
from ltl import Formula
from semantics import LassoEvaluator

logger = logging.getLogger(__name__)


# ─── Membership Predicates ───────────────────────────────────────────────────

class MembershipPredicate:
    """
    A total, deterministic decision procedure on lassos.
    Subclasses must be picklable so enumeration can run in worker processes.
    """

    #: True when the verdict depends on the loop v only (never on u).
    prefix_independent: bool = False

    def __call__(self, lasso: Lasso) -> bool:
        raise NotImplementedError

    def count_loop_starts(self, base: tuple[int, ...]) -> int:
        """Number of the lassos (base[:k], base[k:]), k = 0..n-1, the predicate accepts."""
        return sum(1 for k in range(len(base)) if self(Lasso(base[:k], base[k:])))

    def describe(self) -> str:
        return type(self).__name__


class FormulaPredicate(MembershipPredicate):
    """Membership in the models of an LTL formula."""

    def __init__(self, formula: Formula, alphabet: Alphabet):
        self.evaluator = LassoEvaluator(formula, alphabet)

    def __call__(self, lasso: Lasso) -> bool:
        return self.evaluator(lasso)

    def count_loop_starts(self, base: tuple[int, ...]) -> int:
        return self.evaluator.count_loop_starts(base)

    def describe(self) -> str:
        return str(self.evaluator.formula)


class NegatedPredicate(MembershipPredicate):
    def __init__(self, inner: MembershipPredicate):
        self.inner = inner
        self.prefix_independent = inner.prefix_independent

    def __call__(self, lasso: Lasso) -> bool:
        return not self.inner(lasso)

    def count_loop_starts(self, base: tuple[int, ...]) -> int:
        return len(base) - self.inner.count_loop_starts(base)

    def describe(self) -> str:
        return f"not ({self.inner.describe()})"


# ─── Oscillating Property ────────────────────────────────────────────────────

@dataclass(frozen=True)
class IntervalSchedule:
    """Pairs (c_i, d_i) with c_1 <= d_1 < c_2 <= d_2 < ...; periods δ range over [c_i, d_i)."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        previous_end = 0
        for low, high in self.intervals:
            if low < 1 or high < 1:
                raise ScheduleError(f"Interval bounds must be at least 1: ({low}, {high}).")
            if not low <= high:
                raise ScheduleError(f"Interval ({low}, {high}) has c > d.")
            if low <= previous_end:
                raise ScheduleError(
                    f"Intervals must interleave strictly: c={low} follows d={previous_end}."
                )
            previous_end = high

    @classmethod
    def parse(cls, text: str) -> "IntervalSchedule":
        """Parse 'c1:d1,c2:d2,...'."""
        pairs = []
        for part in filter(None, (piece.strip() for piece in text.split(","))):
            try:
                low, high = (int(value) for value in part.split(":"))
            except ValueError:
                raise ScheduleError(f"Bad interval {part!r}; expected 'c:d'.") from None
            pairs.append((low, high))
        if not pairs:
            raise ScheduleError("The schedule needs at least one interval.")
        return cls(tuple(pairs))

    def periods(self) -> Iterator[int]:
        for low, high in self.intervals:
            yield from range(low, high)

    def __str__(self) -> str:
        return ",".join(f"{low}:{high}" for low, high in self.intervals)


def oscillating_membership(
    schedule: IntervalSchedule,
    lasso: Lasso,
    reading: str = OSCILLATION_READING,
) -> bool:
    """
    Membership in the oscillating property over AP = {a}.

    A word is a model if {a} occurs at some position p and, for a period δ
    in one of the schedule's intervals, from p onward {a} holds at
    p, p+δ, p+2δ, ... ("exact": and nowhere else; "at-least": other
    positions unconstrained). Because the tail is v^ω, both readings are
    decided on the loop alone.

    Raises:
        AlphabetError: If the lasso uses letters other than {} and {a}.
    """
    if reading not in OSCILLATION_READINGS:
        raise ValueError(f"Unknown oscillation reading {reading!r}.")
    if any(letter not in (0, 1) for letter in lasso.prefix + lasso.loop):
        raise AlphabetError("The oscillating property is defined over AP = {a} only.")

    loop = lasso.loop
    length = len(loop)
    marked = [i for i, letter in enumerate(loop) if letter]
    if not marked:
        return False

    if reading == "exact":
        # δ must divide |v| for the progression to be invariant under the loop shift.
        first = marked[0]
        return any(
            length % delta == 0 and first < delta
            and marked == list(range(first, length, delta))
            for delta in schedule.periods()
        )

    for step in {math.gcd(delta, length) for delta in schedule.periods()}:
        for offset in range(step):
            if all(loop[position] for position in range(offset, length, step)):
                return True
    return False


class OscillatingPredicate(MembershipPredicate):
    prefix_independent = True

    def __init__(self, schedule: IntervalSchedule, reading: str = OSCILLATION_READING):
        if reading not in OSCILLATION_READINGS:
            raise ValueError(
                f"Unknown oscillation reading {reading!r}; use one of {OSCILLATION_READINGS}."
            )
        self.schedule = schedule
        self.reading = reading

    def __call__(self, lasso: Lasso) -> bool:
        return oscillating_membership(self.schedule, lasso, self.reading)

    def describe(self) -> str:
        return f"oscillating[{self.schedule}, {self.reading}]"


OSCILLATION_ALPHABET = Alphabet(("a",))


# ─── Density Curve ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CurveRow:
    n: int
    count: int
    total: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.count, self.total)


@dataclass(frozen=True)
class DensityCurve:
    alphabet_size: int
    rows: tuple[CurveRow, ...]

    def row(self, n: int) -> CurveRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise ValueError(f"The curve has no row for n={n}.")

    def rate(self, n: int) -> Fraction:
        return self.row(n).rate

    def __iter__(self):
        return iter(self.rows)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    growth: Optional[Fraction]     # None when #φ(n) = 0
    universal: Fraction


# ─── Counting ────────────────────────────────────────────────────────────────

def total_lassos(alphabet_size: int, n: int) -> int:
    """n·|Σ|^n."""
    return n * alphabet_size ** n


def universal_growth(alphabet_size: int, n: int) -> Fraction:
    """ς_⊤(n) = |Σ|·(n+1)/n."""
    if n < 1:
        raise ValueError("n must be at least 1.")
    return Fraction(alphabet_size * (n + 1), n)


def count_models(
    pred: MembershipPredicate,
    alphabet: Alphabet,
    n: int,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> int:
    """
    Number of lassos of length n accepted by the predicate.

    Args:
        pred: Membership predicate.
        alphabet: Alphabet the lassos range over.
        n: Lasso length (>= 1).
        cap: Maximum n·|Σ|^n to enumerate (defaults to LASSO_DENSITY_CAP).
        jobs: Worker processes (defaults to DEFAULT_JOBS).

    Raises:
        ResourceCapExceeded: If n·|Σ|^n exceeds the cap.
    """
    if n < 1:
        raise ValueError("n must be at least 1.")
    size = alphabet.size
    guard_enumeration(total_lassos(size, n), cap)
    jobs = jobs or DEFAULT_JOBS

    if pred.prefix_independent:
        loop_counts = _loop_counts(pred, size, n, jobs)
        count = sum(loop_counts[length] * size ** (n - length) for length in range(1, n + 1))
    else:
        blocks = EnumerationChunker(jobs).word_blocks(size, n)
        count = _sum_blocks(_count_base_block, [(pred, size, block) for block in blocks], jobs)

    logger.info(f"#({pred.describe()})({n}) = {count} of {total_lassos(size, n)} lassos.")
    return count


def complement_count(
    pred: MembershipPredicate,
    alphabet: Alphabet,
    n: int,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> int:
    """Number of n-non-models: n·|Σ|^n − #φ(n)."""
    return total_lassos(alphabet.size, n) - count_models(pred, alphabet, n, cap, jobs)


def count_cyclic_models(
    pred: MembershipPredicate,
    alphabet: Alphabet,
    n: int,
    cap: Optional[int] = None,
) -> int:
    """Number of n-models with an empty prefix (loop at the first position)."""
    size = alphabet.size
    guard_enumeration(total_lassos(size, n), cap)
    return sum(1 for loop in WordBlock(n, ()).words(size) if pred(Lasso((), loop)))


def density_curve(
    pred: MembershipPredicate,
    alphabet: Alphabet,
    n_max: int,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> DensityCurve:
    """
    Rows n = 1..n_max with exact counts and rates.

    Raises:
        ResourceCapExceeded: If the largest row exceeds the cap.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1.")
    size = alphabet.size
    guard_enumeration(total_lassos(size, n_max), cap)
    jobs = jobs or DEFAULT_JOBS

    if pred.prefix_independent:
        loop_counts = _loop_counts(pred, size, n_max, jobs)
        counts = [
            sum(loop_counts[length] * size ** (n - length) for length in range(1, n + 1))
            for n in range(1, n_max + 1)
        ]
    else:
        counts = [count_models(pred, alphabet, n, cap, jobs) for n in range(1, n_max + 1)]

    rows = tuple(
        CurveRow(n, count, total_lassos(size, n)) for n, count in enumerate(counts, 1)
    )
    logger.info(f"Density curve of {pred.describe()} computed for n = 1..{n_max}.")
    return DensityCurve(size, rows)


def growth_function(curve: DensityCurve, n: int) -> Optional[Fraction]:
    """
    ς_φ(n) = #φ(n+1) / #φ(n); None (absent) when #φ(n) = 0.

    Raises:
        ValueError: If the curve lacks row n or n+1.
    """
    current, following = curve.row(n), curve.row(n + 1)
    if current.count == 0:
        return None
    return Fraction(following.count, current.count)


def growth_curve(curve: DensityCurve) -> list[GrowthRow]:
    """Growth and universal growth for every row that has a successor."""
    present = {row.n for row in curve.rows}
    return [
        GrowthRow(row.n, growth_function(curve, row.n), universal_growth(curve.alphabet_size, row.n))
        for row in curve.rows
        if row.n + 1 in present
    ]


# ─── Enumeration Helpers ─────────────────────────────────────────────────────

def guard_enumeration(requested: int, cap: Optional[int], what: str = "lassos") -> None:
    """Raise ResourceCapExceeded when `requested` exceeds the cap (LASSO_DENSITY_CAP by default)."""
    limit = LASSO_DENSITY_CAP if cap is None else cap
    if requested > limit:
        raise ResourceCapExceeded(requested, limit, what)


def _count_base_block(task: tuple[MembershipPredicate, int, WordBlock]) -> int:
    pred, size, block = task
    return sum(pred.count_loop_starts(base) for base in block.words(size))


def _count_loop_block(task: tuple[MembershipPredicate, int, WordBlock]) -> int:
    pred, size, block = task
    return sum(1 for loop in block.words(size) if pred(Lasso((), loop)))


def _loop_counts(pred: MembershipPredicate, size: int, max_length: int, jobs: int) -> dict[int, int]:
    """Accepted loops per loop length, for prefix-independent predicates."""
    chunker = EnumerationChunker(jobs)
    counts = {}
    for length in range(1, max_length + 1):
        tasks = [(pred, size, block) for block in chunker.word_blocks(size, length)]
        counts[length] = _sum_blocks(_count_loop_block, tasks, jobs)
    return counts


def map_blocks(worker: Callable, tasks: Iterable, jobs: int) -> list:
    """Per-block results in task order, computed in worker processes when jobs > 1."""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def _sum_blocks(worker: Callable, tasks: Iterable, jobs: int) -> int:
    """Exact sum of per-block counts; identical for any worker count."""
    return sum(map_blocks(worker, tasks, jobs))
