"""
Density Engine Module.
Orchestrates the analyses behind each command:
parsing → enumeration or automaton analysis → exact results for rendering.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from alphabet import Alphabet, Lasso, lassos_of_length
from automaton import AutomatonMode, ParityAutomaton, load_automaton
from automaton_analysis import AutomatonPredicate, ClassPartitionCounts, partition_counts
from composition import ConvergenceClass, Reduction, convergence_class, reduce_formula
from config import DEFAULT_JOBS, LASSO_DENSITY_CAP, OSCILLATION_READING
from density import DensityReport, asymptotic_density, qualitative_report
from errors import InconsistencyError
from lasso_lab import (
    OSCILLATION_ALPHABET, CurveRow, DensityCurve, FormulaPredicate, IntervalSchedule,
    MembershipPredicate, OscillatingPredicate, count_models, density_curve, total_lassos,
)
from ltl import Formula, SyntacticClass, classify_syntactic
from ltl_parser import parse_ltl

logger = logging.getLogger(__name__)


# ─── Results ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ClassifyResult:
    formula: Formula
    syntactic: SyntacticClass
    convergence: ConvergenceClass


@dataclass(frozen=True)
class PartitionResult:
    counts: ClassPartitionCounts
    rate: Fraction          # r(n) from an independent acceptance count

    @property
    def bounds_hold(self) -> bool:
        counts = self.counts
        return counts.base_model_rate <= self.rate <= 1 - counts.base_non_model_rate


@dataclass(frozen=True)
class CrosscheckRow:
    n: int
    disagreements: int
    models: int
    total: int
    gap: Optional[Fraction]     # |r(n) − r∞| when r∞ is computable

    @property
    def rate(self) -> Fraction:
        return Fraction(self.models, self.total)


@dataclass(frozen=True)
class CrosscheckResult:
    formula: Formula
    alphabet: Alphabet
    rows: tuple[CrosscheckRow, ...]
    asymptotic: Optional[Fraction]
    witness: Optional[Lasso] = None

    @property
    def agrees(self) -> bool:
        return all(row.disagreements == 0 for row in self.rows)


class DisagreementPredicate(MembershipPredicate):
    """Lassos on which two predicates give different verdicts."""

    def __init__(self, left: MembershipPredicate, right: MembershipPredicate):
        self.left = left
        self.right = right

    def __call__(self, lasso: Lasso) -> bool:
        return self.left(lasso) != self.right(lasso)

    def describe(self) -> str:
        return f"{self.left.describe()} != {self.right.describe()}"


# ─── Engine ──────────────────────────────────────────────────────────────────

class DensityEngine:
    """
    Ties the parser, the enumeration lab, the automaton analyses and the
    composition calculus together under one enumeration cap and worker count.
    """

    def __init__(
        self,
        cap: Optional[int] = None,
        jobs: Optional[int] = None,
        reading: Optional[str] = None,
        complete_with_sink: bool = False,
    ):
        self.cap = LASSO_DENSITY_CAP if cap is None else cap
        self.jobs = jobs or DEFAULT_JOBS
        self.reading = reading or OSCILLATION_READING
        self.complete_with_sink = complete_with_sink
        logger.info(
            f"Density engine ready (cap={self.cap}, jobs={self.jobs}, reading={self.reading})."
        )

    # ─── Formula Commands ────────────────────────────────────────────────

    def classify(self, formula_text: str, alphabet: Alphabet) -> ClassifyResult:
        formula = parse_ltl(formula_text, alphabet)
        return ClassifyResult(
            formula=formula,
            syntactic=classify_syntactic(formula),
            convergence=convergence_class(formula, alphabet, self.cap),
        )

    def count(self, formula_text: str, alphabet: Alphabet, n: int) -> CurveRow:
        formula = parse_ltl(formula_text, alphabet)
        pred = FormulaPredicate(formula, alphabet)
        count = count_models(pred, alphabet, n, self.cap, self.jobs)
        return CurveRow(n, count, total_lassos(alphabet.size, n))

    def curve(self, formula_text: str, alphabet: Alphabet, n_max: int) -> DensityCurve:
        formula = parse_ltl(formula_text, alphabet)
        return density_curve(FormulaPredicate(formula, alphabet), alphabet, n_max, self.cap, self.jobs)

    def compose(self, formula_text: str, alphabet: Alphabet) -> Reduction:
        return reduce_formula(parse_ltl(formula_text, alphabet), alphabet, self.cap)

    def oscillate(self, schedule_text: str, n_max: int) -> DensityCurve:
        pred = OscillatingPredicate(IntervalSchedule.parse(schedule_text), self.reading)
        return density_curve(pred, OSCILLATION_ALPHABET, n_max, self.cap, self.jobs)

    # ─── Automaton Commands ──────────────────────────────────────────────

    def load(self, path: str | Path) -> ParityAutomaton:
        return load_automaton(path, self.complete_with_sink)

    def asymptotic(self, path: str | Path) -> DensityReport:
        """Exact density when the mode allows it, the qualitative checks otherwise."""
        aut = self.load(path)
        if aut.mode is AutomatonMode.NONDETERMINISTIC:
            logger.info("Nondeterministic automaton: reporting qualitative checks only.")
            return qualitative_report(aut)
        return asymptotic_density(aut)

    def partition(self, path: str | Path, n: int) -> PartitionResult:
        """
        Raises:
            InconsistencyError: If base + loop models differ from the acceptance count.
        """
        aut = self.load(path)
        counts = partition_counts(aut, n, self.cap, self.jobs)
        models = count_models(AutomatonPredicate(aut), aut.alphabet, n, self.cap, self.jobs)
        result = PartitionResult(counts, Fraction(models, counts.total))
        if result.rate != counts.base_model_rate + counts.loop_model_rate:
            raise InconsistencyError(
                f"r({n}) = {result.rate} but base and loop model rates sum to "
                f"{counts.base_model_rate + counts.loop_model_rate}."
            )
        return result

    def crosscheck(self, formula_text: str, path: str | Path, n_max: int) -> CrosscheckResult:
        """Compare formula and automaton verdicts on every lasso of length 1..n_max."""
        aut = self.load(path)
        alphabet = aut.alphabet
        formula = parse_ltl(formula_text, alphabet)
        by_formula = FormulaPredicate(formula, alphabet)
        by_automaton = AutomatonPredicate(aut)

        limit: Optional[Fraction] = None
        if aut.mode is not AutomatonMode.NONDETERMINISTIC:
            limit = asymptotic_density(aut).asymptotic_density

        rows = []
        witness = None
        for n in range(1, n_max + 1):
            disagreements = count_models(
                DisagreementPredicate(by_formula, by_automaton), alphabet, n, self.cap, self.jobs
            )
            models = count_models(by_formula, alphabet, n, self.cap, self.jobs)
            rate = Fraction(models, total_lassos(alphabet.size, n))
            gap = None if limit is None else abs(rate - limit)
            rows.append(CrosscheckRow(n, disagreements, models, total_lassos(alphabet.size, n), gap))
            if disagreements and witness is None:
                witness = next(
                    lasso for lasso in lassos_of_length(alphabet.size, n)
                    if by_formula(lasso) != by_automaton(lasso)
                )
                logger.warning(f"Formula and automaton disagree on {witness.format(alphabet)}.")

        return CrosscheckResult(formula, alphabet, tuple(rows), limit, witness)
